"""Occupation-number states and second-quantized operators for the two-shell model.

The electron system has 8 spin-orbitals in the fixed canonical order

    (1s up, 1s down, 2p[m=-1] up, 2p[m=-1] down,
     2p[m=0] up, 2p[m=0] down, 2p[m=1] up, 2p[m=1] down)

plus two fermionic photoelectron modes (one per spin, the kinetic energy is
carried as a parameter elsewhere) and three bosonic photon modes (incident
beam and the two emitted polarizations). Fermionic creation picks up the sign
(-1)^(number of occupied modes preceding the target in canonical order);
photoelectron modes sit after all 8 orbitals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

__all__ = [
    "Spin",
    "Shell",
    "SpinOrbital",
    "PhotonMode",
    "ORBITALS",
    "FockState",
    "ManyBodyVector",
    "vacuum",
    "basis_vector",
    "create",
    "annihilate",
    "create_photoelectron",
    "annihilate_photoelectron",
    "create_photon",
    "annihilate_photon",
    "inner",
]


class Spin(Enum):
    UP = "up"
    DOWN = "down"

    @property
    def twice_sz(self) -> int:
        return 1 if self is Spin.UP else -1

    def __str__(self) -> str:
        return self.value


class Shell(Enum):
    S1S = "1s"
    P2P = "2p"


class PhotonMode(Enum):
    """Photon registers: the incident beam and the two emitted polarizations."""

    INCIDENT = 0
    EMITTED_1 = 1
    EMITTED_2 = 2


@dataclass(frozen=True)
class SpinOrbital:
    shell: Shell
    m: int
    spin: Spin

    def __post_init__(self):
        if self.shell is Shell.S1S and self.m != 0:
            raise ValueError("1s orbital has m = 0")
        if self.shell is Shell.P2P and self.m not in (-1, 0, 1):
            raise ValueError("2p orbital needs m in {-1, 0, 1}")

    @property
    def index(self) -> int:
        return _ORBITAL_INDEX[self]

    def __str__(self) -> str:
        tag = "" if self.shell is Shell.S1S else f"[{self.m:+d}]"
        return f"{self.shell.value}{tag}{'+' if self.spin is Spin.UP else '-'}"


ORBITALS: tuple[SpinOrbital, ...] = tuple(
    SpinOrbital(shell, m, spin)
    for shell, ms in ((Shell.S1S, (0,)), (Shell.P2P, (-1, 0, 1)))
    for m in ms
    for spin in (Spin.UP, Spin.DOWN)
)
_ORBITAL_INDEX = {orb: i for i, orb in enumerate(ORBITALS)}

_PE_BIT = {Spin.UP: 1, Spin.DOWN: 2}


@dataclass(frozen=True)
class FockState:
    """One occupation-number basis state.

    ``orbitals`` is a bitmask over the 8 canonical spin-orbitals,
    ``photoelectrons`` a 2-bit mask (bit 0 = up, bit 1 = down) and
    ``photons`` the counts (incident, emitted lambda1, emitted lambda2).
    """

    orbitals: int = 0
    photoelectrons: int = 0
    photons: tuple[int, int, int] = (0, 0, 0)

    def __post_init__(self):
        if not 0 <= self.orbitals < 256:
            raise ValueError("orbital mask out of range")
        if not 0 <= self.photoelectrons < 4:
            raise ValueError("photoelectron mask out of range")
        if len(self.photons) != 3 or any(n < 0 for n in self.photons):
            raise ValueError("photon counts must be non-negative")

    def has(self, orb: SpinOrbital) -> bool:
        return bool(self.orbitals >> orb.index & 1)

    def occupied(self) -> tuple[SpinOrbital, ...]:
        return tuple(o for o in ORBITALS if self.has(o))

    @property
    def photoelectron(self) -> Spin | None:
        if self.photoelectrons == 0:
            return None
        if self.photoelectrons == 1:
            return Spin.UP
        if self.photoelectrons == 2:
            return Spin.DOWN
        raise ValueError("state holds two photoelectrons")

    def count(self, shell: Shell) -> int:
        mask = 0b11 if shell is Shell.S1S else 0b11111100
        return (self.orbitals & mask).bit_count()


@dataclass
class ManyBodyVector:
    """A finite linear combination of FockStates with complex amplitudes."""

    _terms: dict[FockState, complex] = field(default_factory=dict)

    def amplitude(self, state: FockState) -> complex:
        return self._terms.get(state, 0j)

    def terms(self):
        return self._terms.items()

    def states(self):
        return self._terms.keys()

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: "ManyBodyVector") -> "ManyBodyVector":
        out = dict(self._terms)
        for s, a in other._terms.items():
            _accumulate(out, s, a)
        return ManyBodyVector(out)

    def __sub__(self, other: "ManyBodyVector") -> "ManyBodyVector":
        return self + (-1.0) * other

    def __mul__(self, scalar) -> "ManyBodyVector":
        if scalar == 0:
            return ManyBodyVector()
        return ManyBodyVector({s: a * scalar for s, a in self._terms.items()})

    __rmul__ = __mul__

    def norm(self) -> float:
        return sum(abs(a) ** 2 for a in self._terms.values()) ** 0.5


def _accumulate(terms: dict[FockState, complex], state: FockState, amp: complex):
    new = terms.get(state, 0j) + amp
    if new == 0:
        terms.pop(state, None)
    else:
        terms[state] = new


def vacuum() -> ManyBodyVector:
    return ManyBodyVector({FockState(): 1.0 + 0j})


def basis_vector(state: FockState) -> ManyBodyVector:
    return ManyBodyVector({state: 1.0 + 0j})


def create(v: ManyBodyVector, orb: SpinOrbital) -> ManyBodyVector:
    """Apply the fermionic creation operator for ``orb``."""
    bit = 1 << orb.index
    out: dict[FockState, complex] = {}
    for s, a in v.terms():
        if s.orbitals & bit:
            continue  # Pauli exclusion
        sign = -1.0 if (s.orbitals & (bit - 1)).bit_count() % 2 else 1.0
        _accumulate(out, FockState(s.orbitals | bit, s.photoelectrons, s.photons), a * sign)
    return ManyBodyVector(out)


def annihilate(v: ManyBodyVector, orb: SpinOrbital) -> ManyBodyVector:
    """Apply the fermionic annihilation operator for ``orb`` (adjoint of create)."""
    bit = 1 << orb.index
    out: dict[FockState, complex] = {}
    for s, a in v.terms():
        if not s.orbitals & bit:
            continue
        sign = -1.0 if (s.orbitals & (bit - 1)).bit_count() % 2 else 1.0
        _accumulate(out, FockState(s.orbitals & ~bit, s.photoelectrons, s.photons), a * sign)
    return ManyBodyVector(out)


def create_photoelectron(v: ManyBodyVector, spin: Spin) -> ManyBodyVector:
    bit = _PE_BIT[spin]
    out: dict[FockState, complex] = {}
    for s, a in v.terms():
        if s.photoelectrons & bit:
            continue
        below = s.orbitals.bit_count() + (s.photoelectrons & (bit - 1)).bit_count()
        sign = -1.0 if below % 2 else 1.0
        _accumulate(out, FockState(s.orbitals, s.photoelectrons | bit, s.photons), a * sign)
    return ManyBodyVector(out)


def annihilate_photoelectron(v: ManyBodyVector, spin: Spin) -> ManyBodyVector:
    bit = _PE_BIT[spin]
    out: dict[FockState, complex] = {}
    for s, a in v.terms():
        if not s.photoelectrons & bit:
            continue
        below = s.orbitals.bit_count() + (s.photoelectrons & (bit - 1)).bit_count()
        sign = -1.0 if below % 2 else 1.0
        _accumulate(out, FockState(s.orbitals, s.photoelectrons & ~bit, s.photons), a * sign)
    return ManyBodyVector(out)


def create_photon(v: ManyBodyVector, mode: PhotonMode) -> ManyBodyVector:
    out: dict[FockState, complex] = {}
    for s, a in v.terms():
        n = s.photons[mode.value]
        photons = list(s.photons)
        photons[mode.value] = n + 1
        _accumulate(out, FockState(s.orbitals, s.photoelectrons, tuple(photons)),
                    a * (n + 1) ** 0.5)
    return ManyBodyVector(out)


def annihilate_photon(v: ManyBodyVector, mode: PhotonMode) -> ManyBodyVector:
    out: dict[FockState, complex] = {}
    for s, a in v.terms():
        n = s.photons[mode.value]
        if n == 0:
            continue
        photons = list(s.photons)
        photons[mode.value] = n - 1
        _accumulate(out, FockState(s.orbitals, s.photoelectrons, tuple(photons)),
                    a * n ** 0.5)
    return ManyBodyVector(out)


def inner(a: ManyBodyVector, b: ManyBodyVector) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if len(a) > len(b):
        return complex(sum(a.amplitude(s).conjugate() * amp for s, amp in b.terms()))
    return complex(sum(amp.conjugate() * b.amplitude(s) for s, amp in a.terms()))
