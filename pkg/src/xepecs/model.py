"""The two-shell (1s, 2p) atomic model: Hamiltonian blocks and eigensystems.

The electron Hamiltonian is

    H = eps_s * n_1s + eps_p * n_2p + zeta * (l.s on the 2p electron)
        + H_exch,    H_exch = -2 G * S_1s . S_2p

The exchange term is written with shell spin operators, so it vanishes
identically on a filled (spin-saturated) 1s shell and acts only in
configurations with a single 1s electron, i.e. in the core-excited
intermediate states. Matrix elements are evaluated mechanically through the
fockspace operators rather than by hand.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import sqrt

import numpy as np

from .angular import HalfInt
from .fockspace import (
    FockState,
    ManyBodyVector,
    ORBITALS,
    PhotonMode,
    Shell,
    Spin,
    SpinOrbital,
    basis_vector,
    annihilate,
    create,
    create_photon,
    inner,
    vacuum,
)

__all__ = [
    "ModelParams",
    "SubspaceLabel",
    "Subspace",
    "EigenSystem",
    "subspace",
    "intermediate_subspace",
    "build_hamiltonian",
    "diagonalize",
    "intermediate_eigensystem",
    "initial_state",
    "j_squared_matrix",
    "jz_matrix",
    "s_squared_matrix",
]

_HERMITICITY_TOL = 1e-12
_RESIDUAL_TOL = 1e-10
_J_LABEL_TOL = 1e-8
_DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class ModelParams:
    """Model energies in eV.

    G        exchange strength between the 1s and 2p electrons
    zeta     2p spin-orbit constant
    eps_s    1s level
    eps_p    2p level
    Omega    incident photon energy
    Gamma_1s core-hole half-width (HWHM of the intermediate-state resonance)
    gamma    emitted-photon energy resolution (HWHM)
    """

    G: float = 0.3
    zeta: float = 0.1
    eps_s: float = -13.6
    eps_p: float = -5.0
    Omega: float = 20.0
    Gamma_1s: float = 0.5
    gamma: float = 0.4

    def __post_init__(self):
        if not self.Gamma_1s > 0:
            raise ValueError("Gamma_1s must be > 0")
        if not self.gamma > 0:
            raise ValueError("gamma must be > 0")


class SubspaceLabel(Enum):
    INITIAL = "initial"   # two 1s electrons + one 2p electron, M = +1/2
    M0 = "M0"             # one 1s + one 2p electron, M = 0 (up-spin photoelectron)
    M1 = "M1"             # one 1s + one 2p electron, M = 1 (down-spin photoelectron)


@dataclass(frozen=True)
class Subspace:
    label: SubspaceLabel
    basis: tuple[FockState, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


def _orb(shell: Shell, m: int, spin: Spin) -> SpinOrbital:
    return SpinOrbital(shell, m, spin)


def _state(*orbs: SpinOrbital) -> FockState:
    mask = 0
    for o in orbs:
        mask |= 1 << o.index
    return FockState(mask)


_S_UP = _orb(Shell.S1S, 0, Spin.UP)
_S_DN = _orb(Shell.S1S, 0, Spin.DOWN)


def _p(m: int, spin: Spin) -> SpinOrbital:
    return _orb(Shell.P2P, m, spin)


_BASES: dict[SubspaceLabel, tuple[FockState, ...]] = {
    # s^2 p^1 states with total M = +1/2
    SubspaceLabel.INITIAL: (
        _state(_S_UP, _S_DN, _p(1, Spin.DOWN)),
        _state(_S_UP, _S_DN, _p(0, Spin.UP)),
    ),
    # s^1 p^1 states with M = 0, reached by up-spin photoemission
    SubspaceLabel.M0: (
        _state(_S_UP, _p(0, Spin.DOWN)),
        _state(_S_UP, _p(-1, Spin.UP)),
        _state(_S_DN, _p(1, Spin.DOWN)),
        _state(_S_DN, _p(0, Spin.UP)),
    ),
    # s^1 p^1 states with M = 1, reached by down-spin photoemission
    SubspaceLabel.M1: (
        _state(_S_UP, _p(1, Spin.DOWN)),
        _state(_S_UP, _p(0, Spin.UP)),
        _state(_S_DN, _p(1, Spin.UP)),
    ),
}


def subspace(label: SubspaceLabel) -> Subspace:
    return Subspace(label, _BASES[label])


def intermediate_subspace(photoelectron_spin: Spin) -> Subspace:
    """Intermediate-state subspace matching the photoelectron spin."""
    label = SubspaceLabel.M0 if photoelectron_spin is Spin.UP else SubspaceLabel.M1
    return subspace(label)


# ---------------------------------------------------------------------------
# operator applications (all act on the electron content only)
# ---------------------------------------------------------------------------

_SQRT2 = sqrt(2.0)


def _apply_terms(v: ManyBodyVector, hops: list[tuple[complex, SpinOrbital, SpinOrbital]]
                 ) -> ManyBodyVector:
    """Sum of one-body terms coeff * c^dag(dst) c(src) applied to v."""
    out = ManyBodyVector()
    for coeff, dst, src in hops:
        out = out + coeff * create(annihilate(v, src), dst)
    return out


def _p_ladder_hops(direction: int, spin_flip: tuple[Spin, Spin] | None
                   ) -> list[tuple[complex, SpinOrbital, SpinOrbital]]:
    """Hops for l+/l- (direction +1/-1) on 2p, optionally with a spin flip."""
    hops = []
    for m in (-1, 0, 1):
        m2 = m + direction
        if m2 not in (-1, 0, 1):
            continue
        # l=1 ladder matrix element sqrt(2 - m(m+dir)) = sqrt(2) for every step
        for spin in (Spin.UP, Spin.DOWN):
            if spin_flip is not None and spin is not spin_flip[0]:
                continue
            dst_spin = spin if spin_flip is None else spin_flip[1]
            hops.append((_SQRT2, _p(m2, dst_spin), _p(m, spin)))
    return hops


def _spin_ladder_hops(shells: tuple[Shell, ...], raise_spin: bool
                      ) -> list[tuple[complex, SpinOrbital, SpinOrbital]]:
    """S+ (or S-) summed over the given shells."""
    src_spin, dst_spin = (Spin.DOWN, Spin.UP) if raise_spin else (Spin.UP, Spin.DOWN)
    hops = []
    for o in ORBITALS:
        if o.shell in shells and o.spin is src_spin:
            hops.append((1.0, SpinOrbital(o.shell, o.m, dst_spin), o))
    return hops


def _apply_sz_shell(v: ManyBodyVector, shell: Shell) -> ManyBodyVector:
    out = ManyBodyVector()
    for s, a in v.terms():
        w = sum(0.5 * o.spin.twice_sz for o in ORBITALS if o.shell is shell and s.has(o))
        if w != 0.0:
            out = out + ManyBodyVector({s: a * w})
    return out


def _apply_spin_orbit(v: ManyBodyVector) -> ManyBodyVector:
    """l.s of the 2p electron: l_z s_z + (l+ s- + l- s+)/2."""
    lzsz = ManyBodyVector()
    for s, a in v.terms():
        w = sum(o.m * 0.5 * o.spin.twice_sz
                for o in ORBITALS if o.shell is Shell.P2P and s.has(o))
        if w != 0.0:
            lzsz = lzsz + ManyBodyVector({s: a * w})
    up_flip = _apply_terms(v, _p_ladder_hops(+1, (Spin.UP, Spin.DOWN)))
    dn_flip = _apply_terms(v, _p_ladder_hops(-1, (Spin.DOWN, Spin.UP)))
    return lzsz + 0.5 * up_flip + 0.5 * dn_flip


def _apply_exchange(v: ManyBodyVector) -> ManyBodyVector:
    """S_1s . S_2p = Sz Sz + (S+_1s S-_2p + S-_1s S+_2p)/2."""
    zz = _apply_sz_shell(_apply_sz_shell(v, Shell.P2P), Shell.S1S)
    s_up_p_dn = _apply_terms(_apply_terms(v, _spin_ladder_hops((Shell.P2P,), False)),
                             _spin_ladder_hops((Shell.S1S,), True))
    s_dn_p_up = _apply_terms(_apply_terms(v, _spin_ladder_hops((Shell.P2P,), True)),
                             _spin_ladder_hops((Shell.S1S,), False))
    return zz + 0.5 * s_up_p_dn + 0.5 * s_dn_p_up


def apply_hamiltonian(params: ModelParams, v: ManyBodyVector) -> ManyBodyVector:
    """H applied to an arbitrary electron state (photon/photoelectron inert)."""
    out = ManyBodyVector()
    for s, a in v.terms():
        e = params.eps_s * s.count(Shell.S1S) + params.eps_p * s.count(Shell.P2P)
        if e != 0.0:
            out = out + ManyBodyVector({s: a * e})
    out = out + params.zeta * _apply_spin_orbit(v)
    out = out + (-2.0 * params.G) * _apply_exchange(v)
    return out


def _apply_jz(v: ManyBodyVector) -> ManyBodyVector:
    out = ManyBodyVector()
    for s, a in v.terms():
        w = sum((o.m if o.shell is Shell.P2P else 0) + 0.5 * o.spin.twice_sz
                for o in ORBITALS if s.has(o))
        if w != 0.0:
            out = out + ManyBodyVector({s: a * w})
    return out


def _apply_jpm(v: ManyBodyVector, raise_op: bool) -> ManyBodyVector:
    direction = +1 if raise_op else -1
    lpm = _apply_terms(v, _p_ladder_hops(direction, None))
    spm = _apply_terms(v, _spin_ladder_hops((Shell.S1S, Shell.P2P), raise_op))
    return lpm + spm


def _apply_j_squared(v: ManyBodyVector) -> ManyBodyVector:
    # J^2 = J- J+ + Jz^2 + Jz
    jmjp = _apply_jpm(_apply_jpm(v, True), False)
    jz = _apply_jz(v)
    return jmjp + _apply_jz(jz) + jz


def _operator_matrix(sub: Subspace, apply) -> np.ndarray:
    dim = sub.dim
    mat = np.zeros((dim, dim), dtype=complex)
    images = [apply(basis_vector(b)) for b in sub.basis]
    for col, img in enumerate(images):
        for row, b in enumerate(sub.basis):
            mat[row, col] = img.amplitude(b)
    return mat


def j_squared_matrix(sub: Subspace) -> np.ndarray:
    """Total angular momentum J^2 of the electron system on the subspace."""
    return _operator_matrix(sub, _apply_j_squared)


def jz_matrix(sub: Subspace) -> np.ndarray:
    return _operator_matrix(sub, _apply_jz)


def s_squared_matrix(sub: Subspace) -> np.ndarray:
    """Total spin S^2 of the electron system on the subspace."""

    def apply(v: ManyBodyVector) -> ManyBodyVector:
        smsp = _apply_terms(_apply_terms(v, _spin_ladder_hops((Shell.S1S, Shell.P2P), True)),
                            _spin_ladder_hops((Shell.S1S, Shell.P2P), False))
        sz = _apply_total_sz(v)
        return smsp + _apply_total_sz(sz) + sz

    return _operator_matrix(sub, apply)


def _apply_total_sz(v: ManyBodyVector) -> ManyBodyVector:
    out = ManyBodyVector()
    for s, a in v.terms():
        w = sum(0.5 * o.spin.twice_sz for o in ORBITALS if s.has(o))
        if w != 0.0:
            out = out + ManyBodyVector({s: a * w})
    return out


def build_hamiltonian(params: ModelParams, sub: Subspace) -> np.ndarray:
    """Hermitian Hamiltonian matrix over the subspace basis."""
    return _operator_matrix(sub, lambda v: apply_hamiltonian(params, v))


@dataclass(frozen=True)
class EigenSystem:
    """Eigenpairs of a subspace Hamiltonian, energies ascending.

    ``vectors[:, i]`` is the i-th eigenvector over the subspace basis and
    ``j_labels[i]`` its total angular momentum, read off <J^2> = j (j + 1).
    """

    energies: np.ndarray
    vectors: np.ndarray
    j_labels: tuple[HalfInt, ...]
    subspace: Subspace

    @property
    def dim(self) -> int:
        return len(self.energies)


def _resolve_clusters(w: np.ndarray, v: np.ndarray, operators: list[np.ndarray]
                      ) -> np.ndarray:
    """Rotate degenerate eigenvector clusters to diagonalize commuting labels.

    Within each group of (near-)equal eigenvalues the returned columns also
    diagonalize the given operators, in order, which makes the decomposition
    deterministic and the labels sharp even at accidental degeneracies.
    """
    scale = max(1.0, float(np.max(np.abs(w))))
    groups: list[list[int]] = [[0]]
    for i in range(1, len(w)):
        if w[i] - w[groups[-1][0]] <= _DEGENERACY_TOL * scale:
            groups[-1].append(i)
        else:
            groups.append([i])
    for op in operators:
        next_groups: list[list[int]] = []
        for g in groups:
            if len(g) == 1:
                next_groups.append(g)
                continue
            block = v[:, g]
            sub_op = block.conj().T @ op @ block
            vals, rot = np.linalg.eigh(0.5 * (sub_op + sub_op.conj().T))
            v[:, g] = block @ rot
            # split the group by the new labels for the next operator pass
            start = 0
            for k in range(1, len(g) + 1):
                if k == len(g) or vals[k] - vals[start] > 1e-6:
                    next_groups.append(g[start:k])
                    start = k
        groups = next_groups
    return v


def _fix_phases(v: np.ndarray) -> np.ndarray:
    for i in range(v.shape[1]):
        k = int(np.argmax(np.abs(v[:, i])))
        pivot = v[k, i]
        if abs(pivot) > 0:
            v[:, i] *= pivot.conjugate() / abs(pivot)
    return v


def _j_label_from_expectation(x: float) -> HalfInt:
    twice_j = round(2.0 * ((-1.0 + sqrt(1.0 + 4.0 * x)) / 2.0))
    j = HalfInt(twice_j)
    expected = float(j.value * (j.value + 1))
    if abs(x - expected) > _J_LABEL_TOL:
        raise ValueError(f"<J^2> = {x} is not j(j+1) for any half-integer j")
    return j


def diagonalize(H: np.ndarray, sub: Subspace) -> EigenSystem:
    """Full eigendecomposition of a Hermitian subspace Hamiltonian.

    Degenerate levels are resolved along J^2 and then S^2 so the eigenbasis
    and its labels stay deterministic in the zeta -> 0 and G -> 0 limits.
    """
    H = np.asarray(H, dtype=complex)
    if H.shape != (sub.dim, sub.dim):
        raise ValueError("matrix does not match the subspace dimension")
    if np.max(np.abs(H - H.conj().T)) > _HERMITICITY_TOL:
        raise ValueError("matrix is not Hermitian")

    w, v = np.linalg.eigh(H)
    jsq = j_squared_matrix(sub)
    ssq = s_squared_matrix(sub)
    v = _resolve_clusters(w, v, [jsq, ssq])
    v = _fix_phases(v)

    residual = np.max(np.abs(H @ v - v * w[np.newaxis, :]))
    if residual > _RESIDUAL_TOL:
        raise ValueError(f"eigenvector residual {residual:.3e} too large")

    labels = []
    for i in range(sub.dim):
        x = float(np.real(v[:, i].conj() @ jsq @ v[:, i]))
        labels.append(_j_label_from_expectation(x))
    return EigenSystem(w, v, tuple(labels), sub)


def intermediate_eigensystem(params: ModelParams, photoelectron_spin: Spin) -> EigenSystem:
    sub = intermediate_subspace(photoelectron_spin)
    return diagonalize(build_hamiltonian(params, sub), sub)


def initial_state(params: ModelParams) -> tuple[ManyBodyVector, float]:
    """The ground state with (J, M) = (1/2, 1/2) plus one incident photon.

    Returns the normalized many-body vector and its electron energy E_g.
    The state is verified to be an eigenvector of the Hamiltonian on the
    initial subspace.
    """
    # nested creations apply right-to-left: this is s+_up s+_down |0>
    core = create(create(vacuum(), _S_DN), _S_UP)
    sp_part = sqrt(2.0 / 3.0) * create(core, _p(1, Spin.DOWN)) \
        - sqrt(1.0 / 3.0) * create(core, _p(0, Spin.UP))

    h_sp = apply_hamiltonian(params, sp_part)
    energy = inner(sp_part, h_sp).real
    residual = (h_sp - energy * sp_part).norm()
    if residual > _RESIDUAL_TOL:
        raise ValueError("initial state is not an eigenvector of the model Hamiltonian")

    return create_photon(sp_part, PhotonMode.INCIDENT), energy
