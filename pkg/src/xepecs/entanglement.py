"""Spin-polarization entangled state, density matrices and entanglement entropy.

Subsystem A is the photoelectron spin, subsystem B the emitted-photon
polarization. The pure two-qubit state is the normalized amplitude map

    |psi> = (1 / sqrt(sum |A|^2)) * sum_(sigma lambda) A_(sigma lambda)
            |spin sigma> |polarization lambda>

and the entanglement entropy is the base-2 von Neumann entropy of the reduced
spin density matrix. For the default orthogonal polarization pair
(beta1 = 90 deg, beta2 = 180 deg) the state also has the closed form

    (1 / (3 sqrt(C))) * [ sin(theta) |U2> + e^(i phi) (i |D1> - cos(theta) |D2>) ]

which this module keeps as an independent cross-check of the full amplitude
pipeline; its reduced spin matrix has eigenvalues (1 +/- |cos(theta)|) / 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, pi, radians, sin, sqrt
from typing import Mapping, Sequence

import numpy as np

from .amplitudes import CHANNELS, AmplitudeCalculator, AmplitudeSet
from .fockspace import Spin
from .model import ModelParams
from .polarization import EmissionGeometry

__all__ = [
    "DomainError",
    "EntangledState",
    "DensityMatrix",
    "EntropyCurve",
    "entangled_state",
    "closed_form_state",
    "full_density_matrix",
    "reduce_to_spin",
    "reduce_to_polarization",
    "von_neumann_entropy",
    "entropy_sweep",
]

SPIN_POLARIZATION_BASIS = ("U1", "U2", "D1", "D2")

_NORM_TOL = 1e-12
_MATRIX_TOL = 1e-12
_ENTROPY_INPUT_TOL = 1e-8
_EIGENVALUE_CLIP = 1e-12


class DomainError(ValueError):
    """A computation left the physically meaningful domain."""


@dataclass(frozen=True)
class EntangledState:
    """Normalized coefficients over the (U1, U2, D1, D2) product basis."""

    coeffs: Mapping[tuple[Spin, int], complex]
    epsilon: float | None
    geometry: EmissionGeometry

    def __post_init__(self):
        norm_sq = sum(abs(c) ** 2 for c in self.coeffs.values())
        if abs(norm_sq - 1.0) > _NORM_TOL:
            raise ValueError(f"state norm^2 = {norm_sq} differs from 1")

    def vector(self) -> np.ndarray:
        return np.array([self.coeffs[c] for c in CHANNELS])

    def fidelity(self, other: "EntangledState") -> float:
        """|<self|other>|, insensitive to global phases."""
        return float(abs(np.vdot(self.vector(), other.vector())))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix with basis labels."""

    basis: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        n = len(self.basis)
        if m.shape != (n, n):
            raise ValueError("matrix shape does not match basis")
        if np.max(np.abs(m - m.conj().T)) > _MATRIX_TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > _MATRIX_TOL or abs(np.trace(m).imag) > _MATRIX_TOL:
            raise ValueError("density matrix trace differs from 1")
        if np.min(np.linalg.eigvalsh(m)) < -_MATRIX_TOL:
            raise ValueError("density matrix has a negative eigenvalue")

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)


@dataclass(frozen=True)
class EntropyCurve:
    """Entanglement entropy (bits) per emission angle (degrees)."""

    thetas: tuple[float, ...]
    entropy: tuple[float, ...]

    def __post_init__(self):
        if len(self.thetas) != len(self.entropy):
            raise ValueError("angle and entropy lengths differ")
        for s in self.entropy:
            if not -1e-9 <= s <= 1.0 + 1e-9:
                raise ValueError(f"entropy {s} outside [0, 1] bits")


def entangled_state(amps: AmplitudeSet) -> EntangledState:
    """Normalize the four coincidence amplitudes into a two-qubit state."""
    norm_sq = amps.total_strength()
    if norm_sq == 0.0:
        raise DomainError("all coincidence amplitudes vanish; state undefined")
    scale = 1.0 / sqrt(norm_sq)
    coeffs = {c: amps[c] * scale for c in CHANNELS}
    return EntangledState(coeffs, amps.epsilon, amps.geometry)


def _is_angle(value: float, target_deg: float, tol: float = 1e-9) -> bool:
    diff = (value - radians(target_deg)) % (2.0 * pi)
    return min(diff, 2.0 * pi - diff) < tol


def closed_form_state(geom: EmissionGeometry, C: float = 2.0 / 9.0) -> EntangledState:
    """The analytic entangled state for beta1 = 90 deg, beta2 = 180 deg.

    ``C`` is the squared norm of the unnormalized amplitude 4-vector; the
    default 2/9 makes the coefficients exactly normalized.
    """
    if not (_is_angle(geom.beta1, 90.0) and _is_angle(geom.beta2, 180.0)):
        raise ValueError("closed form requires beta1 = 90 deg and beta2 = 180 deg")
    phase = complex(cos(geom.phi), sin(geom.phi))
    scale = 1.0 / (3.0 * sqrt(C))
    coeffs = {
        (Spin.UP, 1): 0j,
        (Spin.UP, 2): scale * sin(geom.theta) + 0j,
        (Spin.DOWN, 1): scale * 1j * phase,
        (Spin.DOWN, 2): -scale * cos(geom.theta) * phase,
    }
    return EntangledState(coeffs, None, geom)


def full_density_matrix(state: EntangledState) -> DensityMatrix:
    """|psi><psi| over the four spin-polarization product states."""
    v = state.vector()
    return DensityMatrix(SPIN_POLARIZATION_BASIS, np.outer(v, v.conj()))


def _coefficient_matrix(obj) -> np.ndarray:
    """2x2 coefficient array c[spin, polarization] from a pure state."""
    if isinstance(obj, EntangledState):
        return obj.vector().reshape(2, 2)
    raise TypeError(f"expected EntangledState or DensityMatrix, got {type(obj).__name__}")


def reduce_to_spin(obj) -> DensityMatrix:
    """Partial trace over the photon polarization, leaving the spin qubit."""
    if isinstance(obj, DensityMatrix):
        rho = np.asarray(obj.matrix).reshape(2, 2, 2, 2)
        reduced = np.einsum("albl->ab", rho)
    else:
        c = _coefficient_matrix(obj)
        reduced = c @ c.conj().T
    return DensityMatrix(("U", "D"), reduced)


def reduce_to_polarization(obj) -> DensityMatrix:
    """Partial trace over the photoelectron spin, leaving the photon qubit."""
    if isinstance(obj, DensityMatrix):
        rho = np.asarray(obj.matrix).reshape(2, 2, 2, 2)
        reduced = np.einsum("alam->lm", rho)
    else:
        c = _coefficient_matrix(obj)
        reduced = c.T @ c.conj()
    return DensityMatrix(("1", "2"), reduced)


def von_neumann_entropy(rho) -> float:
    """Base-2 von Neumann entropy -Tr[rho log2 rho].

    Accepts a DensityMatrix or a plain Hermitian array. Raises DomainError if
    the input violates Hermiticity, unit trace or positivity beyond 1e-8;
    smaller negative eigenvalue jitter is clipped to zero.
    """
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if np.max(np.abs(m - m.conj().T)) > _ENTROPY_INPUT_TOL:
        raise DomainError("matrix is not Hermitian")
    if abs(np.trace(m) - 1.0) > _ENTROPY_INPUT_TOL:
        raise DomainError("matrix trace differs from 1")
    eigenvalues = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    if np.min(eigenvalues) < -_ENTROPY_INPUT_TOL:
        raise DomainError("matrix has a negative eigenvalue")

    clipped = np.clip(eigenvalues, 0.0, 1.0)
    clipped[np.abs(clipped) < _EIGENVALUE_CLIP] = 0.0
    positive = clipped[clipped > 0.0]
    return float(-np.sum(positive * np.log2(positive)))


def entropy_sweep(params: ModelParams, geom_template: EmissionGeometry,
                  thetas_deg: Sequence[float], epsilon: float) -> EntropyCurve:
    """Entanglement entropy against emission angle, via the full amplitude path."""
    calculator = AmplitudeCalculator(params)
    entropies = []
    for theta in thetas_deg:
        geom = geom_template.with_theta(radians(theta))
        state = entangled_state(calculator.amplitudes(geom, epsilon))
        entropies.append(von_neumann_entropy(reduce_to_spin(state)))
    return EntropyCurve(tuple(float(t) for t in thetas_deg), tuple(entropies))
