"""Photoemission and radiative-decay matrix elements, and the coincidence
amplitudes A(sigma, lambda; epsilon) of the second-order process.

The chain is: the incident photon ejects a 1s electron of spin sigma (first
order), the core-excited intermediate states propagate with a resonant
denominator, and the 2p -> 1s radiative decay emits a photon of polarization
lambda (second order):

    A(sigma, lambda) = sum_i  <f_(sigma lambda)| M_ph |i_sigma>
                              * <i_sigma| c^dag_(eps sigma) s_sigma a |g>
                              / (Omega + E_g - E_i - epsilon + i Gamma_1s)

Every bracket is evaluated mechanically through the fockspace operators. The
radial dipole integral is set to 1; the photoemission vertex carries a
constant 1/sqrt(2) so the total 1s removal strength summed over both spin
channels is normalized to unity (only ratios and normalized states are
observable here).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import Mapping

import numpy as np

from .fockspace import (
    ManyBodyVector,
    PhotonMode,
    Shell,
    Spin,
    SpinOrbital,
    annihilate,
    annihilate_photon,
    basis_vector,
    create,
    create_photoelectron,
    create_photon,
    inner,
    vacuum,
)
from .model import (
    EigenSystem,
    ModelParams,
    Subspace,
    SubspaceLabel,
    initial_state,
    intermediate_eigensystem,
    intermediate_subspace,
)
from .polarization import EmissionGeometry, polarization_vector, spherical_components

__all__ = [
    "CHANNELS",
    "channel_label",
    "DipoleBlock",
    "AmplitudeSet",
    "photoemission_elements",
    "dipole_block",
    "xepecs_amplitudes",
    "AmplitudeCalculator",
]

# (photoelectron spin, emitted polarization) channels in fixed order
CHANNELS: tuple[tuple[Spin, int], ...] = (
    (Spin.UP, 1), (Spin.UP, 2), (Spin.DOWN, 1), (Spin.DOWN, 2),
)

_LABELS = {(Spin.UP, 1): "U1", (Spin.UP, 2): "U2",
           (Spin.DOWN, 1): "D1", (Spin.DOWN, 2): "D2"}

# Total 1s photoemission strength over both spin channels normalized to 1.
PHOTOEMISSION_VERTEX = 1.0 / sqrt(2.0)

# Angular factor of the <1s| r |2p_m> bracket, radial integral set to 1.
_DIPOLE_ANGULAR = 1.0 / sqrt(3.0)

_SPIN_SUBSPACE = {Spin.UP: SubspaceLabel.M0, Spin.DOWN: SubspaceLabel.M1}
_EMITTED = {1: PhotonMode.EMITTED_1, 2: PhotonMode.EMITTED_2}


def channel_label(channel: tuple[Spin, int]) -> str:
    """Short tag like 'U2' for a (spin, polarization) channel."""
    return _LABELS[channel]


def photoemission_elements(g: ManyBodyVector, eig: EigenSystem, sigma: Spin) -> np.ndarray:
    """<i_sigma| c^dag_(eps sigma) s_sigma a |g> for every eigenstate i.

    ``eig`` must be the intermediate eigensystem matching the photoelectron
    spin (M = 0 for up, M = 1 for down).
    """
    if eig.subspace.label is not _SPIN_SUBSPACE[sigma]:
        raise ValueError(
            f"eigensystem over {eig.subspace.label.value} does not match "
            f"photoelectron spin {sigma}"
        )
    w = annihilate_photon(g, PhotonMode.INCIDENT)
    w = annihilate(w, SpinOrbital(Shell.S1S, 0, sigma))
    w = create_photoelectron(w, sigma)
    w = PHOTOEMISSION_VERTEX * w

    components = np.array(
        [inner(create_photoelectron(basis_vector(b), sigma), w) for b in eig.subspace.basis]
    )
    return eig.vectors.conj().T @ components


def _apply_mph(v: ManyBodyVector, alphas: dict[int, tuple[complex, complex, complex]]
               ) -> ManyBodyVector:
    """The 2p -> 1s photon-emission operator.

    alphas[i] holds the spherical projections (q = +1, 0, -1) of polarization
    vector i. Each term is d * b^dag_lambda s^dag_sigma p_(m sigma) with
    d = (-1)^m alpha_(-m) / sqrt(3).
    """
    out = ManyBodyVector()
    for lam, (a_p1, a_0, a_m1) in alphas.items():
        by_m = {1: -a_m1, 0: a_0, -1: -a_p1}
        for m, coeff in by_m.items():
            d = _DIPOLE_ANGULAR * coeff
            if d == 0:
                continue
            for sigma in (Spin.UP, Spin.DOWN):
                w = annihilate(v, SpinOrbital(Shell.P2P, m, sigma))
                if len(w) == 0:
                    continue
                w = create(w, SpinOrbital(Shell.S1S, 0, sigma))
                w = create_photon(w, _EMITTED[lam])
                out = out + d * w
    return out


def _final_state(sigma: Spin, lam: int) -> ManyBodyVector:
    """|f_(sigma lambda)>: closed 1s shell + photoelectron + emitted photon."""
    f = create(create(vacuum(), SpinOrbital(Shell.S1S, 0, Spin.DOWN)),
               SpinOrbital(Shell.S1S, 0, Spin.UP))
    f = create_photoelectron(f, sigma)
    return create_photon(f, _EMITTED[lam])


def dipole_block(geom: EmissionGeometry, sub: Subspace) -> np.ndarray:
    """Photon-emission matrix <f_(sigma lambda)| M_ph |basis state>.

    Rows are the two polarizations, columns the subspace basis states; the
    photoelectron spin is the one matching the subspace.
    """
    sigma = Spin.UP if sub.label is SubspaceLabel.M0 else Spin.DOWN
    alphas = {i: spherical_components(polarization_vector(geom, i)) for i in (1, 2)}

    block = np.zeros((2, sub.dim), dtype=complex)
    for col, b in enumerate(sub.basis):
        ket = create_photoelectron(basis_vector(b), sigma)
        image = _apply_mph(ket, alphas)
        for row, lam in enumerate((1, 2)):
            block[row, col] = inner(_final_state(sigma, lam), image)
    return block


@dataclass(frozen=True)
class DipoleBlock:
    """Both spin blocks of the photon-emission matrix for one geometry.

    The cross blocks (up final state from the M = 1 subspace and vice versa)
    vanish identically, so only the two diagonal blocks are stored. Their
    selection-rule zero columns are validated on construction.
    """

    up_block: np.ndarray    # 2 x 4, over the M = 0 basis
    down_block: np.ndarray  # 2 x 3, over the M = 1 basis
    geometry: EmissionGeometry

    @classmethod
    def from_geometry(cls, geom: EmissionGeometry) -> "DipoleBlock":
        up = dipole_block(geom, intermediate_subspace(Spin.UP))
        down = dipole_block(geom, intermediate_subspace(Spin.DOWN))
        if np.max(np.abs(up[:, 1:3])) > 1e-14 or np.max(np.abs(down[:, 1])) > 1e-14:
            raise RuntimeError("dipole selection-rule pattern violated")
        return cls(up, down, geom)

    def block(self, sigma: Spin) -> np.ndarray:
        return self.up_block if sigma is Spin.UP else self.down_block


@dataclass(frozen=True)
class AmplitudeSet:
    """The four coincidence amplitudes at one photoelectron kinetic energy."""

    epsilon: float
    values: Mapping[tuple[Spin, int], complex]
    geometry: EmissionGeometry

    def __getitem__(self, channel: tuple[Spin, int]) -> complex:
        return self.values[channel]

    def vector(self) -> np.ndarray:
        """Amplitudes in (U1, U2, D1, D2) order."""
        return np.array([self.values[c] for c in CHANNELS])

    def total_strength(self) -> float:
        return float(sum(abs(a) ** 2 for a in self.values.values()))


class AmplitudeCalculator:
    """Caches the geometry-independent pieces of the amplitude pipeline.

    The initial state, the intermediate eigensystems and the photoemission
    elements depend only on the model parameters; per-geometry work is just
    the dipole blocks and the resonant sum.
    """

    def __init__(self, params: ModelParams):
        self.params = params
        self.initial, self.E_g = initial_state(params)
        self.eigensystems = {
            Spin.UP: intermediate_eigensystem(params, Spin.UP),
            Spin.DOWN: intermediate_eigensystem(params, Spin.DOWN),
        }
        self.pe_elements = {
            sigma: photoemission_elements(self.initial, self.eigensystems[sigma], sigma)
            for sigma in (Spin.UP, Spin.DOWN)
        }

    def amplitudes(self, geom: EmissionGeometry, epsilon: float) -> AmplitudeSet:
        p = self.params
        values: dict[tuple[Spin, int], complex] = {}
        for sigma in (Spin.UP, Spin.DOWN):
            eig = self.eigensystems[sigma]
            emission = dipole_block(geom, eig.subspace) @ eig.vectors  # (lambda, i)
            denom = p.Omega + self.E_g - eig.energies - epsilon + 1j * p.Gamma_1s
            terms = emission * self.pe_elements[sigma][np.newaxis, :] / denom[np.newaxis, :]
            summed = terms.sum(axis=1)
            values[(sigma, 1)] = complex(summed[0])
            values[(sigma, 2)] = complex(summed[1])
        return AmplitudeSet(epsilon, values, geom)

    def per_eigenstate_terms(self, geom: EmissionGeometry, epsilon: float, sigma: Spin
                             ) -> np.ndarray:
        """Individual resonance terms (lambda, i) before the sum over i."""
        p = self.params
        eig = self.eigensystems[sigma]
        emission = dipole_block(geom, eig.subspace) @ eig.vectors
        denom = p.Omega + self.E_g - eig.energies - epsilon + 1j * p.Gamma_1s
        return emission * self.pe_elements[sigma][np.newaxis, :] / denom[np.newaxis, :]


def xepecs_amplitudes(params: ModelParams, geom: EmissionGeometry, epsilon: float
                      ) -> AmplitudeSet:
    """The four A(sigma, lambda) at the given kinetic energy and geometry."""
    return AmplitudeCalculator(params).amplitudes(geom, epsilon)
