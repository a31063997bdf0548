"""Hamiltonian blocks, eigensystems and the coupled-basis labels."""

import math

import numpy as np
import pytest

from xepecs.angular import HalfInt
from xepecs.fockspace import PhotonMode, Spin, inner
from xepecs.model import (
    ModelParams,
    SubspaceLabel,
    build_hamiltonian,
    diagonalize,
    initial_state,
    intermediate_eigensystem,
    j_squared_matrix,
    jz_matrix,
    s_squared_matrix,
    subspace,
)

RELATIVE = ModelParams(G=0.3, zeta=0.1, eps_s=0.0, eps_p=0.0)
TABLE = ModelParams()


def j_values(eig):
    return sorted(float(j) for j in eig.j_labels)


class TestHamiltonianBlocks:
    def test_m1_block_matches_hand_derived_matrix(self):
        # Order (s+ p1-, s+ p0+, s- p1+), energies relative to eps_s + eps_p.
        # Derived by applying l.s and the spin-exchange operator by hand:
        # diag = (G/2 - zeta/2, -G/2, G/2 + zeta/2), l.s couples the first two
        # with zeta/sqrt(2), exchange couples the outer pair with -G.
        G, zeta = RELATIVE.G, RELATIVE.zeta
        expected = np.array([
            [G / 2 - zeta / 2, zeta / math.sqrt(2), -G],
            [zeta / math.sqrt(2), -G / 2, 0.0],
            [-G, 0.0, G / 2 + zeta / 2],
        ])
        H = build_hamiltonian(RELATIVE, subspace(SubspaceLabel.M1))
        assert np.allclose(H, expected, atol=1e-14)
        assert np.max(np.abs(H.imag)) == 0.0

    def test_m0_block_matches_hand_derived_matrix(self):
        # Order (s+ p0-, s+ p-1+, s- p1-, s- p0+), same operator algebra.
        G, zeta = RELATIVE.G, RELATIVE.zeta
        r2 = math.sqrt(2)
        expected = np.array([
            [G / 2, zeta / r2, 0.0, -G],
            [zeta / r2, -G / 2 - zeta / 2, 0.0, 0.0],
            [0.0, 0.0, -G / 2 - zeta / 2, zeta / r2],
            [-G, 0.0, zeta / r2, G / 2],
        ])
        H = build_hamiltonian(RELATIVE, subspace(SubspaceLabel.M0))
        assert np.allclose(H, expected, atol=1e-14)

    def test_free_limit_is_identity_on_intermediates(self):
        params = ModelParams(G=0.0, zeta=0.0, eps_s=-13.6, eps_p=-5.0)
        for label in (SubspaceLabel.M0, SubspaceLabel.M1):
            H = build_hamiltonian(params, subspace(label))
            assert np.allclose(H, (params.eps_s + params.eps_p) * np.eye(H.shape[0]),
                               atol=1e-14)

    @pytest.mark.parametrize("label", list(SubspaceLabel))
    def test_hermitian_exactly(self, label):
        H = build_hamiltonian(TABLE, subspace(label))
        assert np.array_equal(H, H.conj().T)

    @pytest.mark.parametrize("label", list(SubspaceLabel))
    def test_energy_offsets(self, label):
        # absolute blocks = relative blocks + (eps_s n_s + eps_p n_p) * identity
        H_abs = build_hamiltonian(TABLE, subspace(label))
        H_rel = build_hamiltonian(RELATIVE, subspace(label))
        n_s, n_p = (2, 1) if label is SubspaceLabel.INITIAL else (1, 1)
        offset = TABLE.eps_s * n_s + TABLE.eps_p * n_p
        assert np.allclose(H_abs, H_rel + offset * np.eye(H_abs.shape[0]), atol=1e-12)


class TestCommutingObservables:
    @pytest.mark.parametrize("label", list(SubspaceLabel))
    def test_j_squared_and_jz_commute_with_h(self, label):
        sub = subspace(label)
        H = build_hamiltonian(TABLE, sub)
        for op in (j_squared_matrix(sub), jz_matrix(sub)):
            assert np.max(np.abs(H @ op - op @ H)) < 1e-10

    def test_jz_is_the_subspace_magnetic_number(self):
        for label, m in ((SubspaceLabel.INITIAL, 0.5), (SubspaceLabel.M0, 0.0),
                         (SubspaceLabel.M1, 1.0)):
            sub = subspace(label)
            assert np.allclose(jz_matrix(sub), m * np.eye(sub.dim), atol=1e-14)


class TestDiagonalize:
    def test_j_labels(self):
        up = intermediate_eigensystem(TABLE, Spin.UP)
        down = intermediate_eigensystem(TABLE, Spin.DOWN)
        assert j_values(up) == [0.0, 1.0, 1.0, 2.0]
        assert j_values(down) == [1.0, 1.0, 2.0]

    def test_j1_energies_degenerate_across_subspaces(self):
        up = intermediate_eigensystem(TABLE, Spin.UP)
        down = intermediate_eigensystem(TABLE, Spin.DOWN)
        j1_up = sorted(e for e, j in zip(up.energies, up.j_labels) if j == HalfInt.of(1))
        j1_down = sorted(e for e, j in zip(down.energies, down.j_labels) if j == HalfInt.of(1))
        assert np.allclose(j1_up, j1_down, atol=1e-10)

    def test_multiplet_energies_from_recoupling(self):
        # With S = S_1s + S_2p: exchange gives -G/2 (triplet) and +3G/2
        # (singlet); within a (L=1, S=1) level <l.s> = (J(J+1) - 4)/4.
        up = intermediate_eigensystem(RELATIVE, Spin.UP)
        by_j = {float(j): e for e, j in zip(up.energies, up.j_labels)
                if float(j) in (0.0, 2.0)}
        G, zeta = RELATIVE.G, RELATIVE.zeta
        assert by_j[0.0] == pytest.approx(-G / 2 - zeta, abs=1e-12)
        assert by_j[2.0] == pytest.approx(-G / 2 + zeta / 2, abs=1e-12)

    @pytest.mark.parametrize("label", list(SubspaceLabel))
    def test_residuals_unitarity_trace(self, label):
        sub = subspace(label)
        H = build_hamiltonian(TABLE, sub)
        eig = diagonalize(H, sub)
        v = eig.vectors
        assert np.max(np.abs(v.conj().T @ v - np.eye(sub.dim))) < 1e-10
        assert np.max(np.abs(H @ v - v * eig.energies[np.newaxis, :])) < 1e-10
        assert np.trace(H).real == pytest.approx(float(np.sum(eig.energies)), abs=1e-10)
        assert list(eig.energies) == sorted(eig.energies)

    def test_non_hermitian_rejected(self):
        sub = subspace(SubspaceLabel.M1)
        H = build_hamiltonian(TABLE, sub).copy()
        H[0, 1] += 1e-6
        with pytest.raises(ValueError, match="Hermitian"):
            diagonalize(H, sub)

    def test_no_spin_mixing_without_spin_orbit(self):
        # zeta = 0: eigenvectors carry sharp total-spin labels
        params = ModelParams(G=0.3, zeta=0.0)
        for spin in (Spin.UP, Spin.DOWN):
            eig = intermediate_eigensystem(params, spin)
            ssq = s_squared_matrix(eig.subspace)
            for i in range(eig.dim):
                x = float(np.real(eig.vectors[:, i].conj() @ ssq @ eig.vectors[:, i]))
                assert min(abs(x - 0.0), abs(x - 2.0)) < 1e-10

    def test_fully_degenerate_limit_still_labels(self):
        # G = zeta = 0 leaves H proportional to the identity; labels must
        # still come out sharp thanks to the degeneracy resolution.
        params = ModelParams(G=0.0, zeta=0.0)
        up = intermediate_eigensystem(params, Spin.UP)
        assert j_values(up) == [0.0, 1.0, 1.0, 2.0]


class TestInitialState:
    def test_normalized_with_one_incident_photon(self):
        g, _ = initial_state(TABLE)
        assert inner(g, g).real == pytest.approx(1.0, abs=1e-14)
        for state in g.states():
            assert state.photons == (1, 0, 0)
            assert state.photoelectron is None

    def test_energy(self):
        # filled 1s shell + one 2p electron in its j = 1/2 level (<l.s> = -1)
        _, energy = initial_state(TABLE)
        expected = 2 * TABLE.eps_s + TABLE.eps_p - TABLE.zeta
        assert energy == pytest.approx(expected, abs=1e-12)

    def test_is_lowest_initial_subspace_eigenvector(self):
        sub = subspace(SubspaceLabel.INITIAL)
        eig = diagonalize(build_hamiltonian(TABLE, sub), sub)
        assert [float(j) for j in eig.j_labels] == [0.5, 1.5]
        g, energy = initial_state(TABLE)
        assert energy == pytest.approx(float(eig.energies[0]), abs=1e-12)
        # overlap of the stated vector with the j = 1/2 eigenvector is unital
        from xepecs.fockspace import annihilate_photon, basis_vector

        g_sp = annihilate_photon(g, PhotonMode.INCIDENT)
        comps = np.array([inner(basis_vector(b), g_sp) for b in sub.basis])
        assert abs(eig.vectors[:, 0].conj() @ comps) == pytest.approx(1.0, abs=1e-12)

    def test_angular_momentum_quantum_numbers(self):
        from xepecs.fockspace import annihilate_photon, basis_vector

        sub = subspace(SubspaceLabel.INITIAL)
        g, _ = initial_state(TABLE)
        g_sp = annihilate_photon(g, PhotonMode.INCIDENT)
        comps = np.array([inner(basis_vector(b), g_sp) for b in sub.basis])
        jsq = float(np.real(comps.conj() @ j_squared_matrix(sub) @ comps))
        jz = float(np.real(comps.conj() @ jz_matrix(sub) @ comps))
        assert jsq == pytest.approx(0.75, abs=1e-12)
        assert jz == pytest.approx(0.5, abs=1e-12)


class TestModelParams:
    def test_defaults(self):
        assert (TABLE.G, TABLE.zeta, TABLE.eps_s, TABLE.eps_p) == (0.3, 0.1, -13.6, -5.0)
        assert (TABLE.Omega, TABLE.Gamma_1s, TABLE.gamma) == (20.0, 0.5, 0.4)

    def test_width_validation(self):
        with pytest.raises(ValueError, match="Gamma_1s"):
            ModelParams(Gamma_1s=0.0)
        with pytest.raises(ValueError, match="gamma"):
            ModelParams(gamma=-0.1)


class TestSubspaces:
    def test_dimensions_and_occupations(self):
        assert subspace(SubspaceLabel.INITIAL).dim == 2
        assert subspace(SubspaceLabel.M0).dim == 4
        assert subspace(SubspaceLabel.M1).dim == 3
        for b in subspace(SubspaceLabel.M0).basis + subspace(SubspaceLabel.M1).basis:
            assert bin(b.orbitals).count("1") == 2
        for b in subspace(SubspaceLabel.INITIAL).basis:
            assert bin(b.orbitals).count("1") == 3
