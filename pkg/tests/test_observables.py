import numpy as np
import pytest

from entcov.linalg import partial_transpose
from entcov.observables import (
    Observable,
    ObservableSet,
    collective_spin_matrices,
    collective_spin_set,
    hp_quadrature_set,
    pauli_product_set,
    rotate_so3,
)
from entcov.states import product_state, spin_coherent_x

import oracles


def commutator(x, y):
    return x @ y - y @ x


@pytest.fixture
def polarized_rho():
    m = 4
    psi = product_state(spin_coherent_x(m), spin_coherent_x(m))
    return m, psi.density().matrix


class TestPauliProductSet:
    def test_members_square_to_identity(self):
        for obs in pauli_product_set():
            assert np.allclose(obs.matrix @ obs.matrix, np.eye(4))

    def test_pt_parity_of_yy(self):
        obs_set = pauli_product_set()
        yy = obs_set[1]
        assert yy.pt_parity == -1
        pt = partial_transpose(yy.matrix, 2, 2, "B")
        assert np.allclose(pt, -yy.matrix)

    def test_members_mutually_commute(self):
        mats = pauli_product_set().matrices()
        for i in range(3):
            for j in range(3):
                assert np.allclose(commutator(mats[i], mats[j]), 0)


class TestCollectiveSpinSet:
    def test_single_qubit_reduces_to_paulis(self):
        sx, sy, sz = collective_spin_matrices(1)
        assert np.allclose(sx, oracles.SX)
        assert np.allclose(sy, oracles.SY)
        assert np.allclose(sz, oracles.SZ)

    def test_polarized_mean(self, polarized_rho):
        m, rho = polarized_rho
        obs_set = collective_spin_set(m)
        sx_a = obs_set[0].matrix
        assert np.trace(rho @ sx_a).real == pytest.approx(m, rel=1e-12)

    def test_pauli_sum_commutator(self):
        obs_set = collective_spin_set(3)
        sx_a, sy_a, sz_a = (obs_set[i].matrix for i in range(3))
        assert np.allclose(commutator(sx_a, sy_a), 2j * sz_a, atol=1e-12)

    def test_pt_parity_of_sy_b(self):
        obs_set = collective_spin_set(3)
        sy_b = obs_set[4]
        assert sy_b.pt_parity == -1
        pt = partial_transpose(sy_b.matrix, 4, 4, "B")
        assert np.allclose(pt, -sy_b.matrix)

    @pytest.mark.parametrize("m", [1, 2, 5, 12])
    def test_casimir(self, m):
        sx, sy, sz = collective_spin_matrices(m)
        total = sx @ sx + sy @ sy + sz @ sz
        assert np.allclose(total, m * (m + 2) * np.eye(m + 1), atol=1e-9)

    def test_a_and_b_operators_commute(self):
        obs_set = collective_spin_set(4)
        for i in range(3):
            for j in range(3, 6):
                norm = np.linalg.norm(commutator(obs_set[i].matrix, obs_set[j].matrix))
                assert norm < 1e-12

    def test_supports_and_labels(self):
        obs_set = collective_spin_set(2)
        assert [o.support for o in obs_set] == ["A", "A", "A", "B", "B", "B"]
        assert len(set(obs_set.labels)) == 6


class TestHpQuadratureSet:
    def test_canonical_commutator_on_polarized_state(self, polarized_rho):
        m, rho = polarized_rho
        quads = hp_quadrature_set(m)
        x_a, p_a = quads[0].matrix, quads[1].matrix
        value = np.trace(rho @ commutator(x_a, p_a))
        assert value == pytest.approx(1j, abs=1e-12)

    def test_zero_mean_and_vacuum_variance(self, polarized_rho):
        m, rho = polarized_rho
        x_a = hp_quadrature_set(m)[0].matrix
        mean = np.trace(rho @ x_a).real
        second = np.trace(rho @ x_a @ x_a).real
        assert mean == pytest.approx(0.0, abs=1e-12)
        assert second - mean**2 == pytest.approx(0.5, rel=1e-12)

    def test_parities(self):
        quads = hp_quadrature_set(3)
        assert [q.pt_parity for q in quads] == [1, 1, -1, 1]
        assert quads.labels == ("x_A", "p_A", "x_B", "p_B")

    def test_rotated_source_clears_parity(self):
        rot = rotate_so3(collective_spin_set(2), np.eye(3))
        quads = hp_quadrature_set(2, spin_set=rot)
        assert all(q.pt_parity is None for q in quads)

    def test_rejects_non_sextet(self):
        with pytest.raises(ValueError):
            hp_quadrature_set(2, spin_set=pauli_product_set())


class TestRotateSo3:
    def test_identity_rotation(self):
        obs_set = collective_spin_set(2)
        rotated = rotate_so3(obs_set, np.eye(3))
        for before, after in zip(obs_set, rotated):
            assert np.allclose(after.matrix, before.matrix)
            assert after.pt_parity is None

    def test_diagonal_xy_rotation(self):
        # x' = (x + y)/sqrt(2), y' = (y - x)/sqrt(2), z' = z
        r = np.array([[1, 1, 0], [-1, 1, 0], [0, 0, np.sqrt(2)]]) / np.sqrt(2)
        obs_set = collective_spin_set(3)
        rotated = rotate_so3(obs_set, r)
        expected = (obs_set[0].matrix + obs_set[1].matrix) / np.sqrt(2)
        assert np.allclose(rotated[0].matrix, expected, atol=1e-12)

    def test_commutator_covariance(self, rng):
        q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        if np.linalg.det(q) < 0:
            q[:, 0] = -q[:, 0]
        rotated = rotate_so3(collective_spin_set(2), q)
        sx, sy, sz = (rotated[i].matrix for i in range(3))
        assert np.allclose(commutator(sx, sy), 2j * sz, atol=1e-10)

    def test_rejects_non_orthogonal(self):
        with pytest.raises(ValueError, match="orthogonal"):
            rotate_so3(collective_spin_set(2), np.ones((3, 3)))


class TestValidation:
    def test_rejects_non_hermitian_member(self):
        bad = Observable("bad", np.array([[0, 1], [0, 0]]), "A")
        good = Observable("id", np.eye(2), "A")
        with pytest.raises(ValueError, match="Hermitian"):
            ObservableSet((bad, good), 1, 2)

    def test_rejects_wrong_parity_claim(self):
        bad = Observable("yy", np.kron(oracles.SY, oracles.SY), "JOINT", 1)
        with pytest.raises(ValueError, match="parity"):
            ObservableSet((bad,), 2, 2)

    def test_rejects_duplicate_labels(self):
        a = Observable("w", np.eye(4), "A")
        b = Observable("w", np.kron(oracles.SZ, oracles.SZ), "JOINT", 1)
        with pytest.raises(ValueError, match="duplicate"):
            ObservableSet((a, b), 2, 2)

    def test_rejects_dimension_mismatch(self):
        a = Observable("w", np.eye(4), "A")
        with pytest.raises(ValueError, match="shape"):
            ObservableSet((a,), 2, 3)

    def test_every_generated_set_passes_own_invariants(self):
        # construction re-runs validation, so this is the self-check
        pauli_product_set()
        collective_spin_set(6)
        hp_quadrature_set(6)
