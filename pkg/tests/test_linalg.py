import numpy as np
import pytest

from anosovlab.linalg import (SpectralGapError, Subspace,
                              apply_to_subspace, direct_sum_margin,
                              eigen_moduli, normalize_lift,
                              point_subspace_distance, proj_distance,
                              singular_values, subspace_distance,
                              top_invariant_subspace)


def rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


class TestNormalizeLift:
    def test_scaling_to_unit_determinant(self):
        M = normalize_lift(np.diag([2.0, 2.0]))
        assert np.allclose(M.mat, np.eye(2))
        assert M.det_sign == 1

    def test_already_unimodular(self):
        M = normalize_lift(np.diag([3.0, 1 / 3.0]))
        assert np.allclose(M.mat, np.diag([3.0, 1 / 3.0]))

    def test_negative_determinant(self):
        # |det| = 2, so the matrix is divided by sqrt(2)
        M = normalize_lift(np.diag([-2.0, 1.0]))
        assert np.allclose(M.mat, np.diag([-2.0, 1.0]) / np.sqrt(2))
        assert M.det_sign == -1

    def test_singular_input_rejected(self):
        with pytest.raises(ValueError, match="non-invertible"):
            normalize_lift(np.array([[1.0, 1.0], [1.0, 1.0]]))

    def test_nan_rejected(self):
        with pytest.raises(ValueError, match="finite"):
            normalize_lift(np.array([[np.nan, 0.0], [0.0, 1.0]]))

    def test_det_invariant_holds(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            M = normalize_lift(rng.normal(size=(4, 4)))
            assert abs(abs(np.linalg.det(M.mat)) - 1.0) < 1e-10


class TestEigenModuli:
    def test_diagonal(self):
        assert np.allclose(eigen_moduli(np.diag([2.0, 1.0, 0.5])),
                           [2.0, 1.0, 0.5])

    def test_unipotent_jordan_block(self):
        assert np.allclose(eigen_moduli(np.array([[1.0, 1.0], [0.0, 1.0]])),
                           [1.0, 1.0])

    def test_rotation_complex_pair(self):
        assert np.allclose(eigen_moduli(rotation(0.7)), [1.0, 1.0])

    def test_product_one_after_lift(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            M = normalize_lift(rng.normal(size=(5, 5)))
            assert abs(np.prod(eigen_moduli(M)) - 1.0) < 1e-8


class TestSingularValues:
    def test_diagonal(self):
        assert np.allclose(singular_values(np.diag([3.0, 1 / 3.0])),
                           [3.0, 1 / 3.0])

    def test_unipotent_golden_ratio(self):
        # M^T M = [[1,1],[1,2]] has eigenvalues (3 +- sqrt(5))/2, whose
        # square roots are the golden ratio and its inverse
        phi = (1 + np.sqrt(5)) / 2
        sv = singular_values(np.array([[1.0, 1.0], [0.0, 1.0]]))
        assert np.allclose(sv, [phi, 1 / phi], atol=1e-12)

    def test_orthogonal_is_isometry(self):
        assert np.allclose(singular_values(rotation(1.2)), [1.0, 1.0])

    def test_inverse_duality(self):
        rng = np.random.default_rng(2)
        for _ in range(30):
            M = normalize_lift(rng.normal(size=(4, 4))).mat
            mu = singular_values(M)
            mu_inv = singular_values(np.linalg.inv(M))
            assert np.allclose(mu, 1.0 / mu_inv[::-1], rtol=1e-8)

    def test_product_submultiplicative(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            A = rng.normal(size=(4, 4))
            B = rng.normal(size=(4, 4))
            s_ab = singular_values(A @ B)[0]
            assert s_ab <= singular_values(A)[0] * singular_values(B)[0] * (1 + 1e-8)


class TestTopInvariantSubspace:
    def test_diagonal_top_line(self):
        V = top_invariant_subspace(np.diag([2.0, 1.0, 0.5]), 1)
        assert proj_distance(V, Subspace.line([1, 0, 0])) < 1e-12

    def test_diagonal_top_plane(self):
        V = top_invariant_subspace(np.diag([2.0, 1.0, 0.5]), 2)
        assert subspace_distance(V, Subspace(np.eye(3)[:, :2])) < 1e-12

    def test_no_gap_is_error(self):
        with pytest.raises(SpectralGapError, match="index 1"):
            top_invariant_subspace(np.diag([2.0, 2.0, 0.25]), 1)

    def test_conjugate_pair_kept_together(self):
        M = np.zeros((3, 3))
        M[:2, :2] = 2.0 * rotation(0.9)
        M[2, 2] = 0.25
        with pytest.raises(SpectralGapError):
            top_invariant_subspace(M, 1)  # complex pair straddles index 1
        V = top_invariant_subspace(M, 2)
        assert subspace_distance(V, Subspace(np.eye(3)[:, :2])) < 1e-10

    def test_invariance_on_random_matrices(self):
        rng = np.random.default_rng(4)
        done = 0
        while done < 25:
            M = normalize_lift(rng.normal(size=(5, 5))).mat
            lam = eigen_moduli(M)
            for m in range(1, 5):
                if lam[m - 1] / lam[m] > 1.01:
                    V = top_invariant_subspace(M, m)
                    MV = apply_to_subspace(M, V)
                    assert subspace_distance(MV, V) < 1e-8
                    done += 1


class TestProjectiveDistance:
    e = np.eye(3)

    def test_identity_case(self):
        assert proj_distance(Subspace.line(self.e[0]),
                             Subspace.line(self.e[0])) == 0

    def test_orthogonal_lines(self):
        assert proj_distance(Subspace.line(self.e[0]),
                             Subspace.line(self.e[1])) == pytest.approx(1.0)

    def test_45_degrees(self):
        p = Subspace.line(self.e[0])
        q = Subspace.line((self.e[0] + self.e[1]) / np.sqrt(2))
        assert proj_distance(p, q) == pytest.approx(1 / np.sqrt(2), abs=1e-12)

    def test_metric_axioms_on_random_triples(self):
        rng = np.random.default_rng(5)
        for _ in range(1000):
            u, v, w = (Subspace.line(rng.normal(size=4)) for _ in range(3))
            duv = proj_distance(u, v)
            assert abs(duv - proj_distance(v, u)) < 1e-10
            assert duv <= proj_distance(u, w) + proj_distance(w, v) + 1e-10

    def test_orthogonal_invariance(self):
        rng = np.random.default_rng(6)
        Q = np.linalg.qr(rng.normal(size=(4, 4)))[0]
        for _ in range(20):
            u = Subspace.line(rng.normal(size=4))
            v = Subspace.line(rng.normal(size=4))
            d1 = proj_distance(u, v)
            d2 = proj_distance(Subspace.line(Q @ u.vector()),
                               Subspace.line(Q @ v.vector()))
            assert abs(d1 - d2) < 1e-10


class TestPointSubspaceDistance:
    e = np.eye(3)

    def test_contained(self):
        V = Subspace(self.e[:, :2])
        assert point_subspace_distance(Subspace.line(self.e[0]), V) == 0

    def test_orthogonal(self):
        V = Subspace(self.e[:, :2])
        assert point_subspace_distance(Subspace.line(self.e[2]), V) == pytest.approx(1.0)

    def test_diagonal_direction(self):
        V = Subspace(self.e[:, :2])
        p = Subspace.line((self.e[0] + self.e[2]) / np.sqrt(2))
        assert point_subspace_distance(p, V) == pytest.approx(1 / np.sqrt(2), abs=1e-12)


class TestDirectSumMargin:
    e = np.eye(3)

    def test_orthogonal_lines(self):
        margin = direct_sum_margin([Subspace.line(self.e[i]) for i in range(3)])
        assert margin == pytest.approx(1.0)

    def test_dependent_lines(self):
        margin = direct_sum_margin([Subspace.line(self.e[0]),
                                    Subspace.line(self.e[0])])
        assert margin < 1e-12

    def test_45_degree_pair(self):
        # smallest singular value of [e1 | (e1+e2)/sqrt(2)], computed by
        # hand from the 2x2 Gram matrix: sqrt(1 - 1/sqrt(2))
        q = Subspace.line((self.e[0] + self.e[1]) / np.sqrt(2))
        margin = direct_sum_margin([Subspace.line(self.e[0]), q])
        assert margin == pytest.approx(np.sqrt(1 - 1 / np.sqrt(2)), abs=1e-12)

    def test_rank_overflow(self):
        with pytest.raises(ValueError, match="ranks sum"):
            direct_sum_margin([Subspace(self.e[:, :2]), Subspace(self.e[:, :2])])

    def test_permutation_and_rebasing_invariance(self):
        rng = np.random.default_rng(7)
        U = Subspace.from_spanning(rng.normal(size=(5, 2)))
        V = Subspace.from_spanning(rng.normal(size=(5, 2)))
        m1 = direct_sum_margin([U, V])
        m2 = direct_sum_margin([V, U])
        # re-base U by an arbitrary rotation of its frame
        Q = np.linalg.qr(rng.normal(size=(2, 2)))[0]
        U2 = Subspace(U.frame @ Q)
        m3 = direct_sum_margin([U2, V])
        assert abs(m1 - m2) < 1e-10
        assert abs(m1 - m3) < 1e-10


def test_ratio_invariance_under_scaling():
    rng = np.random.default_rng(8)
    for _ in range(20):
        A = rng.normal(size=(4, 4))
        c = rng.uniform(0.1, 10.0)
        M1 = normalize_lift(A)
        M2 = normalize_lift(c * A)
        assert np.allclose(eigen_moduli(M1), eigen_moduli(M2), rtol=1e-9)
        assert np.allclose(singular_values(M1), singular_values(M2), rtol=1e-9)
