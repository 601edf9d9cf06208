import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pilotcap.errors import AsymmetryTooLarge, ConvergenceFailure, DimensionMismatch, NotPositiveDefinite, NotSquare
from pilotcap.reference import EXAMPLE1_COVARIANCE
from pilotcap.spd_core import SymMatrix, check_spd, cholesky, log_det, solve_spd, sym_eigen

from .conftest import random_spd


class TestSymMatrix:
    def test_symmetrizes_small_noise(self):
        a = np.array([[1.0, 0.5 + 1e-12], [0.5, 2.0]])
        s = SymMatrix(a)
        assert s.values[0, 1] == s.values[1, 0]

    def test_rejects_large_asymmetry(self):
        with pytest.raises(AsymmetryTooLarge):
            SymMatrix([[1.0, 0.5], [0.4, 2.0]])

    def test_rejects_non_square(self):
        with pytest.raises(NotSquare):
            SymMatrix(np.ones((2, 3)))

    def test_immutable(self):
        s = SymMatrix.identity(2)
        with pytest.raises(ValueError):
            s.values[0, 0] = 3.0

    def test_scalar_promotes(self):
        assert SymMatrix(4.0).dim == 1


class TestCholesky:
    def test_identity(self, backend):
        np.testing.assert_array_equal(cholesky(np.eye(3)), np.eye(3))

    def test_two_by_two(self, backend):
        L = cholesky([[4.0, 2.0], [2.0, 3.0]])
        np.testing.assert_allclose(L, [[2.0, 0.0], [1.0, math.sqrt(2.0)]], rtol=1e-15)
        # reconstruction by direct multiplication
        np.testing.assert_allclose(L @ L.T, [[4.0, 2.0], [2.0, 3.0]], rtol=1e-15)

    def test_indefinite(self, backend):
        with pytest.raises(NotPositiveDefinite) as err:
            cholesky([[1.0, 2.0], [2.0, 1.0]])
        assert err.value.pivot_index == 1

    def test_zero_matrix_not_pd(self, backend):
        with pytest.raises(NotPositiveDefinite) as err:
            cholesky(np.zeros((2, 2)))
        assert err.value.pivot_index == 0

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), m=st.integers(1, 16))
    def test_reconstruction(self, seed, m):
        a = random_spd(np.random.default_rng(seed), m)
        L = cholesky(a)
        assert np.linalg.norm(L @ L.T - a) / np.linalg.norm(a) <= 1e-12
        assert np.all(np.triu(L, 1) == 0.0)


class TestLogDet:
    def test_identity(self, backend):
        assert log_det(np.eye(5)) == 0.0

    def test_diagonal(self, backend):
        assert log_det(np.diag([2.0, 8.0])) == pytest.approx(math.log(16.0), rel=1e-15)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), m=st.integers(1, 16))
    def test_matches_eigenvalue_product(self, seed, m):
        a = random_spd(np.random.default_rng(seed), m)
        det_oracle = float(np.prod(np.linalg.eigvalsh(a)))
        assert math.exp(log_det(a)) == pytest.approx(det_oracle, rel=1e-9)

    def test_random_4x4_against_eigen(self, backend):
        a = random_spd(np.random.default_rng(4), 4)
        assert log_det(a) == pytest.approx(float(np.sum(np.log(np.linalg.eigvalsh(a)))), rel=1e-10)


class TestSolve:
    def test_identity(self, backend):
        b = np.array([[1.0, -2.0], [3.0, 0.5]])
        np.testing.assert_array_equal(solve_spd(np.eye(2), b), b)

    def test_diagonal(self, backend):
        np.testing.assert_allclose(solve_spd(np.diag([2.0, 4.0]), [[2.0], [4.0]]), [[1.0], [1.0]])

    def test_dimension_mismatch(self, backend):
        with pytest.raises(DimensionMismatch):
            solve_spd(np.eye(2), np.ones(3))

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), m=st.integers(1, 16), k=st.integers(1, 4))
    def test_round_trip(self, seed, m, k):
        rng = np.random.default_rng(seed)
        a = random_spd(rng, m)
        x0 = rng.standard_normal((m, k))
        x = solve_spd(a, a @ x0)
        assert np.linalg.norm(x - x0) / np.linalg.norm(x0) <= 1e-9


class TestSymEigen:
    def test_diagonal(self, backend):
        lam, U = sym_eigen(np.diag([1.0, 3.0]))
        np.testing.assert_array_equal(lam, [3.0, 1.0])
        np.testing.assert_array_equal(np.abs(U), [[0.0, 1.0], [1.0, 0.0]])

    def test_two_by_two(self, backend):
        # characteristic polynomial (2 - l)^2 - 1 = 0  ->  l = 3, 1
        lam, U = sym_eigen([[2.0, 1.0], [1.0, 2.0]])
        np.testing.assert_allclose(lam, [3.0, 1.0], rtol=1e-15)
        np.testing.assert_allclose(np.abs(U[:, 0]), [1 / math.sqrt(2)] * 2, rtol=1e-15)

    def test_identity(self, backend):
        lam, _ = sym_eigen(np.eye(4))
        np.testing.assert_array_equal(lam, np.ones(4))

    def test_convergence_failure(self, backend):
        with pytest.raises(ConvergenceFailure) as err:
            sym_eigen(random_spd(np.random.default_rng(0), 5), max_sweeps=1)
        assert err.value.iterations == 1

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), m=st.integers(1, 16))
    def test_decomposition(self, seed, m):
        rng = np.random.default_rng(seed)
        B = rng.standard_normal((m, m))
        a = B + B.T
        lam, U = sym_eigen(a)
        assert np.all(np.diff(lam) <= 0)
        assert np.linalg.norm(U @ np.diag(lam) @ U.T - a) <= 1e-10 * np.linalg.norm(a)
        assert np.abs(U.T @ U - np.eye(m)).max() <= 1e-10


class TestCheckSpd:
    def test_identity(self):
        r = check_spd(np.eye(2), 1e-12)
        assert r.is_pd and r.is_psd

    def test_zero(self):
        r = check_spd(np.zeros((2, 2)), 1e-12)
        assert r.is_psd and not r.is_pd

    def test_indefinite(self):
        r = check_spd([[1.0, 2.0], [2.0, 1.0]])
        assert not r.is_psd and r.min_eigenvalue == pytest.approx(-1.0)

    def test_example1_covariance(self):
        assert check_spd(EXAMPLE1_COVARIANCE).is_pd

    def test_default_tolerance_is_scale_relative(self):
        a = np.diag([1e6, -1e-6])
        r = check_spd(a)
        assert r.tolerance == pytest.approx(1e-4)
        assert r.is_psd and not r.is_pd
