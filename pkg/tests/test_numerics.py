import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from journal_influence.errors import CollinearityError, ConstantColumnError, ContractError
from journal_influence.numerics import (betainc, correlation_matrix, eigen_symmetric, f_pvalue,
                                        pearson, solve_spd, standardize, t_pvalue_two_sided)

from oracles import f_upper_quad, t_two_sided_quad


class TestSolveSpd:
    def test_identity(self):
        b = np.array([3.0, -1.5, 7.25])
        np.testing.assert_array_equal(solve_spd(np.eye(3), b), b)

    def test_diagonal(self):
        np.testing.assert_allclose(solve_spd([[2.0, 0.0], [0.0, 4.0]], [2.0, 8.0]), [1.0, 2.0])

    def test_duplicated_predictor_is_collinear(self):
        rng = np.random.default_rng(3)
        X = rng.normal(size=(30, 3))
        X = np.column_stack([X, X[:, 1]])
        with pytest.raises(CollinearityError) as info:
            solve_spd(X.T @ X, X.T @ rng.normal(size=30))
        assert info.value.index == 3

    def test_rejects_nonsymmetric(self):
        with pytest.raises(ContractError):
            solve_spd([[1.0, 2.0], [0.0, 1.0]], [1.0, 1.0])

    @pytest.mark.parametrize("p", [1, 2, 5, 10, 20])
    def test_random_spd_residual(self, p):
        rng = np.random.default_rng(p)
        for _ in range(10):
            B = rng.normal(size=(p + 5, p))
            A = B.T @ B
            b = rng.normal(size=p) * 10
            x = solve_spd(A, b)
            assert np.max(np.abs(A @ x - b)) <= 1e-8 * max(1.0, np.max(np.abs(b)))


class TestPearson:
    def test_self_and_flip(self):
        x = np.array([0.3, 1.7, 2.2, 5.0, 4.1])
        assert pearson(x, x) == pytest.approx(1.0, abs=1e-15)
        assert pearson(x, -x) == pytest.approx(-1.0, abs=1e-15)

    def test_hand_value(self):
        # cross-product 3, sums of squares 2 and 42/9
        assert pearson([1, 2, 3], [1, 2, 4]) == pytest.approx(3 / math.sqrt(2 * 42 / 9), abs=1e-14)
        assert pearson([1, 2, 3], [1, 2, 4]) == pytest.approx(0.98198, abs=1e-5)

    def test_constant_column(self):
        with pytest.raises(ConstantColumnError):
            pearson([1, 1, 1], [1, 2, 3])

    @settings(max_examples=60, deadline=None)
    @given(
        arrays(float, 12, elements=st.floats(-100, 100)),
        arrays(float, 12, elements=st.floats(-100, 100)),
        st.floats(0.01, 100), st.floats(-50, 50),
    )
    def test_affine_invariance(self, x, y, slope, shift):
        if np.ptp(x) < 1e-3 or np.ptp(y) < 1e-3:
            return
        r = pearson(x, y)
        assert pearson(slope * x + shift, y) == pytest.approx(r, abs=1e-10)
        assert pearson(x, -slope * y + shift) == pytest.approx(-r, abs=1e-10)
        assert pearson(y, x) == pytest.approx(r, abs=1e-14)


class TestStandardize:
    def test_hand_value(self):
        np.testing.assert_allclose(standardize([1.0, 2.0, 3.0]), [-1.0, 0.0, 1.0], atol=1e-15)

    def test_idempotent(self):
        z = standardize(np.random.default_rng(0).normal(size=50))
        np.testing.assert_allclose(standardize(z), z, atol=1e-12)

    def test_constant(self):
        with pytest.raises(ConstantColumnError):
            standardize([5.0, 5.0, 5.0])

    @settings(max_examples=60, deadline=None)
    @given(arrays(float, st.integers(2, 40), elements=st.floats(-1e4, 1e4)))
    def test_moments(self, x):
        if np.ptp(x) < 1e-6 * max(1.0, np.max(np.abs(x))):
            return
        z = standardize(x)
        assert abs(z.mean()) < 1e-12
        assert z.std(ddof=1) == pytest.approx(1.0, abs=1e-9)


class TestCorrelationMatrix:
    def test_orthogonal_columns(self):
        X = np.array([[1, 1], [1, -1], [-1, 1], [-1, -1]], dtype=float)
        np.testing.assert_allclose(correlation_matrix(X), np.eye(2), atol=1e-15)

    def test_duplicated_column(self):
        rng = np.random.default_rng(1)
        a = rng.normal(size=20)
        R = correlation_matrix(np.column_stack([a, rng.normal(size=20), a]))
        assert R[0, 2] == pytest.approx(1.0, abs=1e-12)

    def test_two_columns_match_pearson(self):
        rng = np.random.default_rng(2)
        X = rng.normal(size=(25, 2))
        assert correlation_matrix(X)[0, 1] == pytest.approx(pearson(X[:, 0], X[:, 1]), abs=1e-14)

    def test_names_constant_column(self):
        X = np.column_stack([np.arange(5.0), np.ones(5)])
        with pytest.raises(ConstantColumnError, match="h_index"):
            correlation_matrix(X, ["quarter", "h_index"])

    def test_properties(self):
        rng = np.random.default_rng(4)
        R = correlation_matrix(rng.normal(size=(40, 6)) @ rng.normal(size=(6, 6)))
        np.testing.assert_array_equal(R, R.T)
        np.testing.assert_array_equal(np.diag(R), 1.0)
        assert np.all(np.abs(R) <= 1.0)


class TestEigen:
    def test_identity(self):
        e = eigen_symmetric(np.eye(4))
        np.testing.assert_allclose(e.eigenvalues, 1.0)

    def test_diagonal(self):
        e = eigen_symmetric([[2.0, 0.0], [0.0, 3.0]])
        np.testing.assert_allclose(e.eigenvalues, [3.0, 2.0])
        np.testing.assert_allclose(e.eigenvectors, [[0.0, 1.0], [1.0, 0.0]])

    def test_two_by_two(self):
        # characteristic polynomial (1 - l)^2 - 1/4
        e = eigen_symmetric([[1.0, 0.5], [0.5, 1.0]])
        np.testing.assert_allclose(e.eigenvalues, [1.5, 0.5], atol=1e-14)

    def test_nonsymmetric(self):
        with pytest.raises(ContractError):
            eigen_symmetric([[1.0, 0.2], [0.0, 1.0]])

    def test_sign_convention(self):
        rng = np.random.default_rng(5)
        B = rng.normal(size=(6, 6))
        V = eigen_symmetric(B + B.T).eigenvectors
        lead = V[np.argmax(np.abs(V), axis=0), np.arange(6)]
        assert np.all(lead > 0)

    @pytest.mark.parametrize("p", [1, 3, 7, 13])
    def test_invariants_on_correlation_matrices(self, p):
        rng = np.random.default_rng(100 + p)
        for _ in range(5):
            X = rng.normal(size=(60, p)) @ rng.normal(size=(p, p))
            R = correlation_matrix(X)
            e = eigen_symmetric(R)
            V, lam = e.eigenvectors, e.eigenvalues
            assert np.max(np.abs(V.T @ V - np.eye(p))) < 1e-8
            assert np.max(np.abs(V @ np.diag(lam) @ V.T - R)) < 1e-8
            assert abs(lam.sum() - p) < 1e-8
            assert np.all(lam >= -1e-9)
            assert np.all(np.diff(lam) <= 0)
            np.testing.assert_allclose(np.sort(lam), np.linalg.eigvalsh(R), atol=1e-10)

    @settings(max_examples=40, deadline=None)
    @given(arrays(float, (5, 5), elements=st.floats(-10, 10)))
    def test_reconstruction_property(self, B):
        A = (B + B.T) / 2
        e = eigen_symmetric(A)
        V = e.eigenvectors
        assert np.max(np.abs(V @ np.diag(e.eigenvalues) @ V.T - A)) < 1e-8
        assert np.max(np.abs(V.T @ V - np.eye(5))) < 1e-8


class TestDistributions:
    def test_betainc_edges(self):
        assert betainc(2.0, 3.0, 0.0) == 0.0
        assert betainc(2.0, 3.0, 1.0) == 1.0
        # I_x(1, 1) = x and I_x(a, 1) = x^a
        assert betainc(1.0, 1.0, 0.37) == pytest.approx(0.37, abs=1e-15)
        assert betainc(3.5, 1.0, 0.6) == pytest.approx(0.6 ** 3.5, abs=1e-14)
        # symmetry I_x(a, b) = 1 - I_{1-x}(b, a)
        assert betainc(4.0, 7.5, 0.3) == pytest.approx(1 - betainc(7.5, 4.0, 0.7), abs=1e-14)

    def test_t_zero(self):
        for df in (1, 5, 219):
            assert t_pvalue_two_sided(0.0, df) == 1.0

    def test_t_oracle_value(self):
        # frozen from tests/oracles.t_two_sided_quad(2.0, 10)
        assert t_pvalue_two_sided(2.0, 10) == pytest.approx(0.07338803477074043, abs=1e-10)
        assert t_pvalue_two_sided(2.0, 10) == pytest.approx(0.07339, abs=1e-5)

    def test_t_table_value(self):
        p = t_pvalue_two_sided(10.00582, 219)
        assert abs(math.log(p) - math.log(1.19e-19)) <= math.log(2)

    def test_t_df_zero(self):
        with pytest.raises(ContractError):
            t_pvalue_two_sided(1.0, 0)

    def test_t_monotone(self):
        ps = [t_pvalue_two_sided(t, 12) for t in np.linspace(0, 12, 60)]
        assert all(a > b for a, b in zip(ps, ps[1:]))

    def test_f_zero_and_median(self):
        assert f_pvalue(0.0, 3, 9) == 1.0
        for d in (1, 4, 30):
            assert f_pvalue(1.0, d, d) == pytest.approx(0.5, abs=1e-12)
            assert f_upper_quad(1.0, d, d) == pytest.approx(0.5, abs=1e-9)

    def test_f_table_value(self):
        p = f_pvalue(146.4943, 5, 219)
        assert abs(math.log10(p) - math.log10(8.28932e-68)) <= 1.0

    def test_f_invalid_df(self):
        with pytest.raises(ContractError):
            f_pvalue(1.0, 0, 3)
        with pytest.raises(ContractError):
            f_pvalue(1.0, 2, 1.5)

    @pytest.mark.parametrize("t,df", [(0.3, 1), (1.1, 2), (2.5, 7), (-3.2, 30), (4.0, 120), (6.5, 219)])
    def test_t_against_quadrature(self, t, df):
        assert t_pvalue_two_sided(t, df) == pytest.approx(t_two_sided_quad(t, df), abs=1e-6, rel=1e-6)

    @pytest.mark.parametrize("F,d1,d2", [(0.2, 1, 1), (1.7, 3, 12), (4.0, 5, 40), (12.0, 9, 219), (30.0, 2, 8)])
    def test_f_against_quadrature(self, F, d1, d2):
        assert f_pvalue(F, d1, d2) == pytest.approx(f_upper_quad(F, d1, d2), abs=1e-6, rel=1e-6)
