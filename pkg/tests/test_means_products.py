from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from socv import linalg_core as la
from socv import means_products as mp

from .conftest import alphas, dims, positive, positive_pair, scale_of, seeds


class TestNabla:
    def test_scalar(self):
        assert mp.nabla(np.array([[1.0]]), np.array([[3.0]]), 0.25)[0, 0] == 1.5

    def test_endpoints(self):
        A, B = np.eye(2), 2 * np.eye(2)
        assert mp.nabla(A, B, 0.0) is not A
        assert_allclose(mp.nabla(A, B, 0.0), A)
        assert_allclose(mp.nabla(A, B, 1.0), B)

    def test_bad_alpha(self):
        with pytest.raises(ValueError):
            mp.nabla(np.eye(2), np.eye(2), 1.5)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            mp.nabla(np.eye(2), np.eye(3), 0.5)


class TestHarmonic:
    def test_scalar(self):
        assert mp.harmonic(np.array([[1.0]]), np.array([[2.0]]), 0.5)[0, 0] == pytest.approx(4 / 3, abs=1e-15)

    def test_diagonal(self):
        H = mp.harmonic(np.diag([1.0, 2.0]), np.diag([2.0, 1.0]), 0.5)
        assert_allclose(H, np.diag([4 / 3, 4 / 3]), atol=1e-15)

    def test_requires_positive_definite(self):
        with pytest.raises(np.linalg.LinAlgError):
            mp.harmonic(np.diag([1.0, 0.0]), np.eye(2), 0.5)

    def test_endpoints_skip_inverse(self):
        A = np.diag([1.0, 0.0])
        assert_allclose(mp.harmonic(A, np.eye(2), 0.0), A)

    @given(seed=seeds, dim=dims, alpha=alphas)
    def test_swap_symmetry(self, seed, dim, alpha):
        A, B = positive_pair(seed, dim)
        assert_allclose(mp.harmonic(A, B, alpha), mp.harmonic(B, A, 1 - alpha), atol=1e-9 * scale_of(A, B))

    @given(seed=seeds, dim=dims, alpha=alphas)
    def test_self_mean(self, seed, dim, alpha):
        A = positive(seed, dim)
        assert_allclose(mp.harmonic(A, A, alpha), A, atol=1e-9 * scale_of(A))

    @given(seed=seeds, dim=dims, alpha=alphas, cplx=st.booleans())
    def test_below_arithmetic(self, seed, dim, alpha, cplx):
        A, B = positive_pair(seed, dim, cplx)
        gap = mp.nabla(A, B, alpha) - mp.harmonic(A, B, alpha)
        assert la.numerically_psd(gap, scale=scale_of(A, B)).is_psd

    @given(seed=seeds, dim=dims, p=st.sampled_from([-1.0, -0.5]))
    def test_negative_power_midpoint_convexity(self, seed, dim, p):
        A, B = positive_pair(seed, dim)
        lhs = la.mpow(mp.nabla(A, B, 0.5), p)
        rhs = mp.nabla(la.mpow(A, p), la.mpow(B, p), 0.5)
        assert la.numerically_psd(rhs - lhs, scale=scale_of(lhs, rhs)).is_psd


class TestSymmetrizedProduct:
    def test_example_pair(self, paper_pair):
        S = mp.symmetrized_product(*paper_pair)
        assert_allclose(S, [[2.0, 1.0], [1.0, 0.0]])
        assert la.min_eig(S) == pytest.approx(1 - np.sqrt(2), abs=1e-12)

    @given(seed=seeds, dim=dims)
    def test_exactly_hermitian(self, seed, dim):
        A, B = positive_pair(seed, dim, True)
        S = mp.symmetrized_product(A, B)
        assert np.array_equal(S, S.conj().T)

    def test_commuting_is_twice_product(self):
        A, B = np.diag([1.0, 2.0]), np.diag([3.0, 5.0])
        assert_allclose(mp.symmetrized_product(A, B), 2 * A @ B)


class TestMeanGap:
    def test_scalar_exact(self):
        a, b, al = Fraction(1), Fraction(2), Fraction(1, 2)
        lhs = (1 - al) * a + al * b - 1 / ((1 - al) / a + al / b)
        rhs = al * (1 - al) * (a - b) ** 2 / (al * a + (1 - al) * b)
        assert lhs == rhs == Fraction(1, 6)
        L, R = mp.mean_gap_sides(np.array([[1.0]]), np.array([[2.0]]), 0.5)
        assert L[0, 0] == pytest.approx(1 / 6, abs=1e-15) and R[0, 0] == pytest.approx(1 / 6, abs=1e-15)

    def test_scalar_unequal_weights(self):
        # weights in the denominator are swapped relative to the arithmetic mean
        a, b, al = Fraction(1), Fraction(4), Fraction(1, 4)
        lhs = (1 - al) * a + al * b - 1 / ((1 - al) / a + al / b)
        assert lhs == al * (1 - al) * (a - b) ** 2 / (al * a + (1 - al) * b)
        assert lhs != al * (1 - al) * (a - b) ** 2 / ((1 - al) * a + al * b)
        assert mp.mean_gap_residual(np.array([[1.0]]), np.array([[4.0]]), 0.25) < 1e-14

    @given(seed=seeds, dim=st.integers(1, 8), alpha=st.sampled_from([0.1, 0.3, 0.5, 0.9]), cplx=st.booleans())
    def test_identity(self, seed, dim, alpha, cplx):
        A, B = positive_pair(seed, dim, cplx)
        r = mp.mean_gap_residual(A, B, alpha)
        assert r <= 1e-10 * max(1.0, la.op_norm(A) + la.op_norm(B))

    def test_open_alpha(self):
        with pytest.raises(ValueError):
            mp.mean_gap_sides(np.eye(2), np.eye(2), 0.0)


class TestParallelSum:
    def test_scalar(self):
        assert mp.parallel_sum(np.array([[2.0]]), np.array([[2.0]]))[0, 0] == pytest.approx(1.0)

    @given(seed=seeds, dim=dims)
    def test_against_direct_formula(self, seed, dim):
        A, B = positive_pair(seed, dim)
        oracle = B @ np.linalg.solve(A + B, A)
        assert_allclose(mp.parallel_sum(A, B), la.symmetrize(oracle), atol=1e-9 * scale_of(A, B))

    @given(seed=seeds, dim=dims, cplx=st.booleans())
    def test_minimizer(self, seed, dim, cplx):
        A, B = positive_pair(seed, dim, cplx)
        rng = np.random.default_rng(seed + 1)
        z = rng.standard_normal(dim) + (1j * rng.standard_normal(dim) if cplx else 0)
        x, value = mp.parallel_sum_minimizer(A, B, z)
        # oracle for the minimizer: x = (A + B)^-1 B z
        assert_allclose(x, np.linalg.solve(A + B, B @ z), atol=1e-8 * np.linalg.norm(z) * scale_of(A, B))
        tol = 1e-9 * scale_of(A, B) * np.vdot(z, z).real
        assert mp.decomposition_value(A, B, x, z - x) == pytest.approx(value, abs=tol)
        for _ in range(20):
            x2 = x + rng.standard_normal(dim)
            assert mp.decomposition_value(A, B, x2, z - x2) >= value - tol
