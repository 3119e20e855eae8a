import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from socv import functions as fn
from socv import linalg_core as la
from socv import theorems as th
from socv.kwong import (PointSet, kwong_empirical, kwong_matrix, kwong_trials, prop14_transforms,
                        reciprocal, sample_point_set)

from .conftest import seeds


class TestPointSet:
    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            PointSet((0.0, 1.0))

    def test_rejects_duplicates(self):
        with pytest.raises(ValueError):
            PointSet((1.0, 1.0))

    @given(seed=seeds, n=st.integers(1, 8))
    def test_sampler(self, seed, n):
        pts = sample_point_set(np.random.default_rng(seed), n)
        assert len(pts) == n and min(pts.points) >= 1e-2 and max(pts.points) <= 1e2


class TestKwongMatrix:
    def test_identity_function_gives_ones(self):
        assert_allclose(kwong_matrix(fn.lookup("id"), [0.5, 2.0, 7.0]), np.ones((3, 3)))

    def test_constant_gives_cauchy_matrix(self):
        t = np.array([0.3, 1.0, 4.0, 9.0])
        K = kwong_matrix(fn.lookup("const_1"), t)
        assert_allclose(K, 2 / (t[:, None] + t[None, :]))
        w = la.eigh(K, method="jacobi").eigenvalues
        assert w[0] > 0

    def test_domain(self):
        f = fn.ScalarFunction("f", fn.Interval(1, np.inf), lambda t: t)
        with pytest.raises(la.DomainError):
            kwong_matrix(f, [0.5, 2.0])

    def test_square_small_counterexample(self):
        # brute-force search over a coarse grid for a violating 3-point set
        grid = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0]
        sq = fn.lookup("square")
        worst = min(np.linalg.eigvalsh(kwong_matrix(sq, c))[0] for c in itertools.combinations(grid, 3))
        assert worst < 0

    def test_square_two_points(self):
        # det of [[t, (s^2+t^2)/(s+t)], [.., s]] is negative whenever s != t
        K = kwong_matrix(fn.lookup("square"), [1.0, 2.0])
        assert np.linalg.det(K) < 0


class TestBattery:
    @pytest.mark.parametrize("name", ["inv", "inv_sqrt", "inv_pow_0.25", "sqrt", "pow_0.25", "id", "asinh",
                                      "log1p", "const_1", "asinh_sqrt_over_sqrt"])
    def test_kwong_catalog_passes(self, name):
        out = kwong_empirical(fn.lookup(name), trials=200, seed=3)
        assert out.verdict == "PASS", out.info

    def test_square_fails(self):
        out = kwong_empirical(fn.lookup("square"), trials=100, seed=3)
        assert out.verdict == "FAIL" and out.info["violations"] == 100

    def test_same_points_across_functions(self):
        a = [p for _, _, p in kwong_trials(fn.lookup("sqrt"), trials=20, seed=9)]
        b = [p for _, _, p in kwong_trials(fn.lookup("square"), trials=20, seed=9)]
        assert a == b

    def test_reciprocal_duality(self):
        for name in ("sqrt", "asinh", "square", "log1p"):
            f = fn.lookup(name)
            direct = kwong_trials(f, trials=200, seed=5)
            dual = kwong_trials(reciprocal(f), trials=200, seed=5)
            for (m1, t1, _), (m2, t2, _) in zip(direct, dual):
                if th.in_band(m1, t1) or th.in_band(m2, t2):
                    continue
                assert (m1 >= -t1) == (m2 >= -t2)

    @given(seed=seeds, n=st.integers(2, 6))
    def test_reciprocal_congruence(self, seed, n):
        f = fn.lookup("asinh")
        pts = sample_point_set(np.random.default_rng(seed), n)
        ft = f(pts.as_array())
        D = np.diag(1 / ft)
        assert_allclose(kwong_matrix(reciprocal(f), pts), D @ kwong_matrix(f, pts) @ D, rtol=1e-12)


class TestTransforms:
    def test_asinh_half_power_is_soc(self):
        _, f2 = prop14_transforms(fn.lookup("asinh"), 0.5)
        assert f2.has("soc")
        t = np.array([0.04, 1.0, 9.0])
        assert_allclose(f2(t), np.arcsinh(np.sqrt(t)) / np.sqrt(t))
        assert fn.soc_witness_test(f2, (1, 2, 3), 200, seed=2).verdict == "PASS"

    def test_inverse_at_minus_one_is_identity(self):
        f1, _ = prop14_transforms(fn.lookup("inv"), -1.0)
        t = np.array([0.1, 2.0, 30.0])
        assert_allclose(f1(t), t)
        assert f1.has("kwong")

    def test_soc_composed_with_powers_is_kwong(self):
        for p in (-1.0, -0.5, 0.3, 1.0):
            f1, _ = prop14_transforms(fn.lookup("inv_sqrt"), p)
            assert kwong_empirical(f1, trials=100, seed=1).verdict == "PASS"

    def test_flag_ranges(self):
        _, f2 = prop14_transforms(fn.lookup("asinh"), 0.75)
        assert not f2.has("soc")
        with pytest.raises(ValueError):
            prop14_transforms(fn.lookup("asinh"), 1.5)
