import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from socv import functions as fn
from socv import linalg_core as la
from socv.functions import DiscreteMeasure, Interval, make_soc_left, make_soc_right
from socv.harness import gen_dominated_pair

from .conftest import seeds


def direct_right(a_const, atoms, t):
    return a_const + sum(w / (t - l) for l, w in atoms)


class TestInterval:
    def test_open_endpoints(self):
        J = Interval(0, math.inf)
        assert not J.contains(0.0) and J.contains(1e-300)

    def test_invalid(self):
        with pytest.raises(ValueError):
            Interval(1, 1)

    def test_json(self):
        assert Interval.from_json(["-inf", 0]) == fn.NEGATIVE
        assert fn.POSITIVE.to_json() == [0.0, "inf"]

    def test_sampling_range_caps_infinite_end(self):
        lo, hi = fn.NEGATIVE.sampling_range(100)
        assert lo == pytest.approx(-100 + 1e-3) and hi == pytest.approx(-1e-3)

    def test_delta_for_short_interval(self):
        assert Interval(0, 0.5).delta() == pytest.approx(5e-4)


class TestDiscreteMeasure:
    def test_rejects_nonpositive_weight(self):
        with pytest.raises(ValueError):
            DiscreteMeasure(((0.0, 0.0),))

    def test_rejects_duplicate_locations(self):
        with pytest.raises(ValueError):
            DiscreteMeasure(((0.0, 1.0), (0.0, 2.0)))

    def test_tail_condition_trivial(self):
        assert DiscreteMeasure(((-1e6, 1e6),)).tail_integral_finite()


class TestMakeSocRight:
    def test_single_atom_is_inverse(self):
        g = make_soc_right(0, 0, DiscreteMeasure(((0.0, 1.0),)))
        assert g.at(2.0) == 0.5

    def test_empty_measure(self):
        with pytest.raises(fn.RepresentationError):
            make_soc_right(0, 0, DiscreteMeasure())
        g = make_soc_right(0, 3, DiscreteMeasure())
        assert_allclose(g(np.array([0.1, 5.0, 1e3])), 3.0)
        assert g.constant

    def test_two_atoms(self):
        atoms = ((-1.0, 2.0), (0.0, 1.0))
        g = make_soc_right(0, 1, DiscreteMeasure(atoms))
        assert g.at(1.0) == direct_right(1, atoms, 1.0) == 3.0

    def test_atom_right_of_anchor_rejected(self):
        with pytest.raises(fn.RepresentationError):
            make_soc_right(0, 0, DiscreteMeasure(((0.5, 1.0),)))

    def test_flags(self):
        g = make_soc_right(1, 0, DiscreteMeasure(((0.0, 1.0),)))
        assert g.has("soc") and g.has("operator_convex") and g.domain == Interval(1, math.inf)


class TestMakeSocLeft:
    def test_single_atom(self):
        g = make_soc_left(0, 0, DiscreteMeasure(((0.0, 1.0),)))
        assert g.at(-2.0) == 0.5

    def test_atom_inside(self):
        g = make_soc_left(0, 0, DiscreteMeasure(((1.0, 1.0),)))
        assert g.at(-1.0) == 0.5

    def test_reproduces_resolvent(self):
        for lam in (0.0, 0.5, 3.0):
            g = make_soc_left(0, 0, DiscreteMeasure(((lam, 1.0),)))
            t = np.linspace(-10, -0.1, 50)
            assert_allclose(g(t), 1 / (lam - t), rtol=1e-15)

    def test_atom_left_of_anchor_rejected(self):
        with pytest.raises(fn.RepresentationError):
            make_soc_left(0, 0, DiscreteMeasure(((-0.5, 1.0),)))

    def test_flags(self):
        g = make_soc_left(0, 1, DiscreteMeasure(((1.0, 1.0),)))
        assert g.has("soc") and g.has("operator_monotone")


class TestCatalog:
    def test_contents(self):
        names = {f.name for f in fn.catalog()}
        assert {"inv_pow_0.25", "inv_sqrt", "inv", "pow_0.25", "sqrt", "id", "square", "asinh", "log1p",
                "neg_inv", "const_1"} <= names

    def test_inv_representation(self):
        g = fn.lookup("inv")
        assert g.soc_rep.side == "right" and g.soc_rep.anchor == 0 and g.soc_rep.constant == 0
        assert g.soc_rep.measure.atoms == ((0.0, 1.0),)

    def test_asinh_is_kwong(self):
        assert fn.lookup("asinh").has("kwong")

    def test_flags_per_entry(self):
        for name in ("inv_pow_0.25", "inv_sqrt", "inv"):
            assert fn.lookup(name).has("soc")
        for name in ("pow_0.25", "sqrt", "id", "log1p"):
            assert fn.lookup(name).has("operator_monotone") and fn.lookup(name).has("kwong")
        for name in ("id", "square"):
            assert fn.lookup(name).has("operator_convex")
        assert fn.lookup("neg_inv").has("soc") and fn.lookup("neg_inv").domain == fn.NEGATIVE

    def test_unknown(self):
        with pytest.raises(KeyError):
            fn.lookup("nope")

    @pytest.mark.parametrize("f", fn.catalog(), ids=lambda f: f.name)
    def test_validates_on_grid(self, f):
        f.validate()

    @pytest.mark.parametrize("f", fn.soc_catalog(), ids=lambda f: f.name)
    def test_soc_entries_positive(self, f):
        assert np.all(f(f.domain.grid(1000)) > 0)

    @pytest.mark.parametrize("f", fn.soc_catalog(), ids=lambda f: f.name)
    def test_soc_entries_pass_witness(self, f):
        out = fn.soc_witness_test(f, dims=(3,), trials=200, seed=1)
        assert out.verdict == "PASS", out


class TestRandomSoc:
    @given(seed=seeds, side=st.sampled_from(["right", "left"]))
    def test_positive_and_monotone(self, seed, side):
        g = fn.random_soc(np.random.default_rng(seed), side)
        grid = g.domain.grid(1000)
        vals = g(grid)
        assert np.all(vals > 0)
        d = np.diff(vals)
        assert np.all(d < 0) if side == "right" else np.all(d > 0)
        g.validate()

    @given(seed=seeds)
    def test_sampler_ranges(self, seed):
        g = fn.random_soc(np.random.default_rng(seed), "right", anchor=2.0)
        u = 2.0 - g.soc_rep.measure.locations
        assert 1 <= len(g.soc_rep.measure) <= 5
        assert np.all((u >= 1e-2) & (u <= 1e2))
        assert np.all((g.soc_rep.measure.weights >= 1e-2) & (g.soc_rep.measure.weights <= 1e1))
        assert 0 <= g.soc_rep.constant <= 1

    @given(s1=seeds, s2=seeds)
    def test_representation_linearity(self, s1, s2):
        g1 = fn.random_soc(np.random.default_rng(s1), "right")
        g2 = fn.random_soc(np.random.default_rng(s2), "right")
        m1, m2 = g1.soc_rep.measure, g2.soc_rep.measure
        if set(m1.locations) & set(m2.locations):
            return
        c = 0.7
        both = make_soc_right(0, c, m1.union(m2))
        grid = both.domain.grid(1000)
        parts = make_soc_right(0, c, m1)(grid) + make_soc_right(0, c, m2)(grid) - c
        assert_allclose(both(grid), parts, rtol=1e-12)

    @given(seed=seeds, dim=st.integers(1, 5))
    def test_operator_decreasing_on_matrices(self, seed, dim):
        rng = np.random.default_rng(seed)
        g = fn.random_soc(rng, "right")
        A, B = gen_dominated_pair(g.domain, dim, 0.5, rng)
        gA, gB = g.matrix(A), g.matrix(B)
        assert la.numerically_psd(gB - gA, scale=max(la.op_norm(gA), la.op_norm(gB))).is_psd


class TestWitness:
    def test_inverse_passes(self):
        assert fn.soc_witness_test(fn.lookup("inv"), (1, 2, 3), 200, seed=0).verdict == "PASS"

    def test_identity_fails(self):
        out = fn.soc_witness_test(fn.lookup("id"), (1, 2, 3), 50, seed=0)
        assert out.verdict == "FAIL" and out.margins["harmonic_gap"] < 0

    def test_scalar_counterexample(self):
        # a=1, b=3: arithmetic mean 2 exceeds harmonic mean 1.5
        a, b = 1.0, 3.0
        assert (a + b) / 2 - 2 / (1 / a + 1 / b) == 0.5

    def test_constant_zero_margins(self):
        out = fn.soc_witness_test(fn.lookup("const_1"), (1, 2, 3), 50, seed=0)
        assert out.verdict == "PASS" and abs(out.margins["harmonic_gap"]) < 1e-12

    def test_nonpositive_rejected(self):
        f = fn.ScalarFunction("neg", fn.POSITIVE, lambda t: -t)
        with pytest.raises(ValueError):
            fn.soc_witness_test(f)


class TestSpecJson:
    def test_round_trip(self):
        spec = {"name": "two_atoms", "domain": [0, "inf"],
                "soc_rep": {"side": "right", "a": 0, "constant": 1, "atoms": [[-1, 2], [0, 1]]}}
        g = fn.from_spec(json.loads(json.dumps(spec)))
        assert g.at(1.0) == 3.0
        assert fn.from_spec(fn.to_spec(g)).at(1.0) == 3.0

    def test_left_side(self):
        g = fn.from_spec({"soc_rep": {"side": "left", "b": 0, "atoms": [[1, 1]]}})
        assert g.at(-1.0) == 0.5

    def test_domain_mismatch(self):
        with pytest.raises(ValueError):
            fn.from_spec({"domain": [1, "inf"], "soc_rep": {"side": "right", "a": 0, "atoms": [[0, 1]]}})

    def test_catalog_name(self):
        assert fn.from_spec("inv") is fn.lookup("inv")
        assert fn.to_spec(fn.lookup("inv")) == "inv"
