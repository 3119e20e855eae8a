"""Scalar functions on open intervals.

SOC functions on half lines are built from finite atomic measures:

    right side, domain (a, inf):   g(t) = c + sum_i w_i / (t - l_i),  l_i <= a
    left side,  domain (-inf, b):  g(t) = c + sum_i w_i / (l_i - t),  l_i >= b

with ``c >= 0`` and ``w_i > 0``.  A finite atom list trivially satisfies the
integrability condition on the measure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Literal

import numpy as np

from . import linalg_core as la

FLAGS = ("operator_monotone", "operator_convex", "soc", "kwong")
DEFAULT_CAP = 100.0


class RepresentationError(ValueError):
    """Atomic measure does not fit the requested half-line representation."""


@dataclass(frozen=True)
class Interval:
    """Open interval ``(lo, hi)``; endpoints may be infinite."""

    lo: float = -math.inf
    hi: float = math.inf

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi) or not lo < hi:
            raise ValueError(f"invalid interval ({lo}, {hi})")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __str__(self):
        return f"({self.lo:g}, {self.hi:g})"

    def contains(self, x) -> bool:
        return bool(self.lo < x < self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def delta(self) -> float:
        """Generator margin: ``1e-3 * min(1, width)``."""
        return 1e-3 * min(1.0, self.width)

    def sampling_range(self, cap: float = DEFAULT_CAP) -> tuple[float, float]:
        """Closed range ``[lo + d, hi - d]`` with infinite ends capped.

        An infinite end is replaced by ``finite_end +/- cap`` when the other
        end is finite, and by ``-cap`` / ``+cap`` otherwise.
        """
        d = self.delta()
        lo, hi = self.lo, self.hi
        if math.isinf(lo) and math.isinf(hi):
            lo, hi = -cap, cap
        elif math.isinf(lo):
            lo = hi - cap
        elif math.isinf(hi):
            hi = lo + cap
        return lo + d, hi - d

    def grid(self, n: int = 1000, cap: float = DEFAULT_CAP) -> np.ndarray:
        lo, hi = self.sampling_range(cap)
        return np.linspace(lo, hi, n)

    def to_json(self) -> list:
        return [_enc(self.lo), _enc(self.hi)]

    @classmethod
    def from_json(cls, pair) -> "Interval":
        return cls(_dec(pair[0]), _dec(pair[1]))


POSITIVE = Interval(0.0, math.inf)
NEGATIVE = Interval(-math.inf, 0.0)


def _enc(x: float):
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _dec(x) -> float:
    if isinstance(x, str):
        return float(x.replace("infinity", "inf"))
    return float(x)


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finite positive measure given as ``(location, weight)`` atoms."""

    atoms: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        atoms = tuple((float(loc), float(w)) for loc, w in self.atoms)
        for loc, w in atoms:
            if not (math.isfinite(loc) and math.isfinite(w)):
                raise ValueError(f"non-finite atom ({loc}, {w})")
            if w <= 0:
                raise ValueError(f"atom weight must be positive, got {w}")
        locs = [loc for loc, _ in atoms]
        if len(set(locs)) != len(locs):
            raise ValueError("atom locations must be pairwise distinct")
        object.__setattr__(self, "atoms", atoms)

    def __len__(self):
        return len(self.atoms)

    @property
    def locations(self) -> np.ndarray:
        return np.array([loc for loc, _ in self.atoms])

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.atoms])

    def tail_integral_finite(self) -> bool:
        # finite sums always satisfy  int dmu / (1 + |l|) < inf
        return True

    def union(self, other: "DiscreteMeasure") -> "DiscreteMeasure":
        return DiscreteMeasure(self.atoms + other.atoms)


@dataclass(frozen=True)
class SocRepresentation:
    side: Literal["right", "left"]
    anchor: float
    constant: float
    measure: DiscreteMeasure

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        out = np.full(t.shape, self.constant, dtype=np.float64)
        for loc, w in self.measure.atoms:
            out = out + (w / (t - loc) if self.side == "right" else w / (loc - t))
        return out

    def to_json(self) -> dict:
        key = "a" if self.side == "right" else "b"
        return {
            "side": self.side,
            key: self.anchor,
            "constant": self.constant,
            "atoms": [[loc, w] for loc, w in self.measure.atoms],
        }


@dataclass(frozen=True, eq=False)
class ScalarFunction:
    """Real function on an open interval with classification flags.

    ``evaluator`` must accept and return numpy arrays.  Calling the object
    evaluates it; :func:`socv.linalg_core.apply_function` uses ``domain`` to
    reject matrices whose spectrum leaves the interval.
    """

    name: str
    domain: Interval
    evaluator: Callable[[np.ndarray], np.ndarray]
    flags: frozenset = field(default_factory=frozenset)
    soc_rep: SocRepresentation | None = None
    constant: bool = False
    note: str = ""

    def __post_init__(self):
        unknown = set(self.flags) - set(FLAGS)
        if unknown:
            raise ValueError(f"unknown flags {sorted(unknown)}")
        object.__setattr__(self, "flags", frozenset(self.flags))

    def __call__(self, t):
        return np.asarray(self.evaluator(np.asarray(t, dtype=np.float64)), dtype=np.float64)

    def __repr__(self):
        return f"ScalarFunction({self.name!r}, domain={self.domain}, flags={sorted(self.flags)})"

    def has(self, flag: str) -> bool:
        return flag in self.flags

    def at(self, x: float) -> float:
        return float(self(np.array([x]))[0])

    def matrix(self, H: np.ndarray) -> np.ndarray:
        return la.apply_function(self, H)

    def with_flags(self, *add: str, name: str | None = None) -> "ScalarFunction":
        return replace(self, flags=self.flags | set(add), name=name or self.name)

    def validate(self, n: int = 1000, cap: float = DEFAULT_CAP) -> None:
        """Check finiteness (and agreement with ``soc_rep``) on an interior grid."""
        grid = self.domain.grid(n, cap)
        vals = self(grid)
        if not np.all(np.isfinite(vals)):
            raise ValueError(f"{self.name} is not finite on its domain grid")
        if self.soc_rep is not None:
            rep = self.soc_rep(grid)
            err = np.abs(vals - rep) / np.maximum(1.0, np.abs(rep))
            if np.max(err) > 1e-12:
                raise ValueError(f"{self.name} disagrees with its representation (rel err {np.max(err):.2e})")


# ---------------------------------------------------------------------------
# atomic SOC constructors


def make_soc_right(a: float, g_inf: float, mu: DiscreteMeasure, name: str | None = None) -> ScalarFunction:
    """``g(t) = g_inf + sum w_i/(t - l_i)`` on ``(a, inf)``; all ``l_i <= a``."""
    a, g_inf = float(a), float(g_inf)
    if g_inf < 0:
        raise RepresentationError("constant term must be non-negative")
    bad = [loc for loc, _ in mu.atoms if loc > a]
    if bad:
        raise RepresentationError(f"atoms {bad} lie right of a={a}")
    if len(mu) == 0 and g_inf <= 0:
        raise RepresentationError("empty measure needs a positive constant")
    rep = SocRepresentation("right", a, g_inf, mu)
    return ScalarFunction(
        name=name or f"soc_right(a={a:g},n={len(mu)})",
        domain=Interval(a, math.inf),
        evaluator=rep,
        flags=frozenset({"soc", "operator_convex", "kwong"} if a == 0 else {"soc", "operator_convex"}),
        soc_rep=rep,
        constant=len(mu) == 0,
    )


def make_soc_left(b: float, g_neg_inf: float, mu: DiscreteMeasure, name: str | None = None) -> ScalarFunction:
    """``g(t) = g_neg_inf + sum w_i/(l_i - t)`` on ``(-inf, b)``; all ``l_i >= b``."""
    b, c = float(b), float(g_neg_inf)
    if c < 0:
        raise RepresentationError("constant term must be non-negative")
    bad = [loc for loc, _ in mu.atoms if loc < b]
    if bad:
        raise RepresentationError(f"atoms {bad} lie left of b={b}")
    if len(mu) == 0 and c <= 0:
        raise RepresentationError("empty measure needs a positive constant")
    rep = SocRepresentation("left", b, c, mu)
    return ScalarFunction(
        name=name or f"soc_left(b={b:g},n={len(mu)})",
        domain=Interval(-math.inf, b),
        evaluator=rep,
        flags=frozenset({"soc", "operator_monotone", "operator_convex"}),
        soc_rep=rep,
        constant=len(mu) == 0,
    )


def random_soc(
    rng: np.random.Generator,
    side: Literal["right", "left"] = "right",
    anchor: float = 0.0,
    n_atoms: tuple[int, int] = (1, 5),
    name: str | None = None,
) -> ScalarFunction:
    """Random atomic SOC function.

    Atom count uniform in ``n_atoms``; atoms at ``anchor -/+ u`` with ``u``
    log-uniform in [1e-2, 1e2]; weights log-uniform in [1e-2, 1e1]; constant
    uniform in [0, 1].
    """
    n = int(rng.integers(n_atoms[0], n_atoms[1] + 1))
    u = 10.0 ** rng.uniform(-2, 2, size=n)
    w = 10.0 ** rng.uniform(-2, 1, size=n)
    c = float(rng.uniform(0, 1))
    locs = anchor - u if side == "right" else anchor + u
    mu = DiscreteMeasure(tuple(zip(locs.tolist(), w.tolist())))
    if side == "right":
        return make_soc_right(anchor, c, mu, name=name)
    return make_soc_left(anchor, c, mu, name=name)


def resolvent_left(lam: float, name: str | None = None) -> ScalarFunction:
    """``t -> 1/(lam - t)`` on ``(-inf, lam)``."""
    return make_soc_left(lam, 0.0, DiscreteMeasure(((lam, 1.0),)), name=name or f"resolvent_left({lam:g})")


# ---------------------------------------------------------------------------
# catalog


def _power(p: float):
    return lambda t: np.power(t, p)


def _asinh_sqrt_over_sqrt(t):
    s = np.sqrt(t)
    return np.arcsinh(s) / s


def _build_catalog() -> dict[str, ScalarFunction]:
    out: list[ScalarFunction] = []
    for p, key in ((0.25, "inv_pow_0.25"), (0.5, "inv_sqrt")):
        out.append(ScalarFunction(key, POSITIVE, _power(-p), frozenset({"soc", "operator_convex", "kwong"})))
    out.append(make_soc_right(0.0, 0.0, DiscreteMeasure(((0.0, 1.0),)), name="inv"))
    for p, key in ((0.25, "pow_0.25"), (0.5, "sqrt")):
        out.append(ScalarFunction(key, POSITIVE, _power(p), frozenset({"operator_monotone", "kwong"})))
    out.append(
        ScalarFunction("id", POSITIVE, lambda t: t.copy(), frozenset({"operator_monotone", "operator_convex", "kwong"}),
                       note="g(0+) = 0")
    )
    out.append(ScalarFunction("square", POSITIVE, np.square, frozenset({"operator_convex"}), note="g(0+) = 0"))
    out.append(ScalarFunction("asinh", POSITIVE, np.arcsinh, frozenset({"kwong"})))
    out.append(ScalarFunction("log1p", POSITIVE, np.log1p, frozenset({"operator_monotone", "kwong"})))
    out.append(resolvent_left(0.0, name="neg_inv"))
    out.append(resolvent_left(1.0, name="resolvent_left_1"))
    out.append(make_soc_right(0.0, 1.0, DiscreteMeasure(), name="const_1"))
    out.append(
        ScalarFunction("asinh_sqrt_over_sqrt", POSITIVE, _asinh_sqrt_over_sqrt,
                       frozenset({"soc", "operator_convex", "kwong"}),
                       note="asinh(sqrt t)/sqrt t, Kwong-to-SOC transform at p = 1/2")
    )
    return {f.name: f for f in out}


_CATALOG = _build_catalog()


def catalog() -> list[ScalarFunction]:
    return list(_CATALOG.values())


def lookup(name: str) -> ScalarFunction:
    try:
        return _CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown function {name!r}; known: {sorted(_CATALOG)}") from None


def soc_catalog(side: str | None = None) -> list[ScalarFunction]:
    fs = [f for f in _CATALOG.values() if f.has("soc")]
    if side == "right":
        fs = [f for f in fs if math.isinf(f.domain.hi)]
    elif side == "left":
        fs = [f for f in fs if math.isinf(f.domain.lo)]
    return fs


def from_spec(spec) -> ScalarFunction:
    """Build a function from a catalog name or a function-spec JSON object.

    JSON form::

        {"name": "...", "domain": [lo, hi],
         "soc_rep": {"side": "right", "a": 0, "constant": 0.5, "atoms": [[-1, 2]]}}
    """
    if isinstance(spec, ScalarFunction):
        return spec
    if isinstance(spec, str):
        return lookup(spec)
    rep = spec.get("soc_rep")
    if rep is None:
        if "name" in spec:
            return lookup(spec["name"])
        raise ValueError("function spec needs a catalog 'name' or a 'soc_rep'")
    mu = DiscreteMeasure(tuple((float(l), float(w)) for l, w in rep.get("atoms", [])))
    side = rep.get("side", "right")
    if side == "right":
        f = make_soc_right(rep["a"], rep.get("constant", 0.0), mu, name=spec.get("name"))
    elif side == "left":
        f = make_soc_left(rep["b"], rep.get("constant", 0.0), mu, name=spec.get("name"))
    else:
        raise ValueError(f"unknown side {side!r}")
    if "domain" in spec and Interval.from_json(spec["domain"]) != f.domain:
        raise ValueError(f"declared domain {spec['domain']} does not match representation domain {f.domain}")
    return f


def to_spec(f: ScalarFunction) -> dict | str:
    if f.name in _CATALOG and _CATALOG[f.name] is f:
        return f.name
    out = {"name": f.name, "domain": f.domain.to_json()}
    if f.soc_rep is not None:
        out["soc_rep"] = f.soc_rep.to_json()
    return out


# ---------------------------------------------------------------------------
# empirical SOC witness


def soc_witness_test(f: ScalarFunction, dims=(1, 2, 3), trials: int = 200, seed: int = 0,
                     eps_rel: float = la.EPS_REL, cap: float = DEFAULT_CAP, max_redraws: int = 100):
    """Necessary-condition battery: ``f(A nabla B) <= f(A) ! f(B)`` on random pairs.

    Returns a :class:`socv.theorems.CheckOutcome` whose single margin is the
    worst ``min_eig(f(A)!f(B) - f(A nabla B))`` seen.
    """
    from .harness import gen_hermitian_in_interval
    from .means_products import harmonic, nabla
    from .theorems import CheckOutcome

    if trials < 1:
        raise ValueError("trials must be >= 1")
    if np.any(f(f.domain.grid(1000, cap)) <= 0):
        raise ValueError(f"{f.name} is not positive on its domain")
    rng = np.random.default_rng(seed)
    worst, worst_tol, worst_fp, failed = math.inf, eps_rel, "", False
    dims = list(dims)
    for i in range(trials):
        dim = dims[i % len(dims)]
        for _ in range(max_redraws):
            A = gen_hermitian_in_interval(f.domain, dim, rng, cap=cap)
            B = gen_hermitian_in_interval(f.domain, dim, rng, cap=cap)
            try:
                fA, fB, fM = f.matrix(A), f.matrix(B), f.matrix(nabla(A, B, 0.5))
                break
            except la.DomainError:
                continue
        else:
            raise RuntimeError("redraw budget exhausted while sampling witness pairs")
        margin = la.min_eig(harmonic(fA, fB, 0.5) - fM)
        tol = la.tolerance(eps_rel, la.op_norm(fA), la.op_norm(fB), la.op_norm(fM))
        failed |= margin < -tol
        if margin < worst:
            worst, worst_tol, worst_fp = margin, tol, la.fingerprint(A, B)
    return CheckOutcome(
        checker_id="soc.witness",
        margins={"harmonic_gap": worst},
        verdict="FAIL" if failed else "PASS",
        tolerance_used=worst_tol,
        instance_fingerprint=worst_fp,
        info={"function": f.name, "trials": trials},
    )
