"""Kwong (anti-Loewner) matrices and the Kwong/SOC transforms."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg_core as la
from .functions import POSITIVE, ScalarFunction


@dataclass(frozen=True)
class PointSet:
    """Strictly positive, pairwise distinct reals."""

    points: tuple[float, ...]

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points)
        if not pts:
            raise ValueError("empty point set")
        if min(pts) <= 0:
            raise ValueError("points must be strictly positive")
        s = sorted(pts)
        for x, y in zip(s, s[1:]):
            if y - x <= 1e-10 * y:
                raise ValueError(f"points {x} and {y} are not distinct")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    def as_array(self) -> np.ndarray:
        return np.array(self.points)


def kwong_matrix(f: ScalarFunction, pts: PointSet | tuple | list) -> np.ndarray:
    """``[(f(t_i) + f(t_j)) / (t_i + t_j)]_{ij}``."""
    if not isinstance(pts, PointSet):
        pts = PointSet(tuple(pts))
    t = pts.as_array()
    domain = getattr(f, "domain", None)
    if domain is not None:
        bad = [x for x in t if not domain.contains(x)]
        if bad:
            raise la.DomainError(f"points {bad} outside domain {domain}", bad)
    ft = np.asarray(f(t), dtype=np.float64)
    return (ft[:, None] + ft[None, :]) / (t[:, None] + t[None, :])


def sample_point_set(rng: np.random.Generator, n: int, lo: float = 1e-2, hi: float = 1e2) -> PointSet:
    """``n`` distinct points log-uniform in ``[lo, hi]``."""
    while True:
        t = np.sort(10.0 ** rng.uniform(math.log10(lo), math.log10(hi), size=n))
        if n == 1 or np.all(np.diff(t) > 1e-10 * t[1:]):
            return PointSet(tuple(t.tolist()))


def kwong_trials(f: ScalarFunction, n_max: int = 8, trials: int = 500, seed: int = 0,
                 eps_rel: float = la.EPS_REL, point_range=(1e-2, 1e2)):
    """Per-trial ``(margin, tolerance, points)`` for random point sets.

    Point-set sizes cycle through ``2..n_max``; each trial uses its own
    stream derived from ``(seed, trial)`` so two functions evaluated with
    the same seed see identical point sets.
    """
    if trials < 1 or n_max < 2:
        raise ValueError("need trials >= 1 and n_max >= 2")
    out = []
    for i in range(trials):
        rng = np.random.default_rng([seed, i])
        n = 2 + i % (n_max - 1)
        pts = sample_point_set(rng, n, *point_range)
        K = kwong_matrix(f, pts)
        margin = la.min_eig(K)
        out.append((margin, la.tolerance(eps_rel, la.op_norm(K)), pts))
    return out


def kwong_empirical(f: ScalarFunction, n_max: int = 8, trials: int = 500, seed: int = 0,
                    eps_rel: float = la.EPS_REL, point_range=(1e-2, 1e2)):
    """PASS iff every sampled Kwong matrix is numerically PSD."""
    from .theorems import CheckOutcome

    results = kwong_trials(f, n_max, trials, seed, eps_rel, point_range)
    worst = min(range(len(results)), key=lambda i: results[i][0] / results[i][1])
    margin, tol, pts = results[worst]
    failed = sum(m < -t for m, t, _ in results)
    return CheckOutcome(
        checker_id="kwong.empirical",
        margins={"kwong_min_eig": margin},
        verdict="FAIL" if failed else "PASS",
        tolerance_used=tol,
        instance_fingerprint=la.fingerprint(list(pts.points)),
        info={"function": f.name, "trials": trials, "violations": failed, "worst_points": list(pts.points)},
    )


def reciprocal(f: ScalarFunction) -> ScalarFunction:
    """``1/f`` on the same domain (Kwong iff ``f`` is, for positive ``f``)."""
    return ScalarFunction(f"1/{f.name}", f.domain, lambda t: 1.0 / f(t),
                          frozenset({"kwong"}) if f.has("kwong") else frozenset())


def prop14_transforms(g: ScalarFunction, p: float) -> tuple[ScalarFunction, ScalarFunction]:
    """Return ``g(t^p)`` and ``g(t^p) / t^p`` on ``(0, inf)``.

    The first is flagged Kwong when ``g`` is SOC on ``(0, inf)`` (valid for
    ``-1 <= p <= 1``); the second is flagged SOC when ``g`` is Kwong and
    ``0 <= p <= 1/2``.
    """
    p = float(p)
    if not -1.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [-1, 1], got {p}")
    if g.domain != POSITIVE:
        raise ValueError(f"{g.name} must be defined on (0, inf), got {g.domain}")

    def g_tp(t):
        return g(np.power(t, p))

    def g_tp_over_tp(t):
        tp = np.power(t, p)
        return g(tp) / tp

    f1_flags = {"kwong"} if g.has("soc") else set()
    f2_flags = {"soc", "operator_convex"} if g.has("kwong") and 0.0 <= p <= 0.5 else set()
    return (
        ScalarFunction(f"{g.name}(t^{p:g})", POSITIVE, g_tp, frozenset(f1_flags),
                       constant=g.constant or p == 0.0),
        ScalarFunction(f"{g.name}(t^{p:g})/t^{p:g}", POSITIVE, g_tp_over_tp, frozenset(f2_flags)),
    )
