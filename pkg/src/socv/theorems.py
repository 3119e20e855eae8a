"""Executable inequality checkers.

Each checker evaluates one operator inequality on one concrete instance and
returns a :class:`CheckOutcome` holding *margins*: minimum eigenvalues of gap
matrices (or scalar gaps).  Verdict rules:

* "all gaps" checkers pass iff every margin is ``>= -tolerance_used``;
* implication checkers pass unless the hypothesis margin is ``>= -tol`` and
  the conclusion margin is ``< -tol`` (a failed hypothesis passes vacuously);
* equivalence checkers compare signs and report SKIP when a margin falls in
  the exclusion band ``|margin| <= 10 * tol``.

``tolerance_used`` is ``eps_rel * max(1, scale)`` where ``scale`` is the
largest spectral norm among the terms combined into the gap matrices.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import linalg_core as la
from .functions import ScalarFunction
from .means_products import harmonic, nabla, symmetrized_product

PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"
BAND_FACTOR = 10.0


class PreconditionError(ValueError):
    """Instance does not satisfy a checker's stated hypothesis."""


@dataclass
class CheckOutcome:
    checker_id: str
    margins: dict[str, float]
    verdict: str
    tolerance_used: float
    instance_fingerprint: str = ""
    reason: str = ""
    info: dict = field(default_factory=dict)
    instance: dict | None = None

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def worst_margin(self) -> float:
        return min(self.margins.values()) if self.margins else math.inf

    def to_dict(self, with_instance: bool = False) -> dict:
        d = asdict(self)
        d["margins"] = {k: _json_float(v) for k, v in self.margins.items()}
        if not with_instance:
            d.pop("instance")
        return d


def _json_float(x):
    x = float(x)
    if math.isfinite(x):
        return x
    return "inf" if x > 0 else ("-inf" if x < 0 else "nan")


def _norms(*Ms) -> float:
    return max((la.op_norm(M) if np.ndim(M) == 2 else abs(float(M)) for M in Ms), default=0.0)


def _all_gaps(cid, margins, tol, fp, **info) -> CheckOutcome:
    ok = all(v >= -tol for v in margins.values())
    return CheckOutcome(cid, margins, PASS if ok else FAIL, tol, fp, info=info)


def _skip(cid, reason, fp="", eps_rel=la.EPS_REL) -> CheckOutcome:
    return CheckOutcome(cid, {}, SKIP, eps_rel, fp, reason=reason)


def _fn_matrices(g: ScalarFunction, *Ms):
    return [la.apply_function(g, M) for M in Ms]


def in_band(margin: float, tol: float) -> bool:
    return abs(margin) <= BAND_FACTOR * tol


# ---------------------------------------------------------------------------
# subadditivity / superadditivity


def check_subadditivity(f: ScalarFunction, A, B, eps_rel: float = la.EPS_REL) -> CheckOutcome:
    """``f(A + B) <= f(A) + f(B)``.

    Unconditional for SOC ``f`` on (0, inf); for other (operator monotone)
    ``f`` it is checked as the implication ``AB + BA >= 0  =>  subadditive``.
    """
    cid = "prop25.subadd"
    fp = la.fingerprint(A, B, f.name)
    try:
        fA, fB, fS = _fn_matrices(f, A, B, A + B)
    except la.DomainError as exc:
        return _skip(cid, f"domain: {exc}", fp, eps_rel)
    gap = la.min_eig(fA + fB - fS)
    if f.has("soc"):
        tol = la.tolerance(eps_rel, _norms(fA, fB, fS))
        return _all_gaps(cid, {"gap": gap}, tol, fp)
    S = symmetrized_product(A, B)
    sym = la.min_eig(S)
    tol = la.tolerance(eps_rel, _norms(fA, fB, fS, S))
    bad = sym >= -tol and gap < -tol
    return CheckOutcome(cid, {"symprod": sym, "gap": gap}, FAIL if bad else PASS, tol, fp,
                        info={"hypothesis": bool(sym >= -tol)})


def check_superadditivity(g: ScalarFunction, A, B, eps_rel: float = la.EPS_REL) -> CheckOutcome:
    """``AB + BA >= 0  =>  g(A + B) >= g(A) + g(B)`` for operator convex ``g`` with ``g(0) <= 0``."""
    cid = "uchi.superadd"
    fp = la.fingerprint(A, B, g.name)
    if la.min_eig(A) < 0 or la.min_eig(B) < 0:
        raise PreconditionError("A and B must be positive semidefinite")
    # PSD inputs may be singular; a function on (0, inf) is used on [0, inf)
    # whenever it extends finitely to 0
    h = g
    if g.domain.lo == 0:
        def h(t):
            with np.errstate(divide="ignore", invalid="ignore"):
                return g(t)
        h.name = g.name
    try:
        gA, gB, gS = _fn_matrices(h, A, B, A + B)
    except la.DomainError as exc:
        return _skip(cid, f"domain: {exc}", fp, eps_rel)
    S = symmetrized_product(A, B)
    sym = la.min_eig(S)
    sup = la.min_eig(gS - gA - gB)
    tol = la.tolerance(eps_rel, _norms(gA, gB, gS, S))
    bad = sym >= -tol and sup < -tol
    return CheckOutcome(cid, {"symprod": sym, "super_gap": sup}, FAIL if bad else PASS, tol, fp,
                        info={"hypothesis": bool(sym >= -tol)})


def resolvent_subadd_margin(A, B, lam: float) -> float:
    """``min_eig((lam - A)^-1 + (lam - B)^-1 - (lam - A - B)^-1)``."""
    I = np.eye(A.shape[0])
    return la.min_eig(la.inverse(lam * I - A) + la.inverse(lam * I - B) - la.inverse(lam * I - A - B))


def default_lambda_grid(size: int = 7) -> list[float]:
    """``0`` plus ``size`` log-spaced points in ``[1e-3, 1e3]``."""
    if size < 1:
        return [0.0]
    return [0.0] + np.logspace(-3, 3, size).tolist()


def check_thm5new(g: ScalarFunction, A, B, lambda_grid: Iterable[float] | None = None,
                  eps_rel: float = la.EPS_REL) -> CheckOutcome:
    """Subadditivity of a left-half-line SOC ``g`` on negative definite ``A, B``.

    Hypothesis: ``A (l - B)^-1 A + B (l - A)^-1 B >= 0`` for every grid
    point ``l >= 0``.  Also records the expanded form
    ``A (l-B)^-1 A + B (l-A)^-1 B + l - 2(A+B)`` and, when subadditivity
    holds, the limit inequality ``A B^-1 A + B A^-1 B <= 0``.
    """
    cid = "thm5new"
    grid = [float(x) for x in (default_lambda_grid() if lambda_grid is None else lambda_grid)]
    if not grid or min(grid) < 0:
        raise PreconditionError("lambda grid must be non-empty and non-negative")
    if la.spectrum_stats(A).max_eig >= 0 or la.spectrum_stats(B).max_eig >= 0:
        raise PreconditionError("A and B must be negative definite")
    fp = la.fingerprint(A, B, g.name, grid)
    try:
        gA, gB, gS = _fn_matrices(g, A, B, A + B)
    except la.DomainError as exc:
        return _skip(cid, f"domain: {exc}", fp, eps_rel)
    I = np.eye(A.shape[0])
    cond, eq2, scale = math.inf, math.inf, _norms(gA, gB, gS)
    for lam in grid:
        T1 = la.symmetrize(A @ la.inverse(lam * I - B) @ A)
        T2 = la.symmetrize(B @ la.inverse(lam * I - A) @ B)
        cond = min(cond, la.min_eig(T1 + T2))
        eq2 = min(eq2, la.min_eig(T1 + T2 + lam * I - 2 * (A + B)))
        scale = max(scale, _norms(T1, T2, lam * I - 2 * (A + B)))
    subadd = la.min_eig(gA + gB - gS)
    margins = {"condition": cond, "subadd": subadd, "eq2": eq2}
    tol = la.tolerance(eps_rel, scale)
    verdict = PASS
    if cond >= -tol and subadd < -tol:
        verdict = FAIL
    if subadd >= -tol:
        L = la.symmetrize(A @ la.inverse(B) @ A) + la.symmetrize(B @ la.inverse(A) @ B)
        margins["neg_limit"] = la.min_eig(-L)
        tol = la.tolerance(eps_rel, scale, _norms(L))
        if margins["neg_limit"] < -tol:
            verdict = FAIL
    return CheckOutcome(cid, margins, verdict, tol, fp, info={"lambda_grid": grid})


def check_thm16(g: ScalarFunction, A, B, eps_rel: float = la.EPS_REL) -> CheckOutcome:
    """``AB + BA >= 0  =>  f(A + B) <= (f(A) + f(B)) / 4`` with ``f = 1/g``.

    Margins: ``symprod``; ``quarter_gap``; ``chain_first`` (the step
    ``g(A+B)^-1 <= (g(A)+g(B))^-1``, conditional); ``chain_mid``
    (``(g(A)+g(B))^-1 <= (g(A)^-1 + g(B)^-1)/4``, unconditional).
    """
    cid = "thm16.quarter"
    fp = la.fingerprint(A, B, g.name)
    try:
        gA, gB, gS = _fn_matrices(g, A, B, A + B)
    except la.DomainError as exc:
        return _skip(cid, f"domain: {exc}", fp, eps_rel)
    for M in (gA, gB, gS):
        if la.min_eig(M) <= 0:
            raise PreconditionError(f"{g.name} is not positive on the spectra")
    fA, fB, fS = la.inverse(gA), la.inverse(gB), la.inverse(gS)
    S = symmetrized_product(A, B)
    inv_sum = la.inverse(gA + gB)
    margins = {
        "symprod": la.min_eig(S),
        "quarter_gap": la.min_eig(0.25 * (fA + fB) - fS),
        "chain_first": la.min_eig(inv_sum - fS),
        "chain_mid": la.min_eig(0.25 * (fA + fB) - inv_sum),
    }
    tol = la.tolerance(eps_rel, _norms(fA, fB, fS, S, inv_sum))
    hyp = margins["symprod"] >= -tol
    bad = margins["chain_mid"] < -tol or (hyp and (margins["quarter_gap"] < -tol or margins["chain_first"] < -tol))
    return CheckOutcome(cid, margins, FAIL if bad else PASS, tol, fp,
                        info={"hypothesis": bool(hyp)})


# ---------------------------------------------------------------------------
# weighted means


def check_bu_gap(g: ScalarFunction, A, B, alpha: float, eps_rel: float = la.EPS_REL) -> CheckOutcome:
    """``g(A) nabla g(B) - g(A nabla B) >= a(1-a)(gA - gB)(a gA + (1-a) gB)^-1 (gA - gB)``."""
    cid = "bu.gap"
    fp = la.fingerprint(A, B, g.name, alpha)
    try:
        gA, gB, gM = _fn_matrices(g, A, B, nabla(A, B, alpha))
    except la.DomainError as exc:
        return _skip(cid, f"domain: {exc}", fp, eps_rel)
    X = alpha * gA + (1 - alpha) * gB
    if la.min_eig(X) <= 0:
        raise PreconditionError("alpha g(A) + (1 - alpha) g(B) must be positive definite")
    D = gA - gB
    lhs = nabla(gA, gB, alpha) - gM
    rhs = alpha * (1 - alpha) * la.symmetrize(D @ la.inverse(X) @ D)
    tol = la.tolerance(eps_rel, _norms(gA, gB, gM, rhs))
    return _all_gaps(cid, {"gap": la.min_eig(lhs - rhs)}, tol, fp, alpha=alpha)


def check_thm9ii(g: ScalarFunction, A, B, alpha: float, eps_rel: float = la.EPS_REL) -> CheckOutcome:
    """``g(A nabla_alpha B) <= g(A) !_alpha g(B)``."""
    cid = "thm9.harmonic"
    fp = la.fingerprint(A, B, g.name, alpha)
    try:
        gA, gB, gM = _fn_matrices(g, A, B, nabla(A, B, alpha))
    except la.DomainError as exc:
        return _skip(cid, f"domain: {exc}", fp, eps_rel)
    if la.min_eig(gA) <= 0 or la.min_eig(gB) <= 0:
        raise PreconditionError(f"{g.name} is not positive on the spectra")
    H = harmonic(gA, gB, alpha, eps_rel=0.0)
    tol = la.tolerance(eps_rel, _norms(gA, gB, gM))
    return _all_gaps(cid, {"gap": la.min_eig(H - gM)}, tol, fp, alpha=alpha)


def lemma12_block(A, B, C, alpha: float) -> np.ndarray:
    """``[[aA - bC, bC], [bC, (1-a)B - bC]]`` with ``b = a(1-a)``."""
    beta = alpha * (1 - alpha)
    return la.block2x2(alpha * A - beta * C, beta * C, beta * C, (1 - alpha) * B - beta * C)


def check_lemma12(A, B, C, alpha: float, eps_rel: float = la.EPS_REL) -> CheckOutcome:
    """Equivalence ``C <= A !_alpha B``  iff  the 2x2 block matrix is PSD."""
    cid = "lemma12.block"
    fp = la.fingerprint(A, B, C, alpha)
    M = lemma12_block(A, B, C, alpha)
    H = harmonic(A, B, alpha)
    margins = {"block": la.min_eig(M), "mean": la.min_eig(H - C)}
    tol = la.tolerance(eps_rel, _norms(A, B, C, H))
    return _equivalence(cid, margins, "block", "mean", tol, fp, alpha=alpha)


def _equivalence(cid, margins, k1, k2, tol, fp, **info) -> CheckOutcome:
    m1, m2 = margins[k1], margins[k2]
    if in_band(m1, tol) or in_band(m2, tol):
        return CheckOutcome(cid, margins, SKIP, tol, fp, reason="exclusion band", info=info)
    return CheckOutcome(cid, margins, PASS if (m1 > 0) == (m2 > 0) else FAIL, tol, fp, info=info)


def check_cor13(g: ScalarFunction, A, B, alpha: float, eps_rel: float = la.EPS_REL) -> CheckOutcome:
    """Block form of ``g(A nabla B) <= g(A) ! g(B)``, cross-checked against the mean form."""
    cid = "cor13.block"
    fp = la.fingerprint(A, B, g.name, alpha)
    try:
        gA, gB, G = _fn_matrices(g, A, B, nabla(A, B, alpha))
    except la.DomainError as exc:
        return _skip(cid, f"domain: {exc}", fp, eps_rel)
    beta = alpha * (1 - alpha)
    lhs = la.block2x2(alpha * gA, 2 * beta * G, 2 * beta * G, (1 - alpha) * gB)
    rhs = beta * la.block2x2(G, G, G, G)
    H = harmonic(gA, gB, alpha, eps_rel=0.0)
    margins = {"gap": la.min_eig(lhs - rhs), "harmonic_gap": la.min_eig(H - G)}
    tol = la.tolerance(eps_rel, _norms(gA, gB, G))
    verdict = PASS if margins["gap"] >= -tol else FAIL
    outside = not (in_band(margins["gap"], tol) or in_band(margins["harmonic_gap"], tol))
    if outside and (margins["gap"] > 0) != (margins["harmonic_gap"] > 0):
        verdict = FAIL
    return CheckOutcome(cid, margins, verdict, tol, fp, info={"alpha": alpha, "cross_checked": outside})


# ---------------------------------------------------------------------------
# lower bounds for dominated pairs


def _dominance(A, B, m: float | None, eps_rel: float) -> float:
    D = A - B
    gap = la.min_eig(D)
    if m is None:
        # ||(A - B)^-1||^-1
        if gap <= 0:
            raise PreconditionError("A - B is not positive definite")
        m = 1.0 / la.op_norm(la.inverse(D))
    if m <= 0:
        raise PreconditionError("m must be positive")
    if m > gap + la.tolerance(eps_rel, _norms(A, B)):
        raise PreconditionError(f"m = {m} exceeds min_eig(A - B) = {gap}")
    return float(m)


def _chain_outcome(cid, g, first, second, third, tol, fp, m, strict_terms) -> CheckOutcome:
    margins = {"first": first, "second": second, "third": third}
    ok = all(v >= -tol for v in margins.values())
    strict = not g.constant
    if strict and not third > tol:
        ok = False
    return CheckOutcome(cid, margins, PASS if ok else FAIL, tol, fp,
                        info={"m": m, "strict": strict, **strict_terms})


def check_lower_bound_right(g: ScalarFunction, A, B, m: float | None = None,
                            eps_rel: float = la.EPS_REL) -> CheckOutcome:
    """For SOC ``g`` on ``(a, inf)`` and ``A - B >= m``:

    ``g(B) - g(A) >= g(sB) - g(sB + m) >= g(sA - m) - g(sA) > 0``,
    ``sA, sB`` the largest eigenvalues.  ``m=None`` uses ``||(A - B)^-1||^-1``.
    """
    cid = "thm20.right"
    m = _dominance(A, B, m, eps_rel)
    fp = la.fingerprint(A, B, g.name, m)
    gA, gB = _fn_matrices(g, A, B)
    sA, sB = la.spectrum_stats(A).max_eig, la.spectrum_stats(B).max_eig
    lower_B = g.at(sB) - g.at(sB + m)
    lower_A = g.at(sA - m) - g.at(sA)
    I = np.eye(A.shape[0])
    first = la.min_eig(gB - gA - lower_B * I)
    tol = la.tolerance(eps_rel, _norms(gA, gB), g.at(sB), g.at(sA - m))
    return _chain_outcome(cid, g, first, lower_B - lower_A, lower_A, tol, fp, m,
                          {"max_eig_A": sA, "max_eig_B": sB, "bound_B": lower_B, "bound_A": lower_A})


def check_lower_bound_left(g: ScalarFunction, A, B, m: float | None = None,
                           eps_rel: float = la.EPS_REL) -> CheckOutcome:
    """For SOC ``g`` on ``(-inf, b)`` and ``A - B >= m``:

    ``g(A) - g(B) >= g(tA) - g(tA - m) >= g(tB + m) - g(tB) > 0``,
    ``tA, tB`` the smallest eigenvalues.
    """
    cid = "thm21.left"
    m = _dominance(A, B, m, eps_rel)
    fp = la.fingerprint(A, B, g.name, m)
    gA, gB = _fn_matrices(g, A, B)
    tA, tB = la.spectrum_stats(A).min_eig, la.spectrum_stats(B).min_eig
    lower_A = g.at(tA) - g.at(tA - m)
    lower_B = g.at(tB + m) - g.at(tB)
    I = np.eye(A.shape[0])
    first = la.min_eig(gA - gB - lower_A * I)
    tol = la.tolerance(eps_rel, _norms(gA, gB), g.at(tA), g.at(tB + m))
    return _chain_outcome(cid, g, first, lower_A - lower_B, lower_B, tol, fp, m,
                          {"min_eig_A": tA, "min_eig_B": tB, "bound_A": lower_A, "bound_B": lower_B})


def lemma15_bounds(normA: float, normB: float, m: float) -> tuple[float, float]:
    """``(m / (|B| (|B| + m)),  m / ((|A| - m) |A|))``."""
    return m / (normB * (normB + m)), m / ((normA - m) * normA)


def check_lemma15(A, B, m: float | None = None, eps_rel: float = la.EPS_REL) -> CheckOutcome:
    """``B^-1 - A^-1 >= m/(|B|(|B|+m)) >= m/((|A|-m)|A|)`` for ``A - B >= m``, ``A, B > 0``."""
    cid = "lemma15.resolvent"
    if la.min_eig(A) <= 0 or la.min_eig(B) <= 0:
        raise PreconditionError("A and B must be positive definite")
    m = _dominance(A, B, m, eps_rel)
    nA, nB = la.op_norm(A), la.op_norm(B)
    if nA <= m:
        raise PreconditionError("||A|| must exceed m")
    fp = la.fingerprint(A, B, m)
    bB, bA = lemma15_bounds(nA, nB, m)
    Binv, Ainv = la.inverse(B), la.inverse(A)
    G = Binv - Ainv
    I = np.eye(A.shape[0])
    margins = {
        "b_bound": la.min_eig(G - bB * I),
        "a_bound": la.min_eig(G - bA * I),
        "chain": bB - bA,
    }
    tol = la.tolerance(eps_rel, _norms(Binv, Ainv))
    return _all_gaps(cid, margins, tol, fp, m=m, norm_A=nA, norm_B=nB)


# ---------------------------------------------------------------------------
# symmetrized-product consequences


def check_cor7_powers(g: ScalarFunction, p: float, q: float, A, B, eps_rel: float = la.EPS_REL) -> CheckOutcome:
    """``AB + BA >= 0  =>  g(A^p) B + B g(A^p) >= 0`` and ``A^-p B^-q + B^-q A^-p >= 0``."""
    cid = "cor7.kwongpower"
    if not (-1 <= p <= 1 and -1 <= q <= 1):
        raise PreconditionError("p and q must lie in [-1, 1]")
    fp = la.fingerprint(A, B, g.name, p, q)
    S = symmetrized_product(A, B)
    sym = la.min_eig(S)
    if sym < -la.tolerance(eps_rel, _norms(S)):
        return CheckOutcome(cid, {"symprod": sym}, SKIP, la.tolerance(eps_rel, _norms(S)), fp,
                            reason="hypothesis AB + BA >= 0 fails")
    Ap = la.mpow(A, p)
    try:
        gAp = la.apply_function(g, Ap)
    except la.DomainError as exc:
        return _skip(cid, f"domain: {exc}", fp, eps_rel)
    Amp, Bmq = la.mpow(A, -p), la.mpow(B, -q)
    nB = la.op_norm(B)
    margins = {
        "cor7": la.min_eig(symmetrized_product(gAp, B)),
        "powers": la.min_eig(symmetrized_product(Amp, Bmq)),
    }
    tol = la.tolerance(eps_rel, la.op_norm(gAp) * nB, la.op_norm(Amp) * la.op_norm(Bmq))
    return _all_gaps(cid, margins, tol, fp, p=p, q=q, symprod=sym)


def lowner_heinz_pair(A, B, p: float):
    """``(A^p, B^p, ||(A^p - B^p)^-1||^-1)`` for ``A > B > 0`` and ``0 < p <= 1``."""
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    Ap, Bp = la.mpow(A, p), la.mpow(B, p)
    m = 1.0 / la.op_norm(la.inverse(Ap - Bp))
    return Ap, Bp, m


CHECKERS: dict[str, Callable[..., CheckOutcome]] = {
    "prop25.subadd": check_subadditivity,
    "thm5new": check_thm5new,
    "thm16.quarter": check_thm16,
    "bu.gap": check_bu_gap,
    "thm9.harmonic": check_thm9ii,
    "lemma12.block": check_lemma12,
    "cor13.block": check_cor13,
    "thm20.right": check_lower_bound_right,
    "thm21.left": check_lower_bound_left,
    "lemma15.resolvent": check_lemma15,
    "cor7.kwongpower": check_cor7_powers,
    "uchi.superadd": check_superadditivity,
}
