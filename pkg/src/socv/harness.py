"""Random instance generators, suite runner and counterexample search.

Every trial draws from its own Philox stream keyed by
``SeedSequence([master_seed, trial_index])``, so results do not depend on
execution order or on the number of worker threads.
"""
from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np

from . import __version__
from . import functions as fn
from . import linalg_core as la
from . import theorems as th
from .functions import NEGATIVE, POSITIVE, Interval, ScalarFunction
from .means_products import harmonic, symmetrized_product


class GenerationError(RuntimeError):
    """A generator exhausted its redraw budget."""


# ---------------------------------------------------------------------------
# generators


def trial_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence([int(master_seed) & 0xFFFFFFFFFFFFFFFF, int(trial_index)])
    return np.random.Generator(np.random.Philox(ss))


def gen_hermitian_in_interval(J: Interval, dim: int, rng: np.random.Generator,
                              cap: float = fn.DEFAULT_CAP, complex_entries: bool = False) -> np.ndarray:
    """Random Hermitian matrix with eigenvalues uniform in ``[lo + d, hi - d]``.

    Infinite endpoints are capped (see :meth:`Interval.sampling_range`); the
    eigenbasis is Haar distributed.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    lo, hi = J.sampling_range(cap)
    w = rng.uniform(lo, hi, size=dim)
    return la.with_spectrum(w, la.random_unitary(rng, dim, complex_entries))


def gen_positive(rng, dim, cap=fn.DEFAULT_CAP, complex_entries=False) -> np.ndarray:
    return gen_hermitian_in_interval(POSITIVE, dim, rng, cap, complex_entries)


def gen_dominated_pair(J: Interval, dim: int, m: float, rng: np.random.Generator,
                       cap: float = fn.DEFAULT_CAP, slack: float = 1.0,
                       complex_entries: bool = False, max_attempts: int = 100):
    """``(A, B)`` with spectra in ``J`` and ``A - B >= m``.

    ``B`` is drawn in the sampling range shrunk by ``m + slack`` at the top;
    ``A = B + m I + P`` with ``P >= 0`` random of norm at most ``slack``.
    """
    if m <= 0:
        raise ValueError("m must be positive")
    lo, hi = J.sampling_range(cap)
    if hi - lo <= m:
        raise ValueError(f"interval {J} too narrow for m = {m}")
    top = max(lo + 1e-12, hi - m - slack)
    for _ in range(max_attempts):
        B = la.with_spectrum(rng.uniform(lo, top, size=dim), la.random_unitary(rng, dim, complex_entries))
        if slack > 0:
            P = la.with_spectrum(rng.uniform(0, slack, size=dim), la.random_unitary(rng, dim, complex_entries))
        else:
            P = np.zeros_like(B)
        A = B + m * np.eye(dim) + P
        sA = la.spectrum_stats(A)
        if sA.max_eig <= hi and sA.min_eig >= lo:
            return A, B
    raise GenerationError(f"no dominated pair in {J} after {max_attempts} attempts")


def dominance_from_inverse(A, B) -> float:
    """``||(A - B)^-1||^-1``, which equals ``min_eig(A - B)`` when ``A > B``."""
    return 1.0 / la.op_norm(la.inverse(A - B))


class SymmetrizedPair(NamedTuple):
    A: np.ndarray
    B: np.ndarray
    attempts: int


def accepts_symmetrized(A, B) -> bool:
    """Acceptance predicate of the constrained generator: ``min_eig(AB + BA) >= 0``."""
    return la.min_eig(symmetrized_product(A, B)) >= 0


def _cayley(rng, dim, theta, complex_entries):
    S = rng.standard_normal((dim, dim))
    if complex_entries:
        S = S + 1j * rng.standard_normal((dim, dim))
    S = theta * (S - S.conj().T) / 2
    I = np.eye(dim)
    return np.linalg.solve(I - S, I + S)


def gen_pair_psd_symmetrized(dim: int, rng: np.random.Generator, strategy: str = "rejection",
                             cap: float = fn.DEFAULT_CAP, complex_entries: bool = False,
                             budget: int = 1000) -> SymmetrizedPair:
    """Positive pair with ``AB + BA >= 0``.

    Strategies: ``commuting`` (shared eigenbasis, always valid),
    ``rejection`` (independent draws, accepted by :func:`accepts_symmetrized`),
    ``perturbed`` (rejection over pairs whose eigenbases differ by a random
    Cayley rotation of log-uniform size in [1e-3, 1]; keeps acceptance high
    at larger ``dim`` without forcing commutation).
    """
    lo, hi = POSITIVE.sampling_range(cap)
    if strategy == "commuting":
        U = la.random_unitary(rng, dim, complex_entries)
        A = la.with_spectrum(rng.uniform(lo, hi, size=dim), U)
        B = la.with_spectrum(rng.uniform(lo, hi, size=dim), U)
        return SymmetrizedPair(A, B, 1)
    for attempt in range(1, budget + 1):
        if strategy == "rejection":
            A = gen_positive(rng, dim, cap, complex_entries)
            B = gen_positive(rng, dim, cap, complex_entries)
        elif strategy == "perturbed":
            U = la.random_unitary(rng, dim, complex_entries)
            V = U @ _cayley(rng, dim, 10.0 ** rng.uniform(-3, 0), complex_entries)
            A = la.with_spectrum(rng.uniform(lo, hi, size=dim), U)
            B = la.with_spectrum(rng.uniform(lo, hi, size=dim), V)
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        if accepts_symmetrized(A, B):
            return SymmetrizedPair(A, B, attempt)
    raise GenerationError(f"{strategy} strategy: 0 of {budget} draws accepted at dim {dim} (acceptance rate 0)")


def acceptance_rate(dim: int, strategy: str, draws: int, seed: int = 0, cap: float = fn.DEFAULT_CAP) -> float:
    """Fraction of single proposals accepted by the constrained generator."""
    rng = np.random.default_rng(seed)
    hits = 0
    for _ in range(draws):
        try:
            hits += gen_pair_psd_symmetrized(dim, rng, strategy, cap, budget=1).attempts == 1
        except GenerationError:
            pass
    return hits / draws


# ---------------------------------------------------------------------------
# configuration and reports


@dataclass(frozen=True)
class TrialConfig:
    checker_id: str
    dims: tuple[int, ...] = (1, 2, 3)
    trials: int = 100
    seed: int = 0
    tol: float = la.EPS_REL
    alpha: float | str = "sweep"
    function_spec: str | dict | None = None
    lambda_grid_size: int = 7
    complex_entries: bool = False
    spectrum_cap: float = fn.DEFAULT_CAP
    m: float | None = None
    pairs: str | None = None
    p: float | None = None
    q: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.dims or min(self.dims) < 1:
            raise ValueError("dims must be non-empty and >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if isinstance(self.alpha, str):
            if self.alpha != "sweep":
                raise ValueError("alpha must be a number or 'sweep'")
        elif not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class Report:
    config: TrialConfig
    outcomes: list[th.CheckOutcome]
    wall_time: float = 0.0
    tool_version: str = __version__
    extra: dict = field(default_factory=dict)

    @property
    def counts(self) -> dict[str, int]:
        c = {"pass": 0, "fail": 0, "skip": 0}
        for o in self.outcomes:
            c[o.verdict.lower()] += 1
        return c

    @property
    def n_pass(self) -> int:
        return self.counts["pass"]

    @property
    def n_fail(self) -> int:
        return self.counts["fail"]

    @property
    def n_skip(self) -> int:
        return self.counts["skip"]

    def worst_margins(self) -> dict[str, float]:
        out: dict[str, float] = {}
        for o in self.outcomes:
            for k, v in o.margins.items():
                out[k] = min(out.get(k, math.inf), v)
        return out

    def worst(self) -> th.CheckOutcome | None:
        scored = [o for o in self.outcomes if o.margins]
        if not scored:
            return None
        return min(scored, key=_severity)

    def to_json(self) -> dict:
        worst = self.worst()
        return {
            "version": self.tool_version,
            "master_seed": self.config.seed,
            "config": self.config.to_json(),
            "summary": {
                **self.counts,
                "worst_margins": {k: th._json_float(v) for k, v in self.worst_margins().items()},
                "wall_time": self.wall_time,
                **self.extra,
            },
            "trials": [o.to_dict() for o in self.outcomes],
            "worst_instance": worst.to_dict(with_instance=True) if worst is not None else None,
        }


def _severity(o: th.CheckOutcome):
    rel = o.worst_margin() / o.tolerance_used if o.tolerance_used > 0 else o.worst_margin()
    return (o.verdict != th.FAIL, rel)


def dumps(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=False)


# ---------------------------------------------------------------------------
# trial recipes


DEFAULT_FUNCTION = {
    "prop25.subadd": "inv",
    "thm5new": "neg_inv",
    "thm16.quarter": "id",
    "bu.gap": "inv",
    "thm9.harmonic": "inv",
    "lemma12.block": None,
    "cor13.block": "inv",
    "thm20.right": "inv",
    "thm21.left": "neg_inv",
    "lemma15.resolvent": None,
    "cor7.kwongpower": "inv",
    "uchi.superadd": "square",
}


# checkers whose instances come from :func:`_pair`
PAIR_CHECKERS = frozenset({"prop25.subadd", "thm16.quarter", "uchi.superadd", "cor7.kwongpower"})


def resolve_function(cfg: TrialConfig) -> ScalarFunction | None:
    spec = cfg.function_spec if cfg.function_spec is not None else DEFAULT_FUNCTION[cfg.checker_id]
    return None if spec is None else fn.from_spec(spec)


def _alpha(cfg, rng) -> float:
    return float(rng.uniform(0.05, 0.95)) if cfg.alpha == "sweep" else float(cfg.alpha)


def _m(cfg, index) -> float:
    return float(cfg.m) if cfg.m is not None else (0.1, 1.0)[index % 2]


def _pair(cfg, rng, dim, default):
    strategy = cfg.pairs or default
    if strategy == "independent":
        return (gen_positive(rng, dim, cfg.spectrum_cap, cfg.complex_entries),
                gen_positive(rng, dim, cfg.spectrum_cap, cfg.complex_entries))
    A, B, _ = gen_pair_psd_symmetrized(dim, rng, strategy, cfg.spectrum_cap, cfg.complex_entries)
    return A, B


def gen_harmonic_bound_triple(rng, dim, alpha, cap=fn.DEFAULT_CAP, complex_entries=False):
    """``A, B > 0`` and ``C = H^1/2 W H^1/2`` with ``H = A !_alpha B``.

    Half the draws have ``W <= 0.9 I`` (so ``C < H``); the rest force one
    eigenvalue of ``W`` into [1.1, 2] (so ``C <= H`` fails).
    """
    A = gen_positive(rng, dim, cap, complex_entries)
    B = gen_positive(rng, dim, cap, complex_entries)
    H = harmonic(A, B, alpha)
    w = rng.uniform(0.05, 0.9, size=dim)
    if rng.random() < 0.5:
        w[rng.integers(dim)] = rng.uniform(1.1, 2.0)
    W = la.with_spectrum(w, la.random_unitary(rng, dim, complex_entries))
    Hh = la.mpow(H, 0.5)
    return A, B, la.symmetrize(Hh @ W @ Hh)


def _instance(cfg: TrialConfig, f: ScalarFunction | None, index: int):
    """Draw one instance; returns ``(args, kwargs, serialized_instance)``."""
    rng = trial_rng(cfg.seed, index)
    dim = cfg.dims[index % len(cfg.dims)]
    cid, cap, cx = cfg.checker_id, cfg.spectrum_cap, cfg.complex_entries
    inst: dict = {"dim": dim}
    kwargs = {"eps_rel": cfg.tol}
    if cid == "prop25.subadd":
        if f.domain == POSITIVE:
            A, B = _pair(cfg, rng, dim, "independent" if f.has("soc") else "rejection")
        else:
            A = gen_hermitian_in_interval(f.domain, dim, rng, cap, cx)
            B = gen_hermitian_in_interval(f.domain, dim, rng, cap, cx)
        args = (f, A, B)
    elif cid == "thm5new":
        J = Interval(-math.inf, min(0.0, f.domain.hi))
        A = gen_hermitian_in_interval(J, dim, rng, cap, cx)
        B = gen_hermitian_in_interval(J, dim, rng, cap, cx)
        grid = th.default_lambda_grid(cfg.lambda_grid_size)
        args, inst["lambda_grid"] = (f, A, B, grid), grid
    elif cid in ("thm16.quarter", "uchi.superadd"):
        A, B = _pair(cfg, rng, dim, "rejection")
        args = (f, A, B)
    elif cid in ("bu.gap", "thm9.harmonic", "cor13.block"):
        A = gen_hermitian_in_interval(f.domain, dim, rng, cap, cx)
        B = gen_hermitian_in_interval(f.domain, dim, rng, cap, cx)
        alpha = _alpha(cfg, rng)
        args, inst["alpha"] = (f, A, B, alpha), alpha
    elif cid == "lemma12.block":
        alpha = _alpha(cfg, rng)
        A, B, C = gen_harmonic_bound_triple(rng, dim, alpha, cap, cx)
        args, inst["alpha"], inst["C"] = (A, B, C, alpha), alpha, la.to_json(C)
    elif cid in ("thm20.right", "thm21.left"):
        m = _m(cfg, index)
        A, B = gen_dominated_pair(f.domain, dim, m, rng, cap, complex_entries=cx)
        args, inst["m"] = (f, A, B, m), m
    elif cid == "lemma15.resolvent":
        m = _m(cfg, index)
        A, B = gen_dominated_pair(POSITIVE, dim, m, rng, cap, complex_entries=cx)
        args, inst["m"] = (A, B, m), m
    elif cid == "cor7.kwongpower":
        p = float(rng.uniform(-1, 1)) if cfg.p is None else cfg.p
        q = float(rng.uniform(-1, 1)) if cfg.q is None else cfg.q
        A, B = _pair(cfg, rng, dim, "rejection")
        args, inst["p"], inst["q"] = (f, p, q, A, B), p, q
    else:
        raise KeyError(f"unknown checker {cid!r}")
    inst["A"], inst["B"] = la.to_json(A), la.to_json(B)
    if f is not None:
        inst["function"] = fn.to_spec(f)
    return args, kwargs, inst


def run_trial(cfg: TrialConfig, f: ScalarFunction | None, index: int) -> th.CheckOutcome:
    try:
        args, kwargs, inst = _instance(cfg, f, index)
    except GenerationError as exc:
        return th.CheckOutcome(cfg.checker_id, {}, th.SKIP, cfg.tol, "", reason=f"generator: {exc}",
                               info={"trial": index})
    out = th.CHECKERS[cfg.checker_id](*args, **kwargs)
    out.info["trial"] = index
    out.instance = inst
    return out


def _check_known(checker_id: str) -> None:
    if checker_id not in th.CHECKERS:
        raise KeyError(f"unknown checker {checker_id!r}; known: {sorted(th.CHECKERS)}")


def run_suite(config: TrialConfig, jobs: int = 1) -> Report:
    """Run ``config.trials`` independent checks; outcomes are in trial order."""
    _check_known(config.checker_id)
    if DEFAULT_FUNCTION[config.checker_id] is None and config.function_spec is not None:
        raise ValueError(f"{config.checker_id} takes no function")
    f = resolve_function(config)
    t0 = time.perf_counter()
    indices = range(config.trials)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(lambda i: run_trial(config, f, i), indices))
    else:
        outcomes = [run_trial(config, f, i) for i in indices]
    return Report(config, outcomes, wall_time=time.perf_counter() - t0)


def search_counterexample(checker_id: str, config: TrialConfig, jobs: int = 1) -> th.CheckOutcome | None:
    """Most severe violation over ``config.trials`` draws, or ``None``.

    A trial counts as a violation when its verdict is FAIL or any margin is
    below ``-tolerance_used``.  The configured draws are always scanned;
    when ``config.pairs`` is unset, a second sweep over independent
    (unconstrained) positive pairs is added so that converse directions
    get evidence.
    """
    _check_known(checker_id)
    if config.checker_id != checker_id:
        config = TrialConfig(**{**asdict(config), "checker_id": checker_id})
    configs = [config]
    if config.pairs is None and checker_id in PAIR_CHECKERS:
        configs.append(TrialConfig(**{**asdict(config), "pairs": "independent"}))
    bad = []
    for cfg in configs:
        bad += [o for o in run_suite(cfg, jobs).outcomes
                if o.verdict == th.FAIL or (o.margins and o.worst_margin() < -o.tolerance_used)]
    if not bad:
        return None
    return min(bad, key=_severity)


def report_all(seed: int = 0, trials: int = 100, dims=(1, 2, 3), jobs: int = 1, **overrides) -> dict:
    """Every registered checker with its defaults, combined into one payload."""
    t0 = time.perf_counter()
    reports = {}
    for cid in th.CHECKERS:
        cfg = TrialConfig(cid, dims=tuple(dims), trials=trials, seed=seed, **overrides)
        reports[cid] = run_suite(cfg, jobs).to_json()
    totals = {k: sum(r["summary"][k] for r in reports.values()) for k in ("pass", "fail", "skip")}
    return {
        "version": __version__,
        "master_seed": seed,
        "summary": {**totals, "wall_time": time.perf_counter() - t0},
        "reports": reports,
    }


def strip_wall_time(payload):
    """Copy of a report payload with every ``wall_time`` field removed."""
    if isinstance(payload, dict):
        return {k: strip_wall_time(v) for k, v in payload.items() if k != "wall_time"}
    if isinstance(payload, list):
        return [strip_wall_time(v) for v in payload]
    return payload
