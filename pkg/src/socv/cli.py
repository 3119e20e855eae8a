"""Command-line interface.

    socv check <checker_id> [options]
    socv search <checker_id> [options]
    socv report --all [options]
    socv list

Exit status is 0 iff no trial failed (for ``search``: iff no violation was
found).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import functions as fn
from . import harness
from . import linalg_core as la
from . import theorems as th


def _dims(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


def _alpha(text: str):
    return text if text == "sweep" else float(text)


def _function(text: str):
    if text.startswith("@"):
        return json.loads(Path(text[1:]).read_text())
    if text.lstrip().startswith("{"):
        return json.loads(text)
    return text


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--dims", type=_dims, default=(1, 2, 3), help="comma-separated, e.g. 1,2,3,8")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=la.EPS_REL, help="relative tolerance")
    p.add_argument("--alpha", type=_alpha, default="sweep", help="weight in (0,1) or 'sweep'")
    p.add_argument("--function", type=_function, default=None,
                   help="catalog name, inline JSON, or @spec.json")
    p.add_argument("--lambda-grid", type=int, default=7, dest="lambda_grid")
    p.add_argument("--complex", action="store_true", dest="complex_entries")
    p.add_argument("--spectrum-cap", type=float, default=fn.DEFAULT_CAP, dest="spectrum_cap")
    p.add_argument("--m", type=float, default=None, help="dominance gap; default alternates 0.1 and 1")
    p.add_argument("--pairs", choices=("commuting", "rejection", "perturbed", "independent"), default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", type=Path, default=None, help="write JSON report here instead of stdout")


def _config(args, checker_id: str) -> harness.TrialConfig:
    return harness.TrialConfig(
        checker_id=checker_id,
        dims=args.dims,
        trials=args.trials,
        seed=args.seed,
        tol=args.tol,
        alpha=args.alpha,
        function_spec=args.function,
        lambda_grid_size=args.lambda_grid,
        complex_entries=args.complex_entries,
        spectrum_cap=args.spectrum_cap,
        m=args.m,
        pairs=args.pairs,
    )


def _emit(payload: dict, out: Path | None) -> None:
    text = harness.dumps(payload) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _summary_line(name: str, summary: dict) -> str:
    return f"{name}: pass={summary['pass']} fail={summary['fail']} skip={summary['skip']}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="socv", description=__doc__.split("\n")[0] if __doc__ else None)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("check", "search"):
        p = sub.add_parser(name)
        p.add_argument("checker_id", choices=sorted(th.CHECKERS))
        _add_common(p)
    p = sub.add_parser("report")
    p.add_argument("--all", action="store_true", required=True)
    _add_common(p)
    sub.add_parser("list")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        print("checkers:", " ".join(th.CHECKERS))
        print("functions:", " ".join(f.name for f in fn.catalog()))
        return 0
    if args.command == "check":
        report = harness.run_suite(_config(args, args.checker_id), jobs=args.jobs)
        payload = report.to_json()
        _emit(payload, args.out)
        print(_summary_line(args.checker_id, payload["summary"]), file=sys.stderr)
        return 0 if report.n_fail == 0 else 1
    if args.command == "search":
        cfg = _config(args, args.checker_id)
        found = harness.search_counterexample(args.checker_id, cfg, jobs=args.jobs)
        payload = {
            "version": harness.__version__,
            "config": cfg.to_json(),
            "found": found is not None,
            "worst_instance": found.to_dict(with_instance=True) if found else None,
        }
        _emit(payload, args.out)
        print(f"{args.checker_id}: {'violation found' if found else 'no violation'}", file=sys.stderr)
        return 1 if found else 0
    payload = harness.report_all(
        seed=args.seed, trials=args.trials, dims=args.dims, jobs=args.jobs, tol=args.tol, alpha=args.alpha,
        lambda_grid_size=args.lambda_grid, complex_entries=args.complex_entries,
        spectrum_cap=args.spectrum_cap, m=args.m, pairs=args.pairs,
    )
    _emit(payload, args.out)
    for cid, rep in payload["reports"].items():
        print(_summary_line(cid, rep["summary"]), file=sys.stderr)
    return 0 if payload["summary"]["fail"] == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
