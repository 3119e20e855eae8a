"""Run every checker at a larger scale than the CLI default and save the report.

    python scripts/run_all.py --trials 1000 --dims 1,2,3,4,5,6,7,8 --out results/all.json
"""
import argparse
from pathlib import Path

from socv import harness as hs


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--dims", default="1,2,3,4,5,6,7,8")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--complex", action="store_true")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", type=Path, default=Path("results/all.json"))
    args = ap.parse_args()
    dims = tuple(int(d) for d in args.dims.split(","))
    payload = hs.report_all(seed=args.seed, trials=args.trials, dims=dims, jobs=args.jobs,
                            complex_entries=args.complex)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(hs.dumps(payload) + "\n")
    print(f"{'checker':<20} {'pass':>6} {'fail':>6} {'skip':>6}  worst margin / tol")
    for cid, rep in payload["reports"].items():
        s = rep["summary"]
        w = rep["worst_instance"]
        ratio = min(w["margins"].values()) / w["tolerance_used"] if w and w["margins"] else float("nan")
        print(f"{cid:<20} {s['pass']:>6} {s['fail']:>6} {s['skip']:>6}  {ratio: .3g}")
    print(f"wrote {args.out} ({payload['summary']['wall_time']:.1f}s)")


if __name__ == "__main__":
    main()
