"""Counterexample search for the converse directions.

Pairs each checker with functions outside its hypothesis class and reports
the most severe violation found, if any.
"""
import argparse

from socv import harness as hs

TARGETS = [
    ("thm9.harmonic", "id"),
    ("thm9.harmonic", "sqrt"),
    ("bu.gap", "id"),
    ("cor13.block", "square"),
    ("uchi.superadd", "square"),
    ("prop25.subadd", "sqrt"),
    ("thm16.quarter", "square"),
    ("bu.gap", "inv"),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=500)
    ap.add_argument("--dims", default="2,3,4")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    dims = tuple(int(d) for d in args.dims.split(","))
    for cid, name in TARGETS:
        cfg = hs.TrialConfig(cid, dims=dims, trials=args.trials, seed=args.seed, function_spec=name)
        found = hs.search_counterexample(cid, cfg)
        if found is None:
            print(f"{cid:<16} {name:<8} none")
        else:
            margins = ", ".join(f"{k}={v:.3e}" for k, v in found.margins.items())
            print(f"{cid:<16} {name:<8} {found.verdict:<5} dim={found.instance['dim']} {margins}")


if __name__ == "__main__":
    main()
