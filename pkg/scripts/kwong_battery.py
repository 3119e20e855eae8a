"""Kwong-matrix battery over the function catalog and the power transforms."""
import argparse

import numpy as np

from socv import functions as fn
from socv.kwong import kwong_empirical, prop14_transforms, reciprocal


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=500)
    ap.add_argument("--n-max", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    funcs = [f for f in fn.catalog() if f.domain == fn.POSITIVE]
    funcs += [reciprocal(f) for f in funcs if not f.constant]
    for p in (-1.0, -0.5, 0.5, 1.0):
        funcs.append(prop14_transforms(fn.lookup("inv_sqrt"), p)[0])
    funcs.append(prop14_transforms(fn.lookup("asinh"), 0.5)[1])

    print(f"{'function':<32} {'flag':>5} {'verdict':>8} {'violations':>10}  worst min eig")
    for f in funcs:
        o = kwong_empirical(f, n_max=args.n_max, trials=args.trials, seed=args.seed)
        flag = "yes" if f.has("kwong") else "-"
        print(f"{f.name:<32} {flag:>5} {o.verdict:>8} {o.info['violations']:>10}  "
              f"{o.margins['kwong_min_eig']: .3e}")


if __name__ == "__main__":
    np.seterr(all="raise")
    main()
