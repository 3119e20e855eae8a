"""Acceptance rate of the constrained pair generator (AB + BA >= 0) by dimension."""
import argparse

from socv import harness as hs


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--draws", type=int, default=2000)
    ap.add_argument("--max-dim", type=int, default=16)
    args = ap.parse_args()
    print(f"{'dim':>4} {'rejection':>10} {'perturbed':>10}")
    for dim in range(1, args.max_dim + 1):
        r = hs.acceptance_rate(dim, "rejection", args.draws, seed=dim)
        p = hs.acceptance_rate(dim, "perturbed", args.draws, seed=dim)
        print(f"{dim:>4} {r:>10.3f} {p:>10.3f}")


if __name__ == "__main__":
    main()
