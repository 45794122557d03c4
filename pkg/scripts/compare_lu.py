"""Mean GreedyGE size for the three LU pivot strategies against the direct extension."""

import argparse

import numpy as np

from cnotsynth.bench import random_operator, run_method

METHODS = ("greedyge", "greedyge-lu-standard", "greedyge-lu-sparse", "greedyge-lu-minones")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=60)
    ap.add_argument("--k", type=int, nargs="+", default=[15, 30, 60, 120, 240, 480, 3600])
    ap.add_argument("--seeds", type=int, default=20)
    args = ap.parse_args()

    print("k".rjust(6) + "".join(m.rjust(22) for m in METHODS))
    for k in args.k:
        means = []
        for m in METHODS:
            means.append(np.mean([len(run_method(m, random_operator(args.n, k, s))) for s in range(args.seeds)]))
        print(f"{k:>6}" + "".join(f"{v:>22.2f}" for v in means))


if __name__ == "__main__":
    main()
