"""Fixed n, growing input size k: how close each method stays to the y = k line."""

import argparse
import statistics

from cnotsynth.bench import ExperimentConfig, MethodConfig, experiment_near_optimal, write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=30)
    ap.add_argument("--k", type=int, nargs="+", default=[0, 10, 20, 40, 80, 160, 320])
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--methods", nargs="+",
                    default=["pmh", "greedyge", "descent-hprod", "descent-Hsum", "descent-Hprod"])
    ap.add_argument("--restarts", type=int, default=10)
    ap.add_argument("--patience", type=int, default=None)
    ap.add_argument("--csv", default="near_optimal.csv")
    args = ap.parse_args()

    method_cfg = MethodConfig(restarts=args.restarts, patience=args.patience)
    cfg = ExperimentConfig(tuple(args.methods), tuple(range(args.seeds)), method_cfg)
    rows = experiment_near_optimal(args.n, args.k, cfg)
    write_csv(rows, args.csv)
    print(f"n = {args.n}; median output size (successful runs / seeds)")
    print("k".rjust(6) + "".join(m.rjust(16) for m in args.methods))
    for k in args.k:
        line = f"{k:>6}"
        for m in args.methods:
            sizes = [r["out_size"] for r in rows if r["k"] == k and r["method"] == m]
            cell = f"{statistics.median(sizes):g} ({len(sizes)}/{args.seeds})" if sizes else "stuck"
            line += cell.rjust(16)
        print(line)


if __name__ == "__main__":
    main()
