"""Worst-case sweep: k = n^2 random CNOTs, size ratio to PMH and timings per n."""

import argparse
import statistics

from cnotsynth.bench import ExperimentConfig, MethodConfig, experiment_asymptotic, size_ratios, write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[16, 32, 64, 128, 256])
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--methods", nargs="+",
                    default=["gauss", "pmh", "greedyge", "greedyge-lu-standard", "greedyge-lu-sparse"])
    ap.add_argument("--csv", default="asymptotic.csv")
    args = ap.parse_args()

    cfg = ExperimentConfig(tuple(args.methods), tuple(range(args.seeds)), MethodConfig())
    rows = experiment_asymptotic(args.n, cfg, progress=lambda r: print(
        f"  n={r['n']:<4} seed={r['seed']:<3} {r['method']:<22} size={r['out_size']}", flush=True))
    write_csv(rows, args.csv)
    print(f"\n{'method':<22} {'n':>5} {'mean size':>10} {'vs pmh':>7} {'median ms':>10}")
    for s in sorted(size_ratios(rows), key=lambda s: (s["n"], s["method"])):
        t = statistics.median(r["time"] for r in rows if r["method"] == s["method"] and r["n"] == s["n"])
        print(f"{s['method']:<22} {s['n']:>5} {s['mean_size']:>10.1f} {s['ratio_vs_pmh']:>7.3f} {t * 1000:>10.1f}")


if __name__ == "__main__":
    main()
