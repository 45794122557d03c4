"""Command line front-end: ``cnotsynth {synth,verify,random,oracle,bench}``."""

from __future__ import annotations

import argparse
import logging
import sys

from .bench import (
    METHOD_NAMES,
    ExperimentConfig,
    MethodConfig,
    brute_force_optimal,
    experiment_asymptotic,
    experiment_near_optimal,
    random_operator,
    run_method,
    size_ratios,
    write_csv,
)
from .circuit import read_circuit, verify, write_circuit
from .cost import CLI_COST_NAMES, DescentStuck
from .gf2 import read_matrix, write_matrix

SYNTH_METHODS = ("gauss", "pmh", "greedyge", "greedyge-lu", "descent")
INV_COST = {v: k for k, v in CLI_COST_NAMES.items()}


def _method_name(args) -> str:
    if args.method == "greedyge-lu":
        return f"greedyge-lu-{args.lu}"
    if args.method == "descent":
        return "descent-" + args.cost
    return args.method


def _method_config(args) -> MethodConfig:
    return MethodConfig(
        pmh_m=getattr(args, "m", None),
        iter_cap=args.iter_cap,
        restarts=args.restarts,
        patience=args.patience,
    )


def cmd_synth(args) -> int:
    a = read_matrix(args.input)
    try:
        c = run_method(_method_name(args), a, args.seed, _method_config(args))
    except DescentStuck as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    write_circuit(c, args.out)
    return 0


def cmd_verify(args) -> int:
    c = read_circuit(args.circuit)
    a = read_matrix(args.matrix)
    try:
        ok = verify(c, a)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print("verified" if ok else "NOT verified")
    return 0 if ok else 1


def cmd_random(args) -> int:
    write_matrix(random_operator(args.n, args.k, args.seed), args.out)
    return 0


def cmd_oracle(args) -> int:
    a = read_matrix(args.input)
    write_circuit(brute_force_optimal(a, free_perm=args.free_perm), args.out)
    return 0


def cmd_bench(args) -> int:
    seeds = tuple(range(args.seed_base, args.seed_base + args.seeds))
    cfg = ExperimentConfig(tuple(args.methods), seeds, _method_config(args))
    if args.protocol == "asymptotic":
        rows = experiment_asymptotic(args.n, cfg)
    else:
        if len(args.n) != 1:
            print("error: near-optimal takes a single --n", file=sys.stderr)
            return 2
        rows = experiment_near_optimal(args.n[0], args.k, cfg)
    write_csv(rows, args.csv)
    summary = size_ratios(rows)
    if args.summary_csv:
        write_csv(summary, args.summary_csv, summary[0].keys() if summary else ())
    for s in summary:
        print(f"{s['method']:<22} n={s['n']:<4} k={s['k']:<6} mean={s['mean_size']:.1f} "
              f"ratio_vs_pmh={s['ratio_vs_pmh']:.3f}")
    return 0


def _descent_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iter-cap", type=int, default=None, help="default 20*n^2")
    p.add_argument("--restarts", type=int, default=0, help="extra attempts after a stuck descent")
    p.add_argument("--patience", type=int, default=None,
                   help="give up after this many moves without a new best cost")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cnotsynth", description="CNOT circuit synthesis for linear reversible operators")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize a circuit for a matrix file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--method", choices=SYNTH_METHODS, default="greedyge")
    p.add_argument("--m", type=int, default=None, help="PMH block size")
    p.add_argument("--lu", choices=("standard", "sparse", "minones"), default="standard")
    p.add_argument("--cost", choices=tuple(CLI_COST_NAMES), default="Hsum")
    _descent_flags(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify", help="check that a circuit implements a matrix")
    p.add_argument("--circuit", required=True)
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("random", help="write the product of k random CNOTs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("oracle", help="optimal circuit by exhaustive search (n <= 4)")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--free-perm", action="store_true", help="allow a free output permutation")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="run a benchmark protocol and write a CSV")
    p.add_argument("protocol", choices=("asymptotic", "near-optimal"))
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--k", type=int, nargs="+", default=[0], help="input gate counts (near-optimal)")
    p.add_argument("--seeds", type=int, default=20, help="number of seeds per point")
    p.add_argument("--seed-base", type=int, default=0)
    p.add_argument("--methods", nargs="+", choices=METHOD_NAMES, default=["pmh", "greedyge"])
    p.add_argument("--m", type=int, default=None, help="PMH block size")
    p.add_argument("--csv", required=True)
    p.add_argument("--summary-csv", default=None)
    _descent_flags(p)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
