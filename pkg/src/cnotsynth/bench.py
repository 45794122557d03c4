"""Random instances, the BFS oracle, the portfolio and the benchmark protocols."""

from __future__ import annotations

import csv
import logging
import math
import time
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, NamedTuple

import numpy as np

from .baseline import synth_gauss, synth_pmh
from .circuit import CnotCircuit, CnotGate, depth, verify
from .cost import DescentStuck, descent_with_restarts
from .gf2 import BitMatrix, Permutation
from .greedy import greedyge_general_direct, greedyge_general_lu

log = logging.getLogger(__name__)

METHOD_NAMES = (
    "gauss",
    "pmh",
    "greedyge",
    "greedyge-lu-standard",
    "greedyge-lu-sparse",
    "greedyge-lu-minones",
    "descent-hsum",
    "descent-hprod",
    "descent-Hsum",
    "descent-Hprod",
)
DESCENT_KINDS = {
    "descent-hsum": "h_sum",
    "descent-hprod": "h_prod",
    "descent-Hsum": "H_sum",
    "descent-Hprod": "H_prod",
}
LU_NAMES = {"standard": "standard", "sparse": "sparse", "minones": "min_ones"}
CSV_FIELDS = ("method", "n", "k", "seed", "out_size", "depth", "time", "verified")


@dataclass
class MethodConfig:
    """Knobs shared by every method run.

    ``pmh_m`` is the PMH block size (``None`` for the default); ``iter_cap``,
    ``restarts`` and ``patience`` tune the descent methods.
    """

    pmh_m: int | None = None
    iter_cap: int | None = None
    restarts: int = 0
    patience: int | None = None


@dataclass
class SynthesisReport:
    method: str
    n: int
    input_gate_count: int | None
    output_gate_count: int
    depth: int
    wall_time: float
    seed: int
    verified: bool


class PortfolioResult(NamedTuple):
    circuit: CnotCircuit
    reports: list[SynthesisReport]
    stuck: list[str]


def run_method(name: str, a: BitMatrix, seed: int = 0, config: MethodConfig | None = None) -> CnotCircuit:
    """Synthesize ``a`` with the method called ``name`` (see ``METHOD_NAMES``)."""
    config = config or MethodConfig()
    if name == "gauss":
        return synth_gauss(a)
    if name == "pmh":
        m = config.pmh_m
        if m is not None:
            m = min(m, a.n)
        return synth_pmh(a, m)
    if name == "greedyge":
        return greedyge_general_direct(a)
    if name.startswith("greedyge-lu-"):
        strategy = LU_NAMES.get(name[len("greedyge-lu-"):])
        if strategy is not None:
            return greedyge_general_lu(a, strategy)
    if name in DESCENT_KINDS:
        return descent_with_restarts(
            a, DESCENT_KINDS[name], seed, config.iter_cap, config.restarts, config.patience
        )
    raise ValueError(f"unknown method {name!r}; choose from {METHOD_NAMES}")


def timed_report(
    name: str,
    a: BitMatrix,
    seed: int = 0,
    config: MethodConfig | None = None,
    input_gate_count: int | None = None,
) -> tuple[CnotCircuit, SynthesisReport]:
    """Run one method, timing only the synthesis call, and verify the result.

    Raises ``DescentStuck`` for a stuck descent and ``AssertionError`` if a
    circuit fails verification.
    """
    t0 = time.perf_counter()
    c = run_method(name, a, seed, config)
    elapsed = time.perf_counter() - t0
    if not verify(c, a):
        raise AssertionError(f"{name} produced a circuit that does not implement the input")
    report = SynthesisReport(name, a.n, input_gate_count, len(c), depth(c), elapsed, seed, True)
    return c, report


# ---------------------------------------------------------------------------
# Instances and the exact oracle
# ---------------------------------------------------------------------------


def random_gates(n: int, k: int, seed: int) -> list[CnotGate]:
    if n < 2:
        raise ValueError(f"random operators need n >= 2, got {n}")
    if k < 0:
        raise ValueError(f"gate count must be >= 0, got {k}")
    rng = np.random.default_rng(seed)
    ctrl = rng.integers(0, n, size=k)
    tgt = rng.integers(0, n - 1, size=k)
    tgt += tgt >= ctrl
    return [CnotGate(int(c), int(t)) for c, t in zip(ctrl, tgt)]


def random_operator(n: int, k: int, seed: int) -> BitMatrix:
    """Product of ``k`` uniformly random CNOTs (control != target)."""
    rows = [1 << i for i in range(n)]
    for c, t in random_gates(n, k, seed):
        rows[t] ^= rows[c]
    return BitMatrix(n, rows)


BFS_MAX_N = 4


@lru_cache(maxsize=None)
def _bfs_tree(n: int) -> dict[tuple[int, ...], tuple[tuple[int, ...], CnotGate] | None]:
    start = tuple(1 << i for i in range(n))
    parent: dict[tuple[int, ...], tuple[tuple[int, ...], CnotGate] | None] = {start: None}
    gens = [CnotGate(c, t) for c in range(n) for t in range(n) if c != t]
    queue = deque([start])
    while queue:
        state = queue.popleft()
        for g in gens:
            nxt = list(state)
            nxt[g.target] ^= nxt[g.control]
            key = tuple(nxt)
            if key not in parent:
                parent[key] = (state, g)
                queue.append(key)
    return parent


@lru_cache(maxsize=None)
def _closest_by_row_set(n: int) -> dict[tuple[int, ...], tuple[int, ...]]:
    """For every row multiset, the first state reached by BFS carrying it."""
    out: dict[tuple[int, ...], tuple[int, ...]] = {}
    for state in _bfs_tree(n):  # insertion order is BFS order
        out.setdefault(tuple(sorted(state)), state)
    return out


def brute_force_optimal(a: BitMatrix, free_perm: bool = False) -> CnotCircuit:
    """Minimum-size circuit by breadth-first search over ``GL(n, 2)``, ``n <= 4``.

    By default the output must equal ``a`` exactly, so a permutation costs
    gates (a SWAP takes 3).  With ``free_perm`` the search stops at the first
    matrix whose rows are a reordering of the rows of ``a`` and returns that
    reordering as ``out_perm``, the same cost model the synthesizers use.
    """
    if a.n > BFS_MAX_N:
        raise ValueError(f"exact search is limited to n <= {BFS_MAX_N}, got n={a.n}")
    parent = _bfs_tree(a.n)
    key = tuple(a.rows)
    if key not in parent:
        raise ValueError("matrix is singular over GF(2)")
    perm = None
    if free_perm:
        key = _closest_by_row_set(a.n)[tuple(sorted(a.rows))]
        where = {r: i for i, r in enumerate(a.rows)}
        perm = Permutation([where[r] for r in key])
    gates = []
    while parent[key] is not None:
        key, g = parent[key]
        gates.append(g)
    gates.reverse()
    return CnotCircuit(a.n, gates, perm)


# ---------------------------------------------------------------------------
# Portfolio
# ---------------------------------------------------------------------------


def portfolio_synth(
    a: BitMatrix,
    methods: Iterable[str] = METHOD_NAMES,
    seed: int = 0,
    config: MethodConfig | None = None,
) -> PortfolioResult:
    """Run every method and keep the smallest circuit.

    Ties go to the smaller depth, then to the method name in sort order.
    Stuck descents are listed in ``stuck`` and skipped.
    """
    best: tuple[tuple[int, int, str], CnotCircuit] | None = None
    reports = []
    stuck = []
    for name in methods:
        try:
            c, rep = timed_report(name, a, seed, config)
        except DescentStuck:
            stuck.append(name)
            continue
        reports.append(rep)
        key = (rep.output_gate_count, rep.depth, name)
        if best is None or key < best[0]:
            best = (key, c)
    if best is None:
        raise DescentStuck(math.nan, 0, seed)
    return PortfolioResult(best[1], reports, stuck)


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------


@dataclass
class ExperimentConfig:
    methods: tuple[str, ...] = ("pmh", "greedyge")
    seeds: tuple[int, ...] = tuple(range(20))
    method: MethodConfig = field(default_factory=MethodConfig)


def _run_instances(
    instances: Iterable[tuple[int, int, int]],
    cfg: ExperimentConfig,
    progress: Callable[[dict], None] | None = None,
) -> list[dict]:
    rows = []
    for n, k, seed in instances:
        a = random_operator(n, k, seed)
        for name in cfg.methods:
            try:
                _, rep = timed_report(name, a, seed, cfg.method, input_gate_count=k)
            except DescentStuck as exc:
                log.warning("%s stuck on n=%d k=%d seed=%d: %s", name, n, k, seed, exc)
                continue
            row = {
                "method": name,
                "n": n,
                "k": k,
                "seed": seed,
                "out_size": rep.output_gate_count,
                "depth": rep.depth,
                "time": rep.wall_time,
                "verified": rep.verified,
            }
            rows.append(row)
            if progress is not None:
                progress(row)
    return rows


def experiment_asymptotic(n_list: Iterable[int], cfg: ExperimentConfig, progress=None) -> list[dict]:
    """Worst-case regime: ``k = n^2`` random CNOTs per instance."""
    return _run_instances(((n, n * n, s) for n in n_list for s in cfg.seeds), cfg, progress)


def experiment_near_optimal(n: int, k_list: Iterable[int], cfg: ExperimentConfig, progress=None) -> list[dict]:
    """Fixed ``n``, sweep over input gate counts ``k``."""
    return _run_instances(((n, k, s) for k in k_list for s in cfg.seeds), cfg, progress)


def size_ratios(rows: list[dict], reference: str = "pmh") -> list[dict]:
    """Mean output size per ``(method, n, k)`` and its ratio to ``reference``."""
    groups: dict[tuple[str, int, int], list[int]] = {}
    for r in rows:
        groups.setdefault((r["method"], r["n"], r["k"]), []).append(r["out_size"])
    out = []
    for (method, n, k), sizes in groups.items():
        mean = float(np.mean(sizes))
        ref = groups.get((reference, n, k))
        ref_mean = float(np.mean(ref)) if ref else math.nan
        ratio = mean / ref_mean if ref_mean else (1.0 if mean == ref_mean else math.nan)
        out.append({"method": method, "n": n, "k": k, "mean_size": mean, "ratio_vs_" + reference: ratio})
    return out


def write_csv(rows: list[dict], path, fields: Iterable[str] = CSV_FIELDS) -> None:
    fields = list(fields)
    with open(path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=fields, lineterminator="\r\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _fmt(r[k]) for k in fields})


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return v
