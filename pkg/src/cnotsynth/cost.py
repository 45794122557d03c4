"""Greedy cost-minimization synthesis over row and column operations.

Four cost functions drive the search:

- ``h_sum``: number of ones in ``A``;
- ``h_prod``: sum over rows of the log of the row weight;
- ``H_sum`` / ``H_prod``: the same measure added over ``A`` and ``A^-1``.

The search keeps, for ``A`` and ``A^-1``, a table of the cost change of every
``Row(i, j)`` (``r_j <- r_i ^ r_j``) and every ``Col(i, j)``
(``c_j <- c_i ^ c_j``).  A row operation on ``A`` is ``Col(j, i)`` on
``A^-1`` and vice versa, so the move score is
``min(M_A_row[i,j] + M_Ainv_col[j,i], M_A_col[i,j] + M_Ainv_row[j,i])``.

The tables are derived from maintained Gram matrices, so an operation costs
``O(n^2)`` array work instead of a full re-evaluation:

- ``Row(i, j)`` changes ``wt(r_j)`` by ``wt(r_i) - 2 <r_i, r_j>``;
- ``Col(i, j)`` changes the weight of every row ``k`` with ``A[k, i] = 1`` by
  ``+1`` or ``-1`` depending on ``A[k, j]``, which for ``h_prod`` makes the
  column table ``A^T D`` with ``D[k, j] = log(w_k + 1 - 2 A[k, j]) - log w_k``.
"""

from __future__ import annotations

import math

import numpy as np

from .circuit import CnotCircuit, CnotGate, relabel
from .gf2 import BitMatrix, Permutation, SingularMatrixError, mat_inverse

COST_KINDS = ("h_sum", "h_prod", "H_sum", "H_prod")
CLI_COST_NAMES = {"hsum": "h_sum", "hprod": "h_prod", "Hsum": "H_sum", "Hprod": "H_prod"}
TIE_TOL = 1e-9


class DescentStuck(RuntimeError):
    """The iteration cap was hit before ``A`` became a permutation matrix."""

    def __init__(self, best_cost: float, iterations: int, seed: int | None = None):
        super().__init__(
            f"descent stuck after {iterations} iterations (best cost {best_cost:g}, seed {seed})"
        )
        self.best_cost = best_cost
        self.iterations = iterations
        self.seed = seed


def cost_h_sum(a: BitMatrix) -> int:
    return a.count_ones()


def cost_h_prod(a: BitMatrix) -> float:
    total = 0.0
    for i, r in enumerate(a.rows):
        if not r:
            raise SingularMatrixError(f"row {i} is zero; h_prod is undefined")
        total += math.log(r.bit_count())
    return total


def cost_value(a: BitMatrix, kind: str) -> float:
    """Evaluate ``kind`` from scratch (inverts ``a`` for the H-variants)."""
    _check_kind(kind)
    h = cost_h_sum if kind.endswith("sum") else cost_h_prod
    value = h(a)
    if kind.startswith("H"):
        value += h(mat_inverse(a))
    return value


def _check_kind(kind: str) -> None:
    if kind not in COST_KINDS:
        raise ValueError(f"unknown cost function {kind!r}; choose from {COST_KINDS}")


def _rank_one(g: np.ndarray, old: np.ndarray, new: np.ndarray) -> None:
    """``g += new new^T - old old^T``, touching only the supports when sparse."""
    s_old = np.flatnonzero(old)
    s_new = np.flatnonzero(new)
    if 4 * max(len(s_old), len(s_new)) > len(old):
        g += np.outer(new, new)
        g -= np.outer(old, old)
        return
    g[np.ix_(s_old, s_old)] -= 1
    g[np.ix_(s_new, s_new)] += 1


class _Side:
    """One matrix (``A`` or ``A^-1``) with incrementally maintained delta tables.

    Gram matrices are float64 holding small integers, so they stay exact and
    feed BLAS without casts; weights are int64 for the log lookup.
    """

    def __init__(self, x: np.ndarray, prod: bool, tables: bool, logs: np.ndarray):
        self.x = x.astype(np.float64)
        self.n = x.shape[0]
        self.prod = prod
        self.tables = tables
        self.logs = logs
        if tables:
            self._rebuild()

    def _rebuild(self) -> None:
        x = self.x
        self.wr = x.sum(axis=1).astype(np.int64)
        self.wc = x.sum(axis=0).astype(np.int64)
        self.gr = x @ x.T
        self.gc = x.T @ x
        if self.prod:
            self.colsum = x.T @ self._d(x, self.wr)

    def _d(self, rows: np.ndarray, w: np.ndarray) -> np.ndarray:
        logs = self.logs
        idx = (w[:, None] + 1 - 2 * rows).astype(np.int64)
        return logs[idx] - logs[w][:, None]

    def row_table(self) -> np.ndarray:
        if not self.tables:
            return np.zeros((self.n, self.n))
        wr, gr = self.wr, self.gr
        if self.prod:
            logs = self.logs
            idx = (wr[:, None] + wr[None, :] - 2 * gr).astype(np.int64)
            return logs[idx] - logs[wr][None, :]
        return wr[:, None] - 2 * gr

    def col_table(self) -> np.ndarray:
        if not self.tables:
            return np.zeros((self.n, self.n))
        if self.prod:
            return self.colsum.copy()
        return self.wc[:, None] - 2 * self.gc

    def row_op(self, i: int, j: int) -> None:
        x = self.x
        old = x[j].copy()
        new = np.abs(old - x[i])
        x[j] = new
        if not self.tables:
            return
        delta = (new - old).astype(np.int64)
        self.wr[j] = int(new.sum())
        self.wc += delta
        g = x @ new
        self.gr[j, :] = g
        self.gr[:, j] = g
        _rank_one(self.gc, old, new)
        if self.prod:
            w_old = np.array([self.wr[j] - int(delta.sum())])
            d_old = self._d(old[None, :], w_old)[0]
            d_new = self._d(new[None, :], self.wr[j : j + 1])[0]
            self.colsum += np.outer(new, d_new) - np.outer(old, d_old)

    def col_op(self, i: int, j: int) -> None:
        x = self.x
        hit = np.flatnonzero(x[:, i])
        old = x[:, j].copy()
        if self.tables and self.prod:
            before = x[hit]
            d_before = self._d(before, self.wr[hit])
        x[hit, j] = 1.0 - x[hit, j]
        if not self.tables:
            return
        new = x[:, j]
        delta = (new - old).astype(np.int64)
        self.wc[j] = int(new.sum())
        self.wr += delta
        g = x.T @ new
        self.gc[j, :] = g
        self.gc[:, j] = g
        _rank_one(self.gr, old, new)
        if self.prod:
            after = x[hit]
            d_after = self._d(after, self.wr[hit])
            self.colsum += after.T @ d_after - before.T @ d_before


class CostState:
    """``A``, ``A^-1`` and the four delta tables of a descent.

    ``m_a_row[i, j]`` is the change of the ``A``-part of the cost under
    ``Row(i, j)`` applied to ``A``; ``m_a_col``, ``m_ainv_row`` and
    ``m_ainv_col`` are defined the same way.  For ``h_sum`` and ``h_prod`` the
    ``A^-1`` tables are all zeros.  Diagonal entries are meaningless.
    """

    def __init__(self, a: BitMatrix, kind: str, seed: int, log_base: float = math.e):
        _check_kind(kind)
        ainv = mat_inverse(a)
        self.n = a.n
        self.kind = kind
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self.iteration = 0
        self.prod = kind.endswith("prod")
        self.uses_inverse = kind.startswith("H")
        self.scale = 1.0 / math.log(log_base) if self.prod else 1.0
        logs = np.zeros(2 * a.n + 2)
        logs[1:] = np.log(np.arange(1, 2 * a.n + 2))
        self._a = _Side(a.to_array(), self.prod, True, logs)
        self._ainv = _Side(ainv.to_array(), self.prod, self.uses_inverse, logs)
        self._diag = np.where(np.eye(a.n, dtype=bool), np.inf, 0.0)

    # -- views -------------------------------------------------------------

    @property
    def a(self) -> np.ndarray:
        return self._a.x.astype(np.uint8)

    @property
    def a_inv(self) -> np.ndarray:
        return self._ainv.x.astype(np.uint8)

    @property
    def a_t(self) -> np.ndarray:
        return self.a.T

    @property
    def a_inv_t(self) -> np.ndarray:
        return self.a_inv.T

    @property
    def m_a_row(self) -> np.ndarray:
        return self._a.row_table() * self.scale

    @property
    def m_a_col(self) -> np.ndarray:
        return self._a.col_table() * self.scale

    @property
    def m_ainv_row(self) -> np.ndarray:
        return self._ainv.row_table() * self.scale

    @property
    def m_ainv_col(self) -> np.ndarray:
        return self._ainv.col_table() * self.scale

    def matrix(self) -> BitMatrix:
        return BitMatrix.from_array(self._a.x)

    def inverse_matrix(self) -> BitMatrix:
        return BitMatrix.from_array(self._ainv.x)

    def cost(self) -> float:
        value = cost_value(self.matrix(), self.kind)
        return value * self.scale if self.prod else value

    def is_permutation(self) -> bool:
        return bool((self._a.wr == 1).all() and (self._a.wc == 1).all())

    # -- moves -------------------------------------------------------------

    def scores(self) -> tuple[np.ndarray, np.ndarray]:
        """Combined scores of every ``Row(i, j)`` and ``Col(i, j)`` on ``A``."""
        s_row = np.asarray(self._a.row_table(), dtype=np.float64)
        s_col = np.asarray(self._a.col_table(), dtype=np.float64)
        if self.uses_inverse:
            s_row += self._ainv.col_table().T
            s_col += self._ainv.row_table().T
        if self.scale != 1.0:
            s_row *= self.scale
            s_col *= self.scale
        s_row += self._diag
        s_col += self._diag
        return s_row, s_col

    def _ties(self) -> tuple[float, np.ndarray, np.ndarray]:
        """Best score and flat indices of the row and column moves reaching it."""
        s_row, s_col = self.scores()
        best = min(s_row.min(), s_col.min())
        thr = best + (TIE_TOL if self.prod else 0.0)
        return float(best), np.flatnonzero(s_row <= thr), np.flatnonzero(s_col <= thr)

    def best_moves(self) -> tuple[float, list[tuple[str, int, int]]]:
        """Lowest score and every move achieving it (rows first, lexicographic)."""
        best, rows, cols = self._ties()
        n = self.n
        moves = [("row", int(f) // n, int(f) % n) for f in rows]
        moves += [("col", int(f) // n, int(f) % n) for f in cols]
        return best, moves

    def apply(self, kind: str, i: int, j: int) -> None:
        if kind == "row":
            self._a.row_op(i, j)
            self._ainv.col_op(j, i)
        else:
            self._a.col_op(i, j)
            self._ainv.row_op(j, i)
        self.iteration += 1

    def step(self) -> tuple[str, int, int, float]:
        """Apply one best move, breaking ties with the seeded generator."""
        best, rows, cols = self._ties()
        total = len(rows) + len(cols)
        pick = int(self.rng.integers(total)) if total > 1 else 0
        if pick < len(rows):
            kind, flat = "row", int(rows[pick])
        else:
            kind, flat = "col", int(cols[pick - len(rows)])
        i, j = divmod(flat, self.n)
        self.apply(kind, i, j)
        return kind, i, j, best


def build_cost_state(a: BitMatrix, kind: str, seed: int = 0, log_base: float = math.e) -> CostState:
    return CostState(a, kind, seed, log_base)


def default_iter_cap(n: int) -> int:
    return 20 * n * n


def greedy_descent(
    a: BitMatrix,
    kind: str = "H_sum",
    seed: int = 0,
    iter_cap: int | None = None,
    log_base: float = math.e,
    check: bool = False,
    patience: int | None = None,
) -> CnotCircuit:
    """Reduce ``A`` to a permutation matrix by greedy row and column moves.

    Every iteration applies a move of least combined score; when several moves
    tie (in particular at a local minimum, where the best score is not
    negative) one of them is drawn with the seeded generator.  Raises
    :class:`DescentStuck` after ``iter_cap`` moves, or earlier when
    ``patience`` is set and that many moves pass without a new best cost.

    With ``check`` the tables are compared against from-scratch evaluation on
    50 sampled entries after every move, and ``A @ A^-1`` is checked.
    """
    n = a.n
    if iter_cap is None:
        iter_cap = default_iter_cap(n)
    state = CostState(a, kind, seed, log_base)
    rng_check = np.random.default_rng(seed + 1) if check else None
    row_ops: list[tuple[int, int]] = []
    col_ops: list[tuple[int, int]] = []
    current = state.cost()
    best_cost = current
    last_best = 0
    while not state.is_permutation():
        if state.iteration >= iter_cap or (
            patience is not None and state.iteration - last_best >= patience
        ):
            raise DescentStuck(best_cost, state.iteration, seed)
        kind_, i, j, delta = state.step()
        (row_ops if kind_ == "row" else col_ops).append((i, j))
        current += delta
        if current < best_cost - TIE_TOL:
            best_cost = current
            last_best = state.iteration
        if check:
            check_state(state, rng_check, samples=50)
    return _assemble(n, row_ops, col_ops, state.matrix())


def _assemble(
    n: int, row_ops: list[tuple[int, int]], col_ops: list[tuple[int, int]], final: BitMatrix
) -> CnotCircuit:
    """Turn ``R_N..R_1 A C_1..C_M = P`` into a circuit for ``A``.

    ``A = P (P^-1 R_1..R_N P) C_M..C_1``: the column moves run first in their
    original order, then the row moves in reverse order relabeled through
    ``P^-1``, then ``P`` as the output permutation.
    """
    mapping = [0] * n
    for r, row in enumerate(final.rows):
        mapping[row.bit_length() - 1] = r
    perm = Permutation(mapping)
    # Col(i, j) right-multiplies by E[i, j]: a gate with target i, control j
    first = [CnotGate(j, i) for i, j in col_ops]
    rows = relabel(CnotCircuit(n, [CnotGate(i, j) for i, j in reversed(row_ops)]), perm.inverse())
    return CnotCircuit(n, first + rows.gates, perm)


def descent_with_restarts(
    a: BitMatrix,
    kind: str = "H_sum",
    seed: int = 0,
    iter_cap: int | None = None,
    restarts: int = 0,
    patience: int | None = None,
) -> CnotCircuit:
    """Run ``greedy_descent``, retrying with fresh seeds after a stuck abort.

    Attempt ``r`` uses seed ``restart_seed(seed, r)``; the first success is
    returned.  Re-raises the last :class:`DescentStuck` if every attempt fails.
    """
    last: DescentStuck | None = None
    for r in range(restarts + 1):
        try:
            return greedy_descent(a, kind, restart_seed(seed, r), iter_cap, patience=patience)
        except DescentStuck as exc:
            last = exc
    assert last is not None
    raise last


def restart_seed(seed: int, attempt: int) -> int:
    if attempt == 0:
        return seed
    return int(np.random.SeedSequence([seed, attempt]).generate_state(1, np.uint64)[0])


# ---------------------------------------------------------------------------
# From-scratch oracle
# ---------------------------------------------------------------------------


def delta_from_scratch(a: BitMatrix, kind: str, table: str, i: int, j: int) -> float:
    """Recompute one table entry by mutating a copy and re-evaluating the cost.

    ``table`` is one of ``a_row``, ``a_col``, ``ainv_row``, ``ainv_col``; the
    ``ainv`` tables use the single-matrix measure on ``A^-1``.
    """
    h = cost_h_sum if kind.endswith("sum") else cost_h_prod
    target = a if table.startswith("a_") else mat_inverse(a)
    before = h(target)
    work = target.copy()
    if table.endswith("row"):
        work.rows[j] ^= work.rows[i]
    else:
        bj = 1 << j
        work.rows = [r ^ bj if (r >> i) & 1 else r for r in work.rows]
    return h(work) - before


def check_state(state: CostState, rng: np.random.Generator, samples: int = 50) -> int:
    """Compare ``samples`` random entries of each table with the oracle.

    Returns the number of entries checked; raises ``AssertionError`` on the
    first mismatch.
    """
    a = state.matrix()
    if not (a.to_array().astype(np.int64) @ state.a_inv.astype(np.int64) % 2 == np.eye(a.n)).all():
        raise AssertionError("A @ A^-1 != I")
    n = a.n
    tables = {"a_row": state.m_a_row, "a_col": state.m_a_col}
    if state.uses_inverse:
        tables.update(ainv_row=state.m_ainv_row, ainv_col=state.m_ainv_col)
    tol = 1e-9 if state.prod else 0.0
    checked = 0
    for name, table in tables.items():
        for _ in range(samples):
            i, j = (int(v) for v in rng.choice(n, size=2, replace=False))
            want = delta_from_scratch(a, state.kind, name, i, j) * state.scale
            got = table[i, j]
            if abs(got - want) > tol:
                raise AssertionError(f"{name}[{i},{j}] = {got!r}, recomputed {want!r}")
            checked += 1
    return checked
