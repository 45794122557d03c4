"""Greedy Gaussian elimination (GreedyGE) and its extensions to general operators.

``greedyge_triangular`` follows the one-pair-at-a-time selection loop;
``fast_greedyge`` computes every row operation of a column in one go.  Both
clear a unit lower-triangular matrix column by column with ``Row(i, j)``,
``i < j``, and yield the same number of gates.

Internally the fast path stores each row bit-reversed, so that column ``j``
sits at bit ``n - 1 - j``.  Sorting those ints then orders rows
lexicographically by their column entries, which is exactly the order of the
leaves of the binary partition tree built by ``select_all_row_operations``.
"""

from __future__ import annotations

from typing import NamedTuple

from .circuit import CnotCircuit, CnotGate, concat, relabel
from .gf2 import BitMatrix, Permutation, SingularMatrixError, lu_decompose, reverse_bits


class RowOpPair(NamedTuple):
    i: int
    j: int


def _require_lower(l: BitMatrix) -> None:
    if not l.is_lower_triangular():
        raise ValueError("expected a unit lower-triangular matrix")


# ---------------------------------------------------------------------------
# one pair selected per gate
# ---------------------------------------------------------------------------


def select_row_operation(l: BitMatrix) -> RowOpPair:
    """Pick the next pair by narrowing the row set column by column.

    Starting from all rows, each column splits the set into rows carrying a 0
    and rows carrying a 1 there.  The 1-part is kept when it has at least two
    rows, the 0-part otherwise; the scan stops once two rows remain.
    """
    if l.is_identity():
        raise ValueError("nothing to eliminate: matrix is the identity")
    rows = l.rows
    members = list(range(l.n))
    j = 0
    while len(members) > 2:
        if j >= l.n:
            raise SingularMatrixError("duplicate rows: matrix is singular")
        ones = [i for i in members if (rows[i] >> j) & 1]
        if len(ones) < 2:
            members = [i for i in members if not (rows[i] >> j) & 1]
        else:
            members = ones
        j += 1
    a, b = members
    return RowOpPair(min(a, b), max(a, b))


def greedyge_triangular(l: BitMatrix) -> CnotCircuit:
    _require_lower(l)
    work = l.copy()
    ops = []
    while not work.is_identity():
        i, j = select_row_operation(work)
        work.rows[j] ^= work.rows[i]
        ops.append(CnotGate(i, j))
    ops.reverse()
    return CnotCircuit(l.n, ops)


# ---------------------------------------------------------------------------
# all pairs of a column at once
# ---------------------------------------------------------------------------


def select_all_row_operations(
    l: BitMatrix, j: int, members: list[int]
) -> tuple[list[RowOpPair], list[int]]:
    """Recursive pair selection for the rows in ``members``.

    ``members`` must agree on every column before ``j``.  Returns the pairs in
    post-order (0-branch, 1-branch, then the merge of the two survivors) and
    the surviving row as a list of length at most one.
    """
    if len(members) < 2:
        return [], list(members)
    if j >= l.n:
        raise SingularMatrixError("duplicate rows: matrix is singular")
    rows = l.rows
    zeros = [i for i in members if not (rows[i] >> j) & 1]
    ones = [i for i in members if (rows[i] >> j) & 1]
    pairs0, surv0 = select_all_row_operations(l, j + 1, zeros)
    pairs1, surv1 = select_all_row_operations(l, j + 1, ones)
    pairs = pairs0 + pairs1
    if surv0 and surv1:
        a, b = surv0[0], surv1[0]
        lo, hi = (a, b) if a < b else (b, a)
        pairs.append(RowOpPair(lo, hi))
        return pairs, [lo]
    return pairs, surv0 or surv1


def _column_pairs(rev: list[int], members: list[int]) -> list[tuple[int, int]]:
    """Same pairs, same order, as ``select_all_row_operations``.

    ``rev`` holds bit-reversed rows; the members must share every bit above
    the current column.  In sorted order, the split between two neighbours sits
    at the highest bit of their XOR, and a stack replays the post-order merge.
    """
    order = sorted(members, key=rev.__getitem__)
    pairs = []
    stack: list[tuple[int, int]] = []
    cur = order[0]
    prev = rev[cur]
    for idx in order[1:]:
        key = rev[idx]
        split = (key ^ prev).bit_length()
        while stack and stack[-1][0] < split:
            left = stack.pop()[1]
            if left < cur:
                pairs.append((left, cur))
                cur = left
            else:
                pairs.append((cur, left))
        stack.append((split, cur))
        cur = idx
        prev = key
    while stack:
        left = stack.pop()[1]
        if left < cur:
            pairs.append((left, cur))
            cur = left
        else:
            pairs.append((cur, left))
    return pairs


def _greedy_pass(rev: list[int], n: int, fix_diagonal: bool, check: bool = False) -> list[CnotGate]:
    """Clear the sub-diagonal of bit-reversed rows in place.

    With ``fix_diagonal`` a zero diagonal entry is repaired first by adding the
    row below that cancels the most entries to its right.

    Rows ``>= j`` are zero on columns ``< j`` when column ``j`` comes up, so a
    row takes part in column ``j`` exactly when its bit length is ``n - j``.
    Rows are bucketed by bit length and only the targets of row operations
    move between buckets.
    """
    buckets: list[list[int]] = [[] for _ in range(n + 1)]
    for i in range(n):
        buckets[rev[i].bit_length()].append(i)
    ops = []
    for j in range(n - 1 if not fix_diagonal else n):
        sh = n - 1 - j
        members = buckets[sh + 1]
        buckets[sh + 1] = []
        if not rev[j] >> sh:
            if not fix_diagonal:
                raise ValueError("expected a unit lower-triangular matrix")
            if not members:
                raise SingularMatrixError("matrix is singular over GF(2)")
            rj = rev[j]
            best = max(members, key=lambda r: ((rj & rev[r]).bit_count(), -r))
            buckets[rj.bit_length()].remove(j)
            rev[j] ^= rev[best]
            ops.append(CnotGate(best, j))
            members.append(j)
        if len(members) < 2:
            continue
        for a, b in _column_pairs(rev, members):
            rb = rev[b] ^ rev[a]
            rev[b] = rb
            buckets[rb.bit_length()].append(b)
            ops.append(CnotGate(a, b))
        if check:
            _check_column(rev, n, j)
    return ops


def _check_column(rev: list[int], n: int, j: int) -> None:
    sh = n - 1 - j
    for i in range(j + 1, n):
        if rev[i] >> sh:
            raise AssertionError(f"column {j} not cleared at row {i}")


def _to_rev(a: BitMatrix) -> list[int]:
    return [reverse_bits(r, a.n) for r in a.rows]


def fast_greedyge(l: BitMatrix, check: bool = False) -> CnotCircuit:
    """Synthesize a unit lower-triangular matrix.

    ``check`` asserts after every column that the processed columns stay
    cleared.
    """
    _require_lower(l)
    ops = _greedy_pass(_to_rev(l), l.n, fix_diagonal=False, check=check)
    ops.reverse()
    return CnotCircuit(l.n, ops)


def _flip(n: int) -> Permutation:
    return Permutation(range(n - 1, -1, -1))


def _synth_upper_rows(u_rows: list[int], n: int) -> CnotCircuit:
    """Synthesize a unit upper-triangular matrix given by its plain rows.

    Reversing both index orders maps it to a lower-triangular matrix whose
    bit-reversed row ``i`` is the plain row ``n-1-i`` of the upper one.
    """
    ops = _greedy_pass(u_rows[::-1], n, fix_diagonal=False)
    ops.reverse()
    return relabel(CnotCircuit(n, ops), _flip(n))


def synth_upper(u: BitMatrix) -> CnotCircuit:
    if not u.is_upper_triangular():
        raise ValueError("expected a unit upper-triangular matrix")
    return _synth_upper_rows(u.rows, u.n)


def greedyge_general_direct(a: BitMatrix) -> CnotCircuit:
    """Eliminate below the diagonal of a general ``A``, then synthesize ``U``.

    Returns ``concat(circuit(U), reversed reduction gates)``, which simulates to
    ``A``.  Diagonal repairs cost at most one extra gate per column.
    """
    n = a.n
    rev = _to_rev(a)
    ops = _greedy_pass(rev, n, fix_diagonal=True)
    upper = _synth_upper_rows([reverse_bits(r, n) for r in rev], n)
    ops.reverse()
    return concat(upper, CnotCircuit(n, ops))


def greedyge_general_lu(a: BitMatrix, strategy: str = "standard") -> CnotCircuit:
    """Synthesize ``A = P1^-1 P2^-1 (P2 L P2^-1)(P2 U P2^-1)`` from an LU split.

    The permutation ``P1^-1 P2^-1`` is carried as the output relabeling.
    """
    f = lu_decompose(a, strategy)
    cl = fast_greedyge(f.l)
    cu = synth_upper(f.u)
    body = concat(relabel(cu, f.p2), relabel(cl, f.p2))
    return body.with_out_perm(f.p1.inverse() @ f.p2.inverse())
