"""Square Boolean matrices over GF(2) with bit-packed rows.

Row ``i`` is a Python ``int`` whose bit ``j`` holds entry ``(i, j)``; CPython
stores ints as arrays of machine digits, so a row XOR is a word-wise loop in C.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

LU_STRATEGIES = ("standard", "sparse", "min_ones")
MIN_ONES_MAX_N = 256


class SingularMatrixError(ValueError):
    """Raised when an operation needs an invertible matrix and gets a singular one."""


def reverse_bits(x: int, n: int) -> int:
    """Reverse the lowest ``n`` bits of ``x``."""
    return int(format(x, f"0{n}b")[::-1], 2) if n else 0


class BitMatrix:
    """An ``n x n`` matrix over GF(2), one int per row."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, rows: Sequence[int]):
        if n < 1:
            raise ValueError(f"dimension must be >= 1, got {n}")
        if len(rows) != n:
            raise ValueError(f"expected {n} rows, got {len(rows)}")
        limit = 1 << n
        for r in rows:
            if r < 0 or r >= limit:
                raise ValueError(f"row {r:#x} does not fit in {n} columns")
        self.n = n
        self.rows = list(rows)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(n, [1 << i for i in range(n)])

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> BitMatrix:
        n = len(entries)
        rows = []
        for line in entries:
            if len(line) != n:
                raise ValueError("matrix must be square")
            r = 0
            for j, v in enumerate(line):
                if v not in (0, 1):
                    raise ValueError(f"entries must be 0 or 1, got {v!r}")
                r |= v << j
            rows.append(r)
        return cls(n, rows)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> BitMatrix:
        arr = np.asarray(arr)
        n = arr.shape[0]
        if arr.shape != (n, n):
            raise ValueError("matrix must be square")
        packed = np.packbits(arr.astype(bool), axis=1, bitorder="little")
        return cls(n, [int.from_bytes(row.tobytes(), "little") for row in packed])

    def to_array(self) -> np.ndarray:
        nbytes = (self.n + 7) // 8
        buf = b"".join(r.to_bytes(nbytes, "little") for r in self.rows)
        packed = np.frombuffer(buf, dtype=np.uint8).reshape(self.n, nbytes)
        return np.unpackbits(packed, axis=1, count=self.n, bitorder="little")

    def to_lists(self) -> list[list[int]]:
        return self.to_array().tolist()

    def copy(self) -> BitMatrix:
        return BitMatrix(self.n, self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self.rows[i] >> j) & 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.n, tuple(self.rows)))

    def __repr__(self) -> str:
        if self.n <= 8:
            return f"BitMatrix({self.to_lists()})"
        return f"BitMatrix(n={self.n}, ones={self.count_ones()})"

    def __str__(self) -> str:
        return "\n".join(format(r, f"0{self.n}b")[::-1] for r in self.rows)

    def count_ones(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    def transpose(self) -> BitMatrix:
        n = self.n
        # row strings with column 0 first; zip(*) turns them into columns
        strs = [format(r, f"0{n}b")[::-1] for r in self.rows]
        return BitMatrix(n, [int("".join(col)[::-1], 2) for col in zip(*strs)])

    def is_identity(self) -> bool:
        return all(r == 1 << i for i, r in enumerate(self.rows))

    def is_lower_triangular(self) -> bool:
        """Unit lower-triangular: ones on the diagonal, zeros above it."""
        return all(r >> i == 1 for i, r in enumerate(self.rows))

    def is_upper_triangular(self) -> bool:
        """Unit upper-triangular: ones on the diagonal, zeros below it."""
        return all(r & ((2 << i) - 1) == 1 << i for i, r in enumerate(self.rows))

    def is_permutation(self) -> bool:
        return all(r and not r & (r - 1) for r in self.rows) and len(set(self.rows)) == self.n

    def rank(self) -> int:
        rows = [r for r in self.rows if r]
        rank = 0
        while rows:
            pivot = rows.pop()
            rank += 1
            low = pivot & -pivot
            rows = [r ^ pivot if r & low else r for r in rows]
            rows = [r for r in rows if r]
        return rank

    def is_invertible(self) -> bool:
        return self.rank() == self.n

    def permute_rows(self, perm: Permutation) -> BitMatrix:
        """Return ``P @ self``: row ``k`` moves to row ``perm.map[k]``."""
        _check_dims(self.n, perm.n)
        out = [0] * self.n
        for k, r in enumerate(self.rows):
            out[perm.map[k]] = r
        return BitMatrix(self.n, out)

    def permute_cols(self, perm: Permutation) -> BitMatrix:
        """Return ``self @ P``: column ``t`` of the result is column ``perm.map[t]``."""
        _check_dims(self.n, perm.n)
        return self.transpose().permute_rows(perm.inverse()).transpose()


class Permutation:
    """Bijection on ``{0..n-1}``; as a matrix it has ``P[map[k], k] = 1``."""

    __slots__ = ("n", "map")

    def __init__(self, mapping: Sequence[int]):
        mapping = [int(x) for x in mapping]
        n = len(mapping)
        if n < 1 or sorted(mapping) != list(range(n)):
            raise ValueError(f"not a permutation of 0..{n - 1}: {mapping}")
        self.n = n
        self.map = mapping

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(range(n))

    @classmethod
    def swap(cls, n: int, i: int, j: int) -> Permutation:
        m = list(range(n))
        m[i], m[j] = m[j], m[i]
        return cls(m)

    def is_identity(self) -> bool:
        return all(k == v for k, v in enumerate(self.map))

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for k, v in enumerate(self.map):
            inv[v] = k
        return Permutation(inv)

    def matrix(self) -> BitMatrix:
        rows = [0] * self.n
        for k, v in enumerate(self.map):
            rows[v] = 1 << k
        return BitMatrix(self.n, rows)

    def __matmul__(self, other: Permutation) -> Permutation:
        """Matrix product ``self @ other`` (apply ``other`` first)."""
        _check_dims(self.n, other.n)
        return Permutation([self.map[other.map[k]] for k in range(self.n)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.map == other.map

    def __hash__(self) -> int:
        return hash(tuple(self.map))

    def __repr__(self) -> str:
        return f"Permutation({self.map})"


@dataclass
class LuFactors:
    """``p1 @ A @ p2 == l @ u`` with unit lower ``l`` and unit upper ``u``."""

    p1: Permutation
    p2: Permutation
    l: BitMatrix
    u: BitMatrix


def _check_dims(n: int, m: int) -> None:
    if n != m:
        raise ValueError(f"dimension mismatch: {n} != {m}")


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    _check_dims(a.n, b.n)
    out = []
    brows = b.rows
    for r in a.rows:
        acc = 0
        k = 0
        while r:
            if r & 1:
                acc ^= brows[k]
            r >>= 1
            k += 1
        out.append(acc)
    return BitMatrix(a.n, out)


def mat_inverse(a: BitMatrix) -> BitMatrix:
    """Gauss-Jordan on ``[A | I]`` packed into one int per row."""
    n = a.n
    aug = [r | (1 << (n + i)) for i, r in enumerate(a.rows)]
    for j in range(n):
        bit = 1 << j
        p = next((i for i in range(j, n) if aug[i] & bit), None)
        if p is None:
            raise SingularMatrixError("matrix is singular over GF(2)")
        aug[j], aug[p] = aug[p], aug[j]
        pr = aug[j]
        for i in range(n):
            if i != j and aug[i] & bit:
                aug[i] ^= pr
    return BitMatrix(n, [r >> n for r in aug])


def row_op(a: BitMatrix, i: int, j: int) -> None:
    """Row(i, j): ``r_j <- r_i ^ r_j`` in place."""
    if i == j:
        raise ValueError("row operation needs two distinct rows")
    if not (0 <= i < a.n and 0 <= j < a.n):
        raise IndexError(f"row index out of range for n={a.n}: ({i}, {j})")
    a.rows[j] ^= a.rows[i]


def col_op(a: BitMatrix, i: int, j: int) -> None:
    """Col(i, j): ``c_j <- c_i ^ c_j`` in place."""
    if i == j:
        raise ValueError("column operation needs two distinct columns")
    if not (0 <= i < a.n and 0 <= j < a.n):
        raise IndexError(f"column index out of range for n={a.n}: ({i}, {j})")
    bj = 1 << j
    rows = a.rows
    for k, r in enumerate(rows):
        if (r >> i) & 1:
            rows[k] = r ^ bj


# ---------------------------------------------------------------------------
# LU decomposition with pivot strategies
# ---------------------------------------------------------------------------


def _pivot_standard(res: np.ndarray) -> tuple[int, int]:
    cols = np.flatnonzero(res.any(axis=0))
    c = int(cols[0])
    r = int(np.flatnonzero(res[:, c])[0])
    return r, c


def _pivot_sparse(res: np.ndarray) -> tuple[int, int]:
    roww = res.sum(axis=1)
    colw = res.sum(axis=0)
    live = roww > 0
    wmin = roww[live].min()
    best = None
    for r in np.flatnonzero(roww == wmin):
        cols = np.flatnonzero(res[r])
        c = int(cols[np.argmin(colw[cols])])
        key = (int(colw[c]), int(r))
        if best is None or key < best[0]:
            best = (key, int(r), c)
    return best[1], best[2]


def min_ones_scores(res: np.ndarray) -> np.ndarray:
    """Ones left in the eliminated residual for every pivot ``(r, c)``.

    Entries where ``res[r, c] == 0`` are not admissible pivots and hold ``inf``.
    """
    f = res.astype(np.float64)
    w = f.sum(axis=1)
    gram = f @ f.T
    y = w[:, None] - 2.0 * gram
    scores = (w.sum() - w)[:, None] + y @ f + w[:, None] * f
    return np.where(res.astype(bool), scores, np.inf)


def _pivot_min_ones(res: np.ndarray) -> tuple[int, int]:
    scores = min_ones_scores(res)
    # argmin on the flattened array returns the lexicographically first (r, c)
    r, c = np.unravel_index(int(np.argmin(scores)), scores.shape)
    return int(r), int(c)


_PIVOTS = {
    "standard": _pivot_standard,
    "sparse": _pivot_sparse,
    "min_ones": _pivot_min_ones,
}


def lu_decompose(
    a: BitMatrix, strategy: str = "standard", max_min_ones_n: int = MIN_ONES_MAX_N
) -> LuFactors:
    """Factor ``P1 @ A @ P2 = L @ U`` by repeated rank-one elimination.

    Each step picks a pivot ``(r, c)`` of the residual, records its column as a
    column of ``L`` and its row as a row of ``U``, then removes the outer
    product.  ``strategy`` chooses the pivot:

    - ``standard``: leftmost non-empty column, topmost row in it.
    - ``sparse``: among rows of least weight, the one whose lightest column is
      lightest; that column.  Ties go to the lowest index.
    - ``min_ones``: the pivot leaving the fewest ones in the residual, ties
      lexicographic.  Restricted to ``n <= max_min_ones_n``.
    """
    try:
        pick = _PIVOTS[strategy]
    except KeyError:
        raise ValueError(f"unknown LU strategy {strategy!r}; choose from {LU_STRATEGIES}") from None
    n = a.n
    if strategy == "min_ones" and n > max_min_ones_n:
        raise ValueError(f"min_ones strategy is capped at n <= {max_min_ones_n} (got n={n})")

    res = a.to_array().astype(np.uint8)
    row_order = np.empty(n, dtype=np.intp)
    col_order = np.empty(n, dtype=np.intp)
    lcols = np.zeros((n, n), dtype=np.uint8)
    urows = np.zeros((n, n), dtype=np.uint8)
    for s in range(n):
        if not res.any():
            raise SingularMatrixError("matrix is singular over GF(2)")
        r, c = pick(res)
        lcol = res[:, c].copy()
        urow = res[r].copy()
        res ^= np.outer(lcol, urow)
        row_order[s], col_order[s] = r, c
        lcols[s], urows[s] = lcol, urow

    l = BitMatrix.from_array(lcols[:, row_order].T)
    u = BitMatrix.from_array(urows[:, col_order])
    p1 = Permutation(np.argsort(row_order))
    p2 = Permutation(col_order)
    return LuFactors(p1, p2, l, u)


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------


def format_matrix(a: BitMatrix) -> str:
    return f"{a.n}\n{a}\n"


def parse_matrix(text: str) -> BitMatrix:
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty matrix file")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise ValueError(f"first line must be the dimension, got {lines[0]!r}") from None
    body = lines[1:]
    if len(body) == n + 1 and body[-1] == "":
        body = body[:-1]
    if len(body) != n:
        raise ValueError(f"expected {n} matrix rows, got {len(body)}")
    rows = []
    for i, line in enumerate(body):
        if len(line) != n or set(line) - {"0", "1"}:
            raise ValueError(f"row {i}: expected {n} characters from {{0,1}}, got {line!r}")
        rows.append(int(line[::-1], 2))
    return BitMatrix(n, rows)


def read_matrix(path) -> BitMatrix:
    with open(path) as f:
        return parse_matrix(f.read())


def write_matrix(a: BitMatrix, path) -> None:
    with open(path, "w") as f:
        f.write(format_matrix(a))

