"""Reference synthesizers: Gauss-Jordan elimination and Patel-Markov-Hayes."""

from __future__ import annotations

import math

from .circuit import CnotCircuit, CnotGate
from .gf2 import BitMatrix, SingularMatrixError


def synth_gauss(a: BitMatrix) -> CnotCircuit:
    """Reduce ``A`` to the identity column by column and emit the reversed ops."""
    n = a.n
    rows = list(a.rows)
    ops = []
    for j in range(n):
        bit = 1 << j
        if not rows[j] & bit:
            p = next((i for i in range(j + 1, n) if rows[i] & bit), None)
            if p is None:
                raise SingularMatrixError("matrix is singular over GF(2)")
            rows[j] ^= rows[p]
            ops.append(CnotGate(p, j))
        pr = rows[j]
        for i in range(n):
            if i != j and rows[i] & bit:
                rows[i] ^= pr
                ops.append(CnotGate(j, i))
    ops.reverse()
    return CnotCircuit(n, ops)


def default_block_size(n: int) -> int:
    return max(1, int(math.log2(n) / 2)) if n > 1 else 1


def _pmh_lower(rows: list[int], n: int, m: int) -> list[CnotGate]:
    """Clear the sub-diagonal in sections of ``m`` columns, in place."""
    ops = []
    for start in range(0, n, m):
        stop = min(start + m, n)
        mask = ((1 << (stop - start)) - 1) << start
        seen: dict[int, int] = {}
        for r in range(start, n):
            sub = rows[r] & mask
            if not sub:
                continue
            first = seen.get(sub)
            if first is None:
                seen[sub] = r
            else:
                rows[r] ^= rows[first]
                ops.append(CnotGate(first, r))
        for col in range(start, stop):
            bit = 1 << col
            diag_one = rows[col] & bit
            for r in range(col + 1, n):
                if rows[r] & bit:
                    if not diag_one:
                        rows[col] ^= rows[r]
                        ops.append(CnotGate(r, col))
                        diag_one = True
                    rows[r] ^= rows[col]
                    ops.append(CnotGate(col, r))
            if not diag_one:
                raise SingularMatrixError("matrix is singular over GF(2)")
    return ops


def synth_pmh(a: BitMatrix, m: int | None = None) -> CnotCircuit:
    """Patel-Markov-Hayes synthesis with block size ``m``.

    The lower pass turns ``A`` into an upper-triangular ``U``; the same pass on
    ``U^T`` reaches the identity.  Gates from the second pass are transposed
    (control and target swapped) and run first, followed by the lower-pass
    gates in reverse.
    """
    n = a.n
    if m is None:
        m = default_block_size(n)
    if not 1 <= m <= n:
        raise ValueError(f"block size must satisfy 1 <= m <= n={n}, got {m}")
    rows = list(a.rows)
    lower = _pmh_lower(rows, n, m)
    rows = BitMatrix(n, rows).transpose().rows
    upper = _pmh_lower(rows, n, m)
    gates = [CnotGate(t, c) for c, t in upper]
    gates.extend(reversed(lower))
    return CnotCircuit(n, gates)
