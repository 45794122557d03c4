"""CNOT circuits: gate lists with an optional trailing output relabeling.

A gate ``(control, target)`` performs ``row[target] ^= row[control]``, i.e. it
left-multiplies the running operator by ``E[target, control]``.  Gates run in
list order, so later gates multiply on the left.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .gf2 import BitMatrix, Permutation


class CnotGate(NamedTuple):
    control: int
    target: int


@dataclass
class CnotCircuit:
    n: int
    gates: list[CnotGate] = field(default_factory=list)
    out_perm: Permutation | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"qubit count must be >= 1, got {self.n}")
        gates = [g if isinstance(g, CnotGate) else CnotGate(*g) for g in self.gates]
        n = self.n
        for c, t in gates:
            if c == t:
                raise ValueError(f"CNOT control and target must differ, got ({c}, {t})")
            if not (0 <= c < n and 0 <= t < n):
                raise ValueError(f"gate ({c}, {t}) out of range for n={n}")
        self.gates = gates
        if self.out_perm is not None and self.out_perm.n != n:
            raise ValueError(f"out_perm acts on {self.out_perm.n} lines, circuit has {n}")

    @classmethod
    def _trusted(cls, n: int, gates: list[CnotGate], out_perm: Permutation | None = None) -> CnotCircuit:
        """Build from gates that come from already validated circuits."""
        c = object.__new__(cls)
        c.n, c.gates, c.out_perm = n, gates, out_perm
        return c

    def __len__(self) -> int:
        return len(self.gates)

    @property
    def size(self) -> int:
        return len(self.gates)

    def with_out_perm(self, perm: Permutation | None) -> CnotCircuit:
        if perm is not None and perm.n != self.n:
            raise ValueError(f"out_perm acts on {perm.n} lines, circuit has {self.n}")
        return CnotCircuit._trusted(self.n, self.gates, perm)


def simulate(c: CnotCircuit) -> BitMatrix:
    rows = [1 << i for i in range(c.n)]
    for ctrl, tgt in c.gates:
        rows[tgt] ^= rows[ctrl]
    m = BitMatrix(c.n, rows)
    if c.out_perm is not None:
        m = m.permute_rows(c.out_perm)
    return m


def verify(c: CnotCircuit, a: BitMatrix) -> bool:
    if c.n != a.n:
        raise ValueError(f"dimension mismatch: circuit on {c.n} lines, matrix is {a.n}x{a.n}")
    return simulate(c) == a


def depth(c: CnotCircuit) -> int:
    """ASAP layer count; the output relabeling is free."""
    level = [0] * c.n
    d = 0
    for ctrl, tgt in c.gates:
        layer = max(level[ctrl], level[tgt]) + 1
        level[ctrl] = level[tgt] = layer
        if layer > d:
            d = layer
    return d


def reverse(c: CnotCircuit) -> CnotCircuit:
    if c.out_perm is not None:
        raise ValueError("cannot reverse a circuit carrying an output permutation")
    return CnotCircuit._trusted(c.n, c.gates[::-1])


def concat(c1: CnotCircuit, c2: CnotCircuit) -> CnotCircuit:
    """Run ``c1`` then ``c2``; simulates to ``simulate(c2) @ simulate(c1)``."""
    if c1.n != c2.n:
        raise ValueError(f"dimension mismatch: {c1.n} != {c2.n}")
    if c1.out_perm is not None and not c1.out_perm.is_identity():
        raise ValueError("first circuit carries an output permutation; fold it first")
    return CnotCircuit._trusted(c1.n, c1.gates + c2.gates, c2.out_perm)


def relabel(c: CnotCircuit, perm: Permutation) -> CnotCircuit:
    """Rename line ``k`` to ``perm.map[k]``.

    The result simulates to ``P @ simulate(c) @ P^-1`` (the output permutation,
    if any, is conjugated the same way).
    """
    m = perm.map
    gates = [CnotGate(m[g.control], m[g.target]) for g in c.gates]
    out = None
    if c.out_perm is not None:
        out = perm @ c.out_perm @ perm.inverse()
    if perm.n != c.n:
        raise ValueError(f"permutation acts on {perm.n} lines, circuit has {c.n}")
    return CnotCircuit._trusted(c.n, gates, out)


def from_ops(n: int, ops: Iterable[tuple[int, int]], reverse_order: bool = False) -> CnotCircuit:
    """Build a circuit from ``(control, target)`` row operations."""
    ops = list(ops)
    if reverse_order:
        ops.reverse()
    return CnotCircuit(n, ops)


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------


def format_circuit(c: CnotCircuit) -> str:
    lines = [f"n {c.n}"]
    lines.extend(f"CNOT {g.control} {g.target}" for g in c.gates)
    if c.out_perm is not None:
        lines.append("PERM " + " ".join(map(str, c.out_perm.map)))
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> CnotCircuit:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty circuit file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "n":
        raise ValueError(f"first line must be 'n <int>', got {lines[0]!r}")
    n = int(head[1])
    gates = []
    perm = None
    for lineno, line in enumerate(lines[1:], start=2):
        if perm is not None:
            raise ValueError(f"line {lineno}: nothing may follow the PERM line")
        parts = line.split()
        if parts[0] == "CNOT" and len(parts) == 3:
            c, t = int(parts[1]), int(parts[2])
            if c == t or not (0 <= c < n and 0 <= t < n):
                raise ValueError(f"line {lineno}: invalid gate {line!r} for n={n}")
            gates.append(CnotGate(c, t))
        elif parts[0] == "PERM" and len(parts) == n + 1:
            perm = Permutation([int(p) for p in parts[1:]])
        else:
            raise ValueError(f"line {lineno}: cannot parse {line!r}")
    return CnotCircuit(n, gates, perm)


def read_circuit(path) -> CnotCircuit:
    with open(path) as f:
        return parse_circuit(f.read())


def write_circuit(c: CnotCircuit, path) -> None:
    with open(path, "w") as f:
        f.write(format_circuit(c))
