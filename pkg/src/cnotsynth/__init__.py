"""CNOT circuit synthesis for linear reversible operators over GF(2)."""

from .baseline import synth_gauss, synth_pmh
from .bench import brute_force_optimal, portfolio_synth, random_operator
from .circuit import CnotCircuit, CnotGate, depth, simulate, verify
from .cost import DescentStuck, greedy_descent
from .gf2 import BitMatrix, LuFactors, Permutation, SingularMatrixError, lu_decompose, mat_inverse, mat_mul
from .greedy import fast_greedyge, greedyge_general_direct, greedyge_general_lu, synth_upper

__all__ = [
    "BitMatrix",
    "CnotCircuit",
    "CnotGate",
    "DescentStuck",
    "LuFactors",
    "Permutation",
    "SingularMatrixError",
    "brute_force_optimal",
    "depth",
    "fast_greedyge",
    "greedy_descent",
    "greedyge_general_direct",
    "greedyge_general_lu",
    "lu_decompose",
    "mat_inverse",
    "mat_mul",
    "portfolio_synth",
    "random_operator",
    "simulate",
    "synth_gauss",
    "synth_pmh",
    "synth_upper",
    "verify",
]
