"""Exact length-bounded cuts on graphs of bounded treewidth, with brute-force
oracles and generators for the hardness gadgets."""
from .decomp import TreeDecomposition, heuristic_decomposition, make_nice, validate_decomposition
from .dp import Solution, solve_instance, solve_mlbc, solve_mlbmc
from .errors import DecompositionError, ParseError, ResourceLimitError
from .graph import CutInstance, Graph, verify_cut
from .lenvec import LengthVector, enumerate_vectors
from .oracle import brute_force_mlbc, brute_force_mlbmc

__all__ = [
    "CutInstance", "DecompositionError", "Graph", "LengthVector", "ParseError", "ResourceLimitError",
    "Solution", "TreeDecomposition", "brute_force_mlbc", "brute_force_mlbmc", "enumerate_vectors",
    "heuristic_decomposition", "make_nice", "solve_instance", "solve_mlbc", "solve_mlbmc",
    "validate_decomposition", "verify_cut",
]
