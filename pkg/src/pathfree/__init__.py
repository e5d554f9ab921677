"""Path-free colorings of planar digraphs.

The package decides whether a planar digraph admits a vertex coloring in
which no color class induces a given oriented path, and builds the gadget
based instances that make this problem hard.
"""

from .detect import BudgetExceeded, brute_enumerate_induced, enumerate_induced, find_monochromatic
from .digraph import Coloring, Digraph, DigraphBuilder, is_acyclic, verify_embedding
from .gadgets import CATALOG, build_fan, build_gadget, build_tower, check_contract, synthesize_gadget, tower_special_3coloring
from .patterns import PathPattern, TreePattern, Verdict, classify_problem, enumerate_orientations, lrem
from .reductions import (
    ReductionCertificate,
    Sat3Formula,
    lift_leaf_2col,
    lift_leaf_3col,
    pendant_lift,
    planar3col_to_3col,
    planarize,
    reduction_chain,
    sat3_to_2col,
)
from .solve import decide, dpll_solve, encode_cnf, solve_exact, verify_coloring

__all__ = [
    "BudgetExceeded",
    "CATALOG",
    "Coloring",
    "Digraph",
    "DigraphBuilder",
    "PathPattern",
    "ReductionCertificate",
    "Sat3Formula",
    "TreePattern",
    "Verdict",
    "brute_enumerate_induced",
    "build_fan",
    "build_gadget",
    "build_tower",
    "check_contract",
    "classify_problem",
    "decide",
    "dpll_solve",
    "encode_cnf",
    "enumerate_induced",
    "enumerate_orientations",
    "find_monochromatic",
    "is_acyclic",
    "lift_leaf_2col",
    "lift_leaf_3col",
    "lrem",
    "pendant_lift",
    "planar3col_to_3col",
    "planarize",
    "reduction_chain",
    "sat3_to_2col",
    "solve_exact",
    "synthesize_gadget",
    "tower_special_3coloring",
    "verify_coloring",
    "verify_embedding",
]
