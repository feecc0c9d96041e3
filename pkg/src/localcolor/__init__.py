"""Local and semi-matching graph coloring: validators, exact search, and the
gadget reductions from NAE 3-SAT."""

from .coloring import KColoring, Mode, is_local, is_proper, is_semi_matching, validate
from .graph import Graph, c_graph, complete_graph
from .reduction import NaeInstance, parse_nae, reduce_full, reduce_to_constrained
from .solver import (
    BudgetExhausted,
    ConstrainedInstance,
    SolverConfig,
    chromatic_number,
    find_coloring,
    solve_constrained,
)

__all__ = [
    "BudgetExhausted",
    "ConstrainedInstance",
    "Graph",
    "KColoring",
    "Mode",
    "NaeInstance",
    "SolverConfig",
    "c_graph",
    "chromatic_number",
    "complete_graph",
    "find_coloring",
    "is_local",
    "is_proper",
    "is_semi_matching",
    "parse_nae",
    "reduce_full",
    "reduce_to_constrained",
    "solve_constrained",
    "validate",
]
