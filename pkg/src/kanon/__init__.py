"""Minimum edge insertion for k-degree anonymity, with certified lower bounds."""

from kanon.dp import AnonymizationSolution, apply_reduction_rule, enumerate_solutions, min_cost, run_dp
from kanon.generator import barabasi_albert
from kanon.graph import BlockSequence, Graph, block_sequence, is_k_anonymous, load_graph
from kanon.realizability import advanced_erdos_gallai_test, erdos_gallai_test, waste_to_realizable
from kanon.realizer import local_exchange, realize, verify_insertion
from kanon.solver import BoundsReport, SolverConfig, solve, sweep

__version__ = "0.1.0"

__all__ = [
    "AnonymizationSolution",
    "BlockSequence",
    "BoundsReport",
    "Graph",
    "SolverConfig",
    "advanced_erdos_gallai_test",
    "apply_reduction_rule",
    "barabasi_albert",
    "block_sequence",
    "enumerate_solutions",
    "erdos_gallai_test",
    "is_k_anonymous",
    "load_graph",
    "local_exchange",
    "min_cost",
    "realize",
    "run_dp",
    "solve",
    "sweep",
    "verify_insertion",
    "waste_to_realizable",
]
