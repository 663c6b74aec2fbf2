"""Regression graphs: separation, Markov equivalence, classification and DAG orientation."""

from .equivalence import ClassReport, EquivalenceReport, classify, dag_orientable, markov_equivalent
from .errors import GraphError, NotOrientable
from .graph import Edge, EdgeKind, RegressionGraph, UndirectedGraph, build_graph, skeleton
from .oracle import independence_structure, structures_equal
from .orientation import OrientationResult, orient_to_dag, verify_orientation
from .separation import IndependenceStatement, collision_vs, pairwise_independences, separates
from .textio import export_dot, parse, serialize

__all__ = [
    "ClassReport",
    "Edge",
    "EdgeKind",
    "EquivalenceReport",
    "GraphError",
    "IndependenceStatement",
    "NotOrientable",
    "OrientationResult",
    "RegressionGraph",
    "UndirectedGraph",
    "build_graph",
    "classify",
    "collision_vs",
    "dag_orientable",
    "export_dot",
    "independence_structure",
    "markov_equivalent",
    "orient_to_dag",
    "pairwise_independences",
    "parse",
    "separates",
    "serialize",
    "skeleton",
    "structures_equal",
    "verify_orientation",
]
