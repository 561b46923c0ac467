"""Exact reduced decision diagrams of the stable sets of a graph."""
from ddfrac.dd._kernels import BACKEND, NUMBA_AVAILABLE
from ddfrac.dd.compile import (
    DEFAULT_NODE_LIMIT,
    ORDERINGS,
    NodeLimitExceeded,
    compile_exact,
    make_ordering,
)
from ddfrac.dd.diagram import (
    DdArc,
    DdNode,
    DecisionDiagram,
    PathLimitExceeded,
    ValidationReport,
    count_paths,
    dump,
    enumerate_paths,
    load,
    validate,
)

__all__ = [
    "BACKEND",
    "NUMBA_AVAILABLE",
    "DEFAULT_NODE_LIMIT",
    "ORDERINGS",
    "NodeLimitExceeded",
    "compile_exact",
    "make_ordering",
    "DdArc",
    "DdNode",
    "DecisionDiagram",
    "PathLimitExceeded",
    "ValidationReport",
    "count_paths",
    "dump",
    "enumerate_paths",
    "load",
    "validate",
]
