"""Exact rational linear and integer programming."""
from ddfrac.ratlp.bnb import ilp_solve
from ddfrac.ratlp.model import LpModel, LpSolution, LpStatus, MalformedModel, Relation, Row, as_rational
from ddfrac.ratlp.simplex import IterationLimit, lp_solve

__all__ = [
    "ilp_solve",
    "lp_solve",
    "IterationLimit",
    "LpModel",
    "LpSolution",
    "LpStatus",
    "MalformedModel",
    "Relation",
    "Row",
    "as_rational",
]
