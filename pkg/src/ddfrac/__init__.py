"""Chromatic and fractional chromatic numbers from exact stable-set decision diagrams."""
from ddfrac.graph import Graph, parse_dimacs, read_dimacs, write_dimacs

__version__ = "0.1.0"

__all__ = ["Graph", "parse_dimacs", "read_dimacs", "write_dimacs", "__version__"]
