"""Simple undirected graphs, DIMACS ``.col`` I/O and deterministic generators."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

logger = logging.getLogger(__name__)


class DimacsParseError(ValueError):
    """Malformed DIMACS input; ``lineno`` is 1-based (0 when not line-specific)."""

    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        prefix = f"line {lineno}: " if lineno else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    Edges are stored as ``(u, v)`` tuples with ``u < v``.
    """

    n: int
    edges: frozenset[tuple[int, int]]
    name: str = ""
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise ValueError(f"bad edge {(u, v)} for n={self.n}")
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(a)) for a in adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], name: str = "") -> "Graph":
        """Build from arbitrary pairs; orientation and duplicates are normalised."""
        norm = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            norm.add((u, v) if u < v else (v, u))
        return cls(n, frozenset(norm), name)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def is_stable(self, vertices: Iterable[int]) -> bool:
        vs = sorted(set(vertices))
        for i, u in enumerate(vs):
            nu = self.adjacency[u]
            for v in vs[i + 1:]:
                if v in nu:
                    return False
        return True

    def neighbor_masks(self) -> list[int]:
        """Per-vertex neighbourhood as a Python-int bitset."""
        masks = []
        for nb in self.adjacency:
            m = 0
            for u in nb:
                m |= 1 << u
            masks.append(m)
        return masks

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


# --------------------------------------------------------------------------
# DIMACS

def parse_dimacs(text: str | bytes, name: str = "") -> Graph:
    """Parse DIMACS ``.col`` text. Vertex ids are shifted to 0-based."""
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    n = None
    declared_m = None
    edges: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tok = line.split()
        kind = tok[0]
        if kind == "p":
            if n is not None:
                raise DimacsParseError("duplicate problem line", lineno)
            if len(tok) != 4 or tok[1] not in ("edge", "col", "edges"):
                raise DimacsParseError(f"malformed problem line {line!r}", lineno)
            try:
                n, declared_m = int(tok[2]), int(tok[3])
            except ValueError:
                raise DimacsParseError(f"non-integer size in {line!r}", lineno) from None
            if n < 0 or declared_m < 0:
                raise DimacsParseError("negative size", lineno)
        elif kind == "e":
            if n is None:
                raise DimacsParseError("edge line before problem line", lineno)
            if len(tok) != 3:
                raise DimacsParseError(f"malformed edge line {line!r}", lineno)
            try:
                u, v = int(tok[1]), int(tok[2])
            except ValueError:
                raise DimacsParseError(f"non-integer vertex in {line!r}", lineno) from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise DimacsParseError(f"vertex out of range 1..{n} in {line!r}", lineno)
            if u == v:
                raise DimacsParseError(f"self-loop {line!r}", lineno)
            u -= 1
            v -= 1
            edges.add((u, v) if u < v else (v, u))
        elif kind == "n":
            # vertex weight lines of some benchmark files; ignored
            continue
        else:
            raise DimacsParseError(f"unrecognised line {line!r}", lineno)
    if n is None:
        raise DimacsParseError("missing problem line")
    if declared_m is not None and declared_m != len(edges):
        logger.warning("declared %d edges, parsed %d distinct", declared_m, len(edges))
    return Graph(n, frozenset(edges), name)


def read_dimacs(path) -> Graph:
    from pathlib import Path

    p = Path(path)
    return parse_dimacs(p.read_bytes(), name=p.stem)


def write_dimacs(g: Graph, comment: str | None = None) -> str:
    """Canonical writer: ``p edge n m`` then sorted 1-based ``e u v`` with u < v."""
    lines = []
    if comment:
        lines.extend(f"c {c}" for c in comment.splitlines())
    lines.append(f"p edge {g.n} {g.m}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.sorted_edges())
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# generators

def make_empty(n: int) -> Graph:
    _check_n(n)
    return Graph(n, frozenset(), f"empty{n}")


def make_cycle(n: int) -> Graph:
    _check_n(n)
    if n < 3:
        # C1 / C2 degenerate to a vertex or a single edge in a simple graph
        return Graph.from_edges(n, [(0, 1)] if n == 2 else [], f"C{n}")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], f"C{n}")


def make_complete(n: int) -> Graph:
    _check_n(n)
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)], f"K{n}")


def make_petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner, "petersen")


def make_gnp(n: int, p: Fraction | float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p) from numpy's PCG64 stream seeded with ``seed``.

    Pairs ``(i, j)``, ``i < j``, are visited in lexicographic order and each is
    kept when the next uniform draw is below ``p``.
    """
    _check_n(n)
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    rng = np.random.Generator(np.random.PCG64(seed))
    npairs = n * (n - 1) // 2
    draws = rng.random(npairs)
    threshold = float(p)
    edges = []
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            if p == 1 or draws[k] < threshold:
                edges.append((i, j))
            k += 1
    return Graph.from_edges(n, edges, f"gnp_{n}_{p}_{seed}")


def mycielski(g: Graph, name: str = "") -> Graph:
    """Mycielskian: shadow vertex ``n + i`` for each ``i``, hub ``2n``."""
    n = g.n
    edges = list(g.edges)
    for u, v in g.edges:
        edges.append((u, n + v))
        edges.append((v, n + u))
    edges.extend((n + i, 2 * n) for i in range(n))
    return Graph.from_edges(2 * n + 1, edges, name)


def make_myciel(k: int) -> Graph:
    """DIMACS ``myciel<k>``: Mycielski iterates starting from K2 (myciel2 = C5).

    Vertex numbering reproduces the benchmark files (myciel3: 11 vertices, 20 edges).
    """
    if k < 2:
        raise ValueError("k >= 2")
    g = make_complete(2)
    for i in range(2, k + 1):
        g = mycielski(g, f"myciel{i}")
    return g


def make_queen(rows: int, cols: int) -> Graph:
    """Queen graph on a rows x cols board, cells numbered row-major."""
    if rows < 1 or cols < 1:
        raise ValueError("board dimensions must be positive")
    edges = []
    cells = [(r, c) for r in range(rows) for c in range(cols)]
    for a, (r1, c1) in enumerate(cells):
        for b in range(a + 1, len(cells)):
            r2, c2 = cells[b]
            if r1 == r2 or c1 == c2 or abs(r1 - r2) == abs(c1 - c2):
                edges.append((a, b))
    return Graph.from_edges(rows * cols, edges, f"queen{rows}_{cols}")


def relabel(g: Graph, perm: Sequence[int]) -> Graph:
    """Graph with vertex ``v`` renamed ``perm[v]``."""
    return Graph.from_edges(g.n, [(perm[u], perm[v]) for u, v in g.edges], g.name)


def _check_n(n: int) -> None:
    if n < 1:
        raise ValueError("n must be >= 1")
