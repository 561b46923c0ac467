"""Cover verification, coloring extraction and the DSATUR upper bound."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ddfrac.flow import WeightedCover
from ddfrac.graph import Graph


class UncoveredVertex(ValueError):
    pass


@dataclass(frozen=True)
class Coloring:
    colors: tuple[int, ...]  # per vertex, contiguous 0..k-1

    @property
    def num_colors(self) -> int:
        return max(self.colors) + 1 if self.colors else 0

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_colors)]
        for v, c in enumerate(self.colors):
            out[c].append(v)
        return out

    def conflicts(self, g: Graph) -> list[tuple[int, int]]:
        return [(u, v) for u, v in g.sorted_edges() if self.colors[u] == self.colors[v]]

    def is_proper(self, g: Graph) -> bool:
        return len(self.colors) == g.n and not self.conflicts(g)

    def dumps(self) -> str:
        lines = [f"c colors {self.num_colors}"]
        lines.extend(f"s {v + 1} {c + 1}" for v, c in enumerate(self.colors))
        return "\n".join(lines) + "\n"


def _compact(colors: list[int]) -> Coloring:
    remap: dict[int, int] = {}
    for c in colors:
        if c not in remap:
            remap[c] = len(remap)
    return Coloring(tuple(remap[c] for c in colors))


@dataclass
class CoverReport:
    stable: bool
    covered: bool
    total: Fraction
    merged: WeightedCover
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.stable and self.covered

    def __str__(self):
        head = f"stable={'pass' if self.stable else 'FAIL'} coverage={'pass' if self.covered else 'FAIL'} " \
               f"total={self.total.numerator}/{self.total.denominator}"
        return "\n".join([head] + self.problems)


def verify_cover(g: Graph, z: WeightedCover) -> CoverReport:
    """Check that every set is stable and every vertex has coverage >= 1 (exact)."""
    zm = z.merged()
    problems = []
    stable = True
    for s, w in zm:
        if any(v < 0 or v >= g.n for v in s):
            stable = False
            problems.append(f"set {sorted(v + 1 for v in s)} has out-of-range vertices")
            continue
        if not g.is_stable(s):
            stable = False
            bad = next((u, v) for u in s for v in s if u < v and g.has_edge(u, v))
            problems.append(f"set {sorted(v + 1 for v in s)} not stable (edge {bad[0] + 1}-{bad[1] + 1})")
        if w < 0:
            stable = False
            problems.append(f"negative weight {w}")
    cov = zm.coverage(g.n) if stable else [Fraction(0)] * g.n
    if stable:
        under = [v for v in range(g.n) if cov[v] < 1]
    else:
        under = []
        for v in range(g.n):
            if sum((w for s, w in zm if v in s), Fraction(0)) < 1:
                under.append(v)
    for v in under[:10]:
        problems.append(f"vertex {v + 1} covered {cov[v] if stable else '< 1'}")
    return CoverReport(stable, not under, zm.total, zm, problems)


def extract_coloring(g: Graph, z: WeightedCover) -> Coloring:
    """Colour each vertex by the first listed set containing it."""
    for _, w in z:
        if w.denominator != 1 or w <= 0:
            raise ValueError("extract_coloring needs positive integral weights")
    colors = [-1] * g.n
    for k, (s, _) in enumerate(z):
        for v in s:
            if colors[v] < 0:
                colors[v] = k
    missing = [v + 1 for v, c in enumerate(colors) if c < 0]
    if missing:
        raise UncoveredVertex(f"vertices not covered: {missing[:10]}")
    return _compact(colors)


def dsatur(g: Graph) -> Coloring:
    """Brelaz's DSATUR.

    Next vertex: most distinct neighbour colours, then most uncoloured
    neighbours, then lowest id; it gets the smallest colour not used by a
    neighbour.
    """
    n = g.n
    adj = g.adjacency
    colors = [-1] * n
    seen: list[set[int]] = [set() for _ in range(n)]
    free_deg = [len(a) for a in adj]
    for _ in range(n):
        best = -1
        best_key = None
        for v in range(n):
            if colors[v] >= 0:
                continue
            key = (len(seen[v]), free_deg[v])
            if best_key is None or key > best_key:
                best, best_key = v, key
        c = 0
        while c in seen[best]:
            c += 1
        colors[best] = c
        for u in adj[best]:
            seen[u].add(c)
            free_deg[u] -= 1
    return _compact(colors)
