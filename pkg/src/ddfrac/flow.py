"""Flow formulations over stable-set decision diagrams.

The model has one variable per arc with bounds ``0 <= y_a <= n``, a covering
row per layer (1-arcs leaving the layer carry at least one unit), flow
conservation at internal nodes, and minimises the flow leaving the root.
Its integral version yields the chromatic number; its linear relaxation
yields the fractional chromatic number.
"""
from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from ddfrac.dd.diagram import DecisionDiagram
from ddfrac.graph import Graph
from ddfrac.ratlp import LpModel, LpStatus, Relation, ilp_solve, lp_solve
from ddfrac.ratlp.model import as_rational


class ExactnessViolation(RuntimeError):
    """A stable set has no matching path, so the diagram is not exact."""


class DecompositionError(RuntimeError):
    pass


# --------------------------------------------------------------------------
# weighted covers

@dataclass
class WeightedCover:
    """Stable sets (original 0-based vertex ids) with rational weights."""

    entries: list[tuple[frozenset[int], Fraction]] = field(default_factory=list)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    @property
    def total(self) -> Fraction:
        return sum((w for _, w in self.entries), Fraction(0))

    def add(self, s: Iterable[int], w) -> None:
        self.entries.append((frozenset(s), as_rational(w)))

    def merged(self) -> "WeightedCover":
        """Equal sets combined by summing weights; first-occurrence order kept."""
        acc: dict[frozenset[int], Fraction] = {}
        for s, w in self.entries:
            acc[s] = acc.get(s, Fraction(0)) + w
        return WeightedCover(list(acc.items()))

    def coverage(self, n: int) -> list[Fraction]:
        cov = [Fraction(0)] * n
        for s, w in self.entries:
            for v in s:
                cov[v] += w
        return cov

    def dumps(self) -> str:
        lines = []
        for s, w in self.entries:
            inner = ",".join(str(v + 1) for v in sorted(s))
            lines.append(f"w={w.numerator}/{w.denominator} S={{{inner}}}")
        t = self.total
        lines.append(f"total={t.numerator}/{t.denominator}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "WeightedCover":
        pat = re.compile(r"^w=(-?\d+(?:/\d+)?)\s+S=\{([\d,\s]*)\}$")
        out = cls()
        declared = None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("total="):
                declared = Fraction(line[len("total="):])
                continue
            mt = pat.match(line)
            if not mt:
                raise ValueError(f"line {lineno}: cannot parse {line!r}")
            verts = [int(t) - 1 for t in mt.group(2).replace(" ", "").split(",") if t]
            if any(v < 0 for v in verts):
                raise ValueError(f"line {lineno}: vertex ids are 1-based")
            out.add(verts, Fraction(mt.group(1)))
        if declared is not None and declared != out.total:
            raise ValueError(f"declared total {declared} != sum of weights {out.total}")
        return out


# --------------------------------------------------------------------------
# models

@dataclass
class FlowModel:
    lp: LpModel
    arc_var: list[int]  # arc id -> variable index (identity here, kept explicit)
    layer_one_vars: list[list[int]]
    cover_rows: list[int]
    conservation_rows: list[int]
    integer: bool


def build_flow_model(d: DecisionDiagram, g: Graph, relax: bool = True) -> FlowModel:
    """Covering-form flow model on ``d``; integral arc variables when ``relax`` is False."""
    n = g.n
    if d.n != n:
        raise ValueError(f"diagram has {d.n} decision layers but graph has {n} vertices")
    lp = LpModel(name=f"{'Fprime' if relax else 'F'}_{g.name or 'graph'}")
    tail = d.arc_tail.tolist()
    head = d.arc_head.tolist()
    label = d.arc_label.tolist()
    arc_layer = d.arc_layer().tolist()
    root = d.root
    nf = Fraction(n)
    for a in range(d.arc_count):
        lp.add_var(0, nf, 1 if tail[a] == root else 0, name=f"y{a}")
    arc_var = list(range(d.arc_count))
    layer_one: list[list[int]] = [[] for _ in range(n)]
    for a in range(d.arc_count):
        if label[a]:
            layer_one[arc_layer[a]].append(a)
    order = d.ordering.tolist()
    cover_rows = [
        lp.add_row({a: 1 for a in layer_one[j]}, Relation.GE, 1, name=f"cover_v{order[j] + 1}")
        for j in range(n)
    ]
    inflow: list[list[int]] = [[] for _ in range(d.node_count)]
    outflow: list[list[int]] = [[] for _ in range(d.node_count)]
    for a in range(d.arc_count):
        outflow[tail[a]].append(a)
        inflow[head[a]].append(a)
    cons_rows = []
    for u in range(1, d.node_count - 1):
        coefs = {a: 1 for a in inflow[u]}
        for a in outflow[u]:
            coefs[a] = coefs.get(a, 0) - 1
        cons_rows.append(lp.add_row(coefs, Relation.EQ, 0, name=f"flow_n{u}"))
    return FlowModel(lp, arc_var, layer_one, cover_rows, cons_rows, not relax)


@dataclass
class FractionalResult:
    chi_f: Fraction
    flow: list[Fraction]
    solve_time_s: float
    iterations: int


def solve_fractional(d: DecisionDiagram, g: Graph, warm_start="auto") -> FractionalResult:
    fm = build_flow_model(d, g, relax=True)
    t0 = time.perf_counter()
    sol = lp_solve(fm.lp, warm_start=warm_start)
    dt = time.perf_counter() - t0
    if sol.status is not LpStatus.OPTIMAL:
        raise RuntimeError(f"flow relaxation not optimal: {sol.status.value}")
    return FractionalResult(sol.objective, sol.values, dt, sol.iterations)


@dataclass
class IntegralResult:
    status: LpStatus  # OPTIMAL or TIMEOUT
    chi: int | None  # best known coloring size (incumbent)
    lower_bound: int | None
    flow: list[int] | None
    solve_time_s: float
    nodes: int

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


def solve_integral(
    d: DecisionDiagram,
    g: Graph,
    time_limit: float | None = None,
    seed_coloring: bool = True,
    relaxation: str = "auto",
) -> IntegralResult:
    """Chromatic number from the integral flow model.

    With ``seed_coloring`` the DSATUR coloring, routed through the diagram,
    is the starting incumbent.
    """
    fm = build_flow_model(d, g, relax=False)
    incumbent = None
    if seed_coloring:
        from ddfrac.cover import dsatur

        col = dsatur(g)
        z = WeightedCover([(frozenset(c), Fraction(1)) for c in col.classes()])
        incumbent = cover_to_flow(z, d)
    t0 = time.perf_counter()
    sol = ilp_solve(fm.lp, range(fm.lp.num_vars), time_limit=time_limit, relaxation=relaxation,
                    incumbent=incumbent)
    dt = time.perf_counter() - t0
    if sol.status is LpStatus.INFEASIBLE:  # pragma: no cover - flow model is always feasible
        raise RuntimeError("integral flow model infeasible")
    flow = [int(v) for v in sol.values] if sol.values else None
    chi = int(sol.objective) if sol.objective is not None else None
    lb = None if sol.dual_bound is None else -((-sol.dual_bound.numerator) // sol.dual_bound.denominator)
    return IntegralResult(sol.status, chi, lb, flow, dt, sol.nodes)


# --------------------------------------------------------------------------
# transformations between covers and flows

def cover_to_flow(z: WeightedCover, d: DecisionDiagram) -> list[Fraction]:
    """Route each weighted stable set along its unique r-t path."""
    y = [Fraction(0)] * d.arc_count
    for s, w in z:
        path = d.path_for_set(s)
        if path is None:
            raise ExactnessViolation(f"no r-t path for set {sorted(v + 1 for v in s)}")
        for a in path:
            y[a] += w
    return y


def conservation_violations(y: Sequence[Fraction], d: DecisionDiagram) -> list[int]:
    bal = [Fraction(0)] * d.node_count
    tail = d.arc_tail.tolist()
    head = d.arc_head.tolist()
    for a, v in enumerate(y):
        bal[head[a]] += v
        bal[tail[a]] -= v
    return [u for u in range(1, d.node_count - 1) if bal[u] != 0]


def flow_to_cover(y: Sequence, d: DecisionDiagram) -> WeightedCover:
    """Path decomposition of a conservative nonnegative r-t flow.

    Paths are traced from the root preferring the 1-arc whenever it still has
    positive residual; each path is charged its bottleneck. Repeated sets are
    merged.
    """
    res = [as_rational(v) for v in y]
    if len(res) != d.arc_count:
        raise ValueError("flow vector length differs from arc count")
    if any(v < 0 for v in res):
        raise DecompositionError("negative arc flow")
    bad = conservation_violations(res, d)
    if bad:
        raise DecompositionError(f"flow conservation violated at node(s) {bad[:5]}")
    zero = d.zero_arc.tolist()
    one = d.one_arc.tolist()
    head = d.arc_head.tolist()
    terminal = d.terminal
    acc: dict[frozenset[int], Fraction] = {}
    order_list: list[frozenset[int]] = []
    path_vertices_layer = d.ordering.tolist()
    while True:
        a0, a1 = zero[0], one[0]
        if (a0 < 0 or res[a0] == 0) and (a1 < 0 or res[a1] == 0):
            break
        u = 0
        path = []
        chosen = []
        j = 0
        while u != terminal:
            a = one[u]
            if a >= 0 and res[a] > 0:
                chosen.append(path_vertices_layer[j])
            else:
                a = zero[u]
                if a < 0 or res[a] <= 0:
                    raise DecompositionError(f"positive flow reaches node {u} but cannot leave it")
            path.append(a)
            u = head[a]
            j += 1
        w = min(res[a] for a in path)
        for a in path:
            res[a] -= w
        key = frozenset(chosen)
        if key not in acc:
            order_list.append(key)
            acc[key] = Fraction(0)
        acc[key] += w
    leftover = [a for a, v in enumerate(res) if v != 0]
    if leftover:
        raise DecompositionError(f"flow on arcs {leftover[:5]} not on any r-t path")
    return WeightedCover([(s, acc[s]) for s in order_list])


def positive_support(y: Sequence) -> int:
    return sum(1 for v in y if v > 0)
