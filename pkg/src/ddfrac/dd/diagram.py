from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from ddfrac.graph import Graph


class PathLimitExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class DdNode:
    id: int
    layer: int  # 1-based, 1..n+1
    state: frozenset[int]


@dataclass(frozen=True)
class DdArc:
    id: int
    tail: int
    head: int
    label: int


@dataclass(eq=False)
class DecisionDiagram:
    """Layered 0/1 decision diagram over a vertex ordering.

    Layer ``j`` (0-based here, ``j + 1`` in user-facing terms) holds the nodes
    ``layer_start[j]:layer_start[j + 1]`` and decides vertex ``ordering[j]``.
    ``states`` rows are eligible-vertex bitsets over original vertex ids.
    Arcs are grouped by layer, ordered by tail id, 0-arc before 1-arc.
    """

    ordering: np.ndarray
    layer_start: np.ndarray
    states: np.ndarray
    arc_tail: np.ndarray
    arc_head: np.ndarray
    arc_label: np.ndarray
    zero_arc: np.ndarray = field(init=False, repr=False)
    one_arc: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        nn = self.node_count
        self.zero_arc = np.full(nn, -1, dtype=np.int64)
        self.one_arc = np.full(nn, -1, dtype=np.int64)
        # later arcs overwrite; validate() reports duplicates separately
        lab = self.arc_label.astype(bool)
        ids = np.arange(self.arc_count, dtype=np.int64)
        self.zero_arc[self.arc_tail[~lab]] = ids[~lab]
        self.one_arc[self.arc_tail[lab]] = ids[lab]

    @property
    def n(self) -> int:
        return len(self.layer_start) - 2

    @property
    def node_count(self) -> int:
        return int(self.layer_start[-1])

    @property
    def arc_count(self) -> int:
        return int(len(self.arc_tail))

    @property
    def root(self) -> int:
        return 0

    @property
    def terminal(self) -> int:
        return self.node_count - 1

    def layer_sizes(self) -> list[int]:
        return np.diff(self.layer_start).tolist()

    def layer_nodes(self, j: int) -> range:
        return range(int(self.layer_start[j]), int(self.layer_start[j + 1]))

    def layer_of(self) -> np.ndarray:
        return np.repeat(np.arange(self.n + 1), np.diff(self.layer_start))

    def state_set(self, node: int) -> frozenset[int]:
        out = []
        for w, word in enumerate(self.states[node].tolist()):
            while word:
                low = word & -word
                out.append(64 * w + low.bit_length() - 1)
                word ^= low
        return frozenset(out)

    def nodes(self) -> Iterator[DdNode]:
        lay = self.layer_of()
        for u in range(self.node_count):
            yield DdNode(u, int(lay[u]) + 1, self.state_set(u))

    def arcs(self) -> Iterator[DdArc]:
        for a, (t, h, l) in enumerate(zip(self.arc_tail.tolist(), self.arc_head.tolist(),
                                          self.arc_label.tolist())):
            yield DdArc(a, t, h, l)

    def arcs_out_of(self, node: int) -> list[int]:
        return [a for a in (int(self.zero_arc[node]), int(self.one_arc[node])) if a >= 0]

    def arc_layer(self) -> np.ndarray:
        """0-based layer of each arc's tail."""
        return self.layer_of()[self.arc_tail]

    def path_for_set(self, vertices) -> list[int] | None:
        """Arcs of the r-t path whose 1-arcs are exactly ``vertices``, or None."""
        s = set(vertices)
        u = 0
        path = []
        for j in range(self.n):
            want_one = int(self.ordering[j]) in s
            a = int(self.one_arc[u] if want_one else self.zero_arc[u])
            if a < 0:
                return None
            path.append(a)
            u = int(self.arc_head[a])
        return path

    def path_vertices(self, path: list[int]) -> frozenset[int]:
        lay = self.arc_layer()
        return frozenset(int(self.ordering[lay[a]]) for a in path if self.arc_label[a])


def count_paths(d: DecisionDiagram) -> int:
    """Number of r-t paths (one bottom-up pass, exact integers)."""
    ways = [0] * d.node_count
    ways[d.terminal] = 1
    tail = d.arc_tail.tolist()
    head = d.arc_head.tolist()
    for a in range(d.arc_count - 1, -1, -1):
        ways[tail[a]] += ways[head[a]]
    return ways[d.root]


def enumerate_paths(d: DecisionDiagram, limit: int) -> list[frozenset[int]]:
    """Vertex sets (original ids) of all r-t paths; raises if there are more than ``limit``."""
    total = count_paths(d)
    if total > limit:
        raise PathLimitExceeded(f"{total} paths exceed limit {limit}")
    zero = d.zero_arc.tolist()
    one = d.one_arc.tolist()
    head = d.arc_head.tolist()
    order = d.ordering.tolist()
    n = d.n
    out: list[frozenset[int]] = []
    stack: list[tuple[int, int, tuple[int, ...]]] = [(0, 0, ())]
    while stack:
        u, j, chosen = stack.pop()
        if j == n:
            out.append(frozenset(chosen))
            continue
        if one[u] >= 0:
            stack.append((head[one[u]], j + 1, chosen + (order[j],)))
        if zero[u] >= 0:
            stack.append((head[zero[u]], j + 1, chosen))
    return out


def dump(d: DecisionDiagram) -> str:
    """Text dump: ``node <id> <layer> <hex>`` lines then ``arc <tail> <head> <label>``."""
    lay = d.layer_of()
    lines = []
    for u in range(d.node_count):
        mask = 0
        for w, word in enumerate(d.states[u].tolist()):
            mask |= int(word) << (64 * w)
        lines.append(f"node {u} {int(lay[u]) + 1} {mask:x}")
    for a in range(d.arc_count):
        lines.append(f"arc {int(d.arc_tail[a])} {int(d.arc_head[a])} {int(d.arc_label[a])}")
    return "\n".join(lines) + "\n"


def load(text: str, ordering) -> DecisionDiagram:
    """Inverse of :func:`dump`; nodes must be listed layer by layer."""
    layers: list[int] = []
    masks: list[int] = []
    tails, heads, labels = [], [], []
    for line in text.splitlines():
        tok = line.split()
        if not tok:
            continue
        if tok[0] == "node":
            if int(tok[1]) != len(layers):
                raise ValueError(f"node ids must be dense, got {tok[1]}")
            layers.append(int(tok[2]))
            masks.append(int(tok[3], 16))
        elif tok[0] == "arc":
            tails.append(int(tok[1]))
            heads.append(int(tok[2]))
            labels.append(int(tok[3]))
        else:
            raise ValueError(f"bad dump line {line!r}")
    ordering = np.asarray(ordering, dtype=np.int64)
    n = len(ordering)
    if any(b < a for a, b in zip(layers, layers[1:])):
        raise ValueError("nodes not sorted by layer")
    counts = np.bincount(np.asarray(layers, dtype=np.int64) - 1, minlength=n + 1)
    if len(counts) != n + 1:
        raise ValueError("layer index out of range for ordering")
    layer_start = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
    words = max(1, (n + 63) // 64)
    states = np.zeros((len(masks), words), dtype=np.uint64)
    for i, m in enumerate(masks):
        for w in range(words):
            states[i, w] = (m >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
    return DecisionDiagram(
        ordering, layer_start, states,
        np.asarray(tails, dtype=np.int64), np.asarray(heads, dtype=np.int64),
        np.asarray(labels, dtype=np.int8),
    )


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)
    path_count: int | None = None
    semantic_checked: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self):
        if self.ok:
            return f"ok (paths={self.path_count}, semantic={'yes' if self.semantic_checked else 'skipped'})"
        return "\n".join(self.violations)


def validate(d: DecisionDiagram, g: Graph, semantic_cap: int = 1 << 16) -> ValidationReport:
    """Structural checks, plus stable-set exactness when the path count is at most ``semantic_cap``."""
    from ddfrac.oracle import count_stable_sets

    rep = ValidationReport()
    v = rep.violations
    n = d.n
    if n != g.n:
        v.append(f"diagram has {n} decision layers, graph has {g.n} vertices")
    if sorted(d.ordering.tolist()) != list(range(n)):
        v.append("ordering is not a permutation")
    sizes = d.layer_sizes()
    if sizes[0] != 1:
        v.append(f"root layer has {sizes[0]} nodes")
    if sizes[-1] != 1:
        v.append(f"terminal layer has {sizes[-1]} nodes")
    if v:
        return rep

    lay = d.layer_of()
    tail, head, label = d.arc_tail, d.arc_head, d.arc_label
    bad = np.nonzero(lay[head] != lay[tail] + 1)[0]
    for a in bad[:10].tolist():
        v.append(f"arc {a} skips layers ({int(lay[tail[a]]) + 1} -> {int(lay[head[a]]) + 1})")

    # reducedness
    for j in range(n + 1):
        seen: dict[bytes, int] = {}
        for u in d.layer_nodes(j):
            key = d.states[u].tobytes()
            if key in seen:
                v.append(f"layer {j + 1}: nodes {seen[key]} and {u} share state")
            else:
                seen[key] = u

    # degree rule
    zeros = np.bincount(tail[label == 0], minlength=d.node_count)
    ones = np.bincount(tail[label == 1], minlength=d.node_count)
    for u in range(d.node_count - 1):
        if zeros[u] != 1:
            v.append(f"node {u} has {zeros[u]} outgoing 0-arcs")
        if ones[u] > 1:
            v.append(f"node {u} has {ones[u]} outgoing 1-arcs")
    if zeros[-1] or ones[-1]:
        v.append("terminal has outgoing arcs")

    # every node on some r-t path
    fwd = np.zeros(d.node_count, dtype=bool)
    fwd[0] = True
    bwd = np.zeros(d.node_count, dtype=bool)
    bwd[d.terminal] = True
    t_l, h_l = tail.tolist(), head.tolist()
    for a in range(d.arc_count):
        if fwd[t_l[a]]:
            fwd[h_l[a]] = True
    for a in range(d.arc_count - 1, -1, -1):
        if bwd[h_l[a]]:
            bwd[t_l[a]] = True
    for u in np.nonzero(~(fwd & bwd))[0][:10].tolist():
        v.append(f"node {u} not on any r-t path")

    if v:
        return rep
    rep.path_count = count_paths(d)
    if rep.path_count <= semantic_cap:
        rep.semantic_checked = True
        paths = enumerate_paths(d, semantic_cap)
        if len(set(paths)) != len(paths):
            v.append("two r-t paths encode the same vertex set")
        for s in paths:
            if not g.is_stable(s):
                v.append(f"path encodes non-stable set {sorted(x + 1 for x in s)}")
                break
        expected = count_stable_sets(g)
        if expected != rep.path_count:
            v.append(f"path count {rep.path_count} != stable-set count {expected}")
    return rep
