from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from ddfrac.dd._kernels import expand_layer
from ddfrac.dd.diagram import DecisionDiagram
from ddfrac.graph import Graph

logger = logging.getLogger(__name__)

DEFAULT_NODE_LIMIT = 2_000_000

ORDERINGS = ("identity", "degree", "reverse")


class NodeLimitExceeded(RuntimeError):
    def __init__(self, layer: int, nodes: int, limit: int):
        self.layer = layer
        self.nodes = nodes
        self.limit = limit
        super().__init__(f"node limit {limit} exceeded at layer {layer} ({nodes} nodes)")


def make_ordering(g: Graph, kind: str = "identity") -> np.ndarray:
    if kind == "identity":
        order = list(range(g.n))
    elif kind == "reverse":
        order = list(range(g.n - 1, -1, -1))
    elif kind == "degree":
        order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    else:
        raise ValueError(f"unknown ordering {kind!r}; choose from {ORDERINGS}")
    return np.asarray(order, dtype=np.int64)


def _bitset_rows(masks: Sequence[int], words: int) -> np.ndarray:
    out = np.zeros((len(masks), words), dtype=np.uint64)
    for i, m in enumerate(masks):
        for w in range(words):
            out[i, w] = (m >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
    return out


def compile_exact(
    g: Graph,
    ordering: Sequence[int] | str | None = None,
    node_limit: int = DEFAULT_NODE_LIMIT,
    backend: str | None = None,
) -> DecisionDiagram:
    """Top-down compilation of the exact reduced stable-set diagram of ``g``.

    The root state is all of ``V``. On layer ``j`` (vertex ``v``) the 0-arc
    drops ``v`` from the state and the 1-arc, present only when ``v`` is
    eligible, drops ``v`` and its neighbours. Equal states on a layer are
    merged. The node budget is checked after each completed layer.
    """
    if g.n == 0:
        raise ValueError("cannot compile a diagram for the empty graph")
    if node_limit < 1:
        raise ValueError("node_limit must be >= 1")
    if ordering is None:
        ordering = "identity"
    order = make_ordering(g, ordering) if isinstance(ordering, str) else np.asarray(ordering, dtype=np.int64)
    if sorted(order.tolist()) != list(range(g.n)):
        raise ValueError("ordering must be a permutation of the vertices")

    n = g.n
    words = (n + 63) // 64
    closed = _bitset_rows([m | (1 << v) for v, m in enumerate(g.neighbor_masks())], words)
    root = _bitset_rows([(1 << n) - 1], words)

    layers = [root]
    tails, heads, labels = [], [], []
    offset = 0
    total = 1
    if total > node_limit:
        raise NodeLimitExceeded(1, total, node_limit)
    cur = root
    for j in range(n):
        v = int(order[j])
        children, zero_head, one_head = expand_layer(cur, v // 64, v % 64, closed[v], backend)
        k = cur.shape[0]
        nxt = offset + k
        has = one_head >= 0
        # interleave: per tail, 0-arc then 1-arc
        cnt = 1 + has.astype(np.int64)
        t = np.repeat(np.arange(offset, nxt, dtype=np.int64), cnt)
        lab = np.zeros(t.size, dtype=np.int8)
        first = np.cumsum(cnt) - cnt
        lab[first[has] + 1] = 1
        h = np.empty(t.size, dtype=np.int64)
        h[first] = zero_head + nxt
        h[first[has] + 1] = one_head[has] + nxt
        tails.append(t)
        heads.append(h)
        labels.append(lab)
        offset = nxt
        total += children.shape[0]
        if total > node_limit:
            raise NodeLimitExceeded(j + 2, total, node_limit)
        layers.append(children)
        cur = children
    if layers[-1].shape[0] != 1:
        raise AssertionError("terminal layer must collapse to a single node")
    layers[-1][:] = 0

    layer_start = np.zeros(n + 2, dtype=np.int64)
    layer_start[1:] = np.cumsum([l.shape[0] for l in layers])
    d = DecisionDiagram(
        ordering=order,
        layer_start=layer_start,
        states=np.vstack(layers),
        arc_tail=np.concatenate(tails),
        arc_head=np.concatenate(heads),
        arc_label=np.concatenate(labels),
    )
    logger.debug("compiled %s: %d nodes, %d arcs", g.name or "graph", d.node_count, d.arc_count)
    return d
