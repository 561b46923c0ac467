"""Layer expansion kernels for top-down stable-set DD compilation.

A layer is a ``(k, W)`` uint64 array of eligible-vertex bitsets. Expanding it
on vertex ``v`` produces the deduplicated child layer plus, for every parent
row, the child index reached by its 0-arc and 1-arc (``-1`` when absent).

Children are numbered in first-occurrence order (parent 0's 0-child, parent
0's 1-child, parent 1's 0-child, ...) so both backends yield identical
diagrams. Set ``DDFRAC_DISABLE_NUMBA=1`` to force the numpy backend.
"""
from __future__ import annotations

import os

import numpy as np

__all__ = ["expand_layer", "expand_layer_numpy", "BACKEND", "NUMBA_AVAILABLE"]


def expand_layer_numpy(states: np.ndarray, word: int, bit: int, clear: np.ndarray):
    k, w = states.shape
    vbit = np.uint64(1) << np.uint64(bit)
    has = (states[:, word] & vbit) != 0
    # slot of each parent's 0-child in the interleaved candidate list
    nhas = np.cumsum(has) - has
    zpos = np.arange(k) + nhas
    opos = zpos[has] + 1
    cand = np.empty((k + int(has.sum()), w), dtype=np.uint64)
    cand[zpos] = states
    cand[zpos, word] &= ~vbit
    cand[opos] = states[has] & ~clear
    if cand.shape[0] == 0:
        return cand, np.empty(0, np.int64), np.empty(0, np.int64)
    rows = np.ascontiguousarray(cand).view(np.dtype((np.void, 8 * w))).ravel()
    _, first, inv = np.unique(rows, return_index=True, return_inverse=True)
    order = np.argsort(first, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    inv = rank[inv.ravel()]
    children = cand[first[order]]
    zero_head = inv[zpos].astype(np.int64)
    one_head = np.full(k, -1, dtype=np.int64)
    one_head[has] = inv[opos]
    return children, zero_head, one_head


try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba
    NUMBA_AVAILABLE = False


if NUMBA_AVAILABLE:

    @njit(cache=True)
    def _row_hash(row):
        h = np.uint64(0xCBF29CE484222325)
        for x in row:
            z = x + np.uint64(0x9E3779B97F4A7C15)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
            z = z ^ (z >> np.uint64(31))
            h = (h ^ z) * np.uint64(0x100000001B3)
        return h

    @njit(cache=True)
    def _intern(row, out, count, table, mask):
        h = _row_hash(row) & mask
        w = row.shape[0]
        while True:
            slot = table[h]
            if slot < 0:
                for c in range(w):
                    out[count, c] = row[c]
                table[h] = count
                return count, count + 1
            same = True
            for c in range(w):
                if out[slot, c] != row[c]:
                    same = False
                    break
            if same:
                return slot, count
            h = (h + np.uint64(1)) & mask

    @njit(cache=True)
    def _expand_layer_nb(states, word, bit, clear):
        k, w = states.shape
        vbit = np.uint64(1) << np.uint64(bit)
        cap = 16
        while cap < 4 * k:
            cap *= 2
        table = np.full(cap, -1, dtype=np.int64)
        mask = np.uint64(cap - 1)
        out = np.empty((2 * k, w), dtype=np.uint64)
        zero_head = np.empty(k, dtype=np.int64)
        one_head = np.full(k, -1, dtype=np.int64)
        tmp = np.empty(w, dtype=np.uint64)
        count = 0
        for i in range(k):
            for c in range(w):
                tmp[c] = states[i, c]
            has = (tmp[word] & vbit) != np.uint64(0)
            tmp[word] = tmp[word] & ~vbit
            idx, count = _intern(tmp, out, count, table, mask)
            zero_head[i] = idx
            if has:
                for c in range(w):
                    tmp[c] = states[i, c] & ~clear[c]
                idx, count = _intern(tmp, out, count, table, mask)
                one_head[i] = idx
        return out[:count].copy(), zero_head, one_head

    def expand_layer_numba(states, word, bit, clear):
        return _expand_layer_nb(
            np.ascontiguousarray(states, dtype=np.uint64), word, bit,
            np.ascontiguousarray(clear, dtype=np.uint64),
        )
else:  # pragma: no cover
    expand_layer_numba = None


def _select_backend() -> str:
    flag = os.environ.get("DDFRAC_DISABLE_NUMBA", "").strip().lower()
    if NUMBA_AVAILABLE and flag not in ("1", "true", "yes", "on"):
        return "numba"
    return "numpy"


BACKEND = _select_backend()


def expand_layer(states, word, bit, clear, backend: str | None = None):
    b = backend or BACKEND
    if b == "numba":
        if expand_layer_numba is None:
            raise RuntimeError("numba backend requested but numba is not importable")
        return expand_layer_numba(states, word, bit, clear)
    if b == "numpy":
        return expand_layer_numpy(states, word, bit, clear)
    raise ValueError(f"unknown backend {b!r}")
