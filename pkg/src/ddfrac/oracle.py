"""Brute-force ground truth for small graphs.

Stable sets are enumerated directly; the fractional chromatic number comes
from the set-cover LP over maximal stable sets; the chromatic number from
iterative-deepening backtracking. None of this touches decision diagrams.
"""
from __future__ import annotations

from fractions import Fraction

from ddfrac.graph import Graph
from ddfrac.ratlp import LpModel, LpStatus, Relation, lp_solve

MAX_ENUM_N = 30
MAX_COLOR_N = 20


class OracleGuardError(ValueError):
    pass


def _stable_dfs(g: Graph, maximal_only: bool):
    n = g.n
    nbr = g.neighbor_masks()
    full = (1 << n) - 1
    # (next vertex to consider, chosen, blocked = chosen + neighbours)
    stack = [(0, (), 0)]
    while stack:
        start, chosen, blocked = stack.pop()
        if not maximal_only or blocked == full:
            yield chosen
        # push in reverse so smaller vertices are expanded first
        for v in range(n - 1, start - 1, -1):
            if not (blocked >> v) & 1:
                stack.append((v + 1, chosen + (v,), blocked | nbr[v] | (1 << v)))


def enumerate_stable_sets(g: Graph, maximal_only: bool = False) -> list[frozenset[int]]:
    """All (or all inclusion-maximal) stable sets in lexicographic order of sorted tuples."""
    if g.n > MAX_ENUM_N:
        raise OracleGuardError(f"n={g.n} exceeds enumeration guard {MAX_ENUM_N}")
    return [frozenset(s) for s in _stable_dfs(g, maximal_only)]


def count_stable_sets(g: Graph) -> int:
    if g.n > MAX_ENUM_N:
        raise OracleGuardError(f"n={g.n} exceeds enumeration guard {MAX_ENUM_N}")
    return sum(1 for _ in _stable_dfs(g, False))


def vclp_model(g: Graph, maximal_only: bool = True) -> tuple[LpModel, list[frozenset[int]]]:
    sets = enumerate_stable_sets(g, maximal_only)
    if not maximal_only:
        sets = [s for s in sets if s]
    lp = LpModel(name=f"VCLP_{g.name or 'graph'}")
    for k, s in enumerate(sets):
        lp.add_var(0, 1, 1, name=f"z{k}")
    member: list[dict[int, int]] = [{} for _ in range(g.n)]
    for k, s in enumerate(sets):
        for v in s:
            member[v][k] = 1
    for v in range(g.n):
        lp.add_row(member[v], Relation.GE, 1, name=f"cover_v{v + 1}")
    return lp, sets


def vclp_solve(g: Graph, maximal_only: bool = True) -> Fraction:
    """Fractional chromatic number as an exact rational."""
    return vclp_basic_cover(g, maximal_only)[0]


def vclp_basic_cover(g: Graph, maximal_only: bool = True):
    """``(chi_f, [(set, weight), ...])`` from a basic optimum of the set-cover LP."""
    lp, sets = vclp_model(g, maximal_only)
    sol = lp_solve(lp, warm_start=None)
    if sol.status is not LpStatus.OPTIMAL:  # pragma: no cover - always feasible and bounded
        raise RuntimeError(f"VCLP not optimal: {sol.status.value}")
    support = [(sets[k], v) for k, v in enumerate(sol.values) if v > 0]
    return sol.objective, support


def greedy_clique(g: Graph) -> list[int]:
    best: list[int] = []
    for start in range(g.n):
        clique = [start]
        cand = set(g.neighbors(start))
        while cand:
            v = max(cand, key=lambda u: (len(cand.intersection(g.neighbors(u))), -u))
            clique.append(v)
            cand &= set(g.neighbors(v))
        if len(clique) > len(best):
            best = clique
    return best


def _k_colorable(g: Graph, k: int) -> bool:
    n = g.n
    order = sorted(range(n), key=lambda v: (-g.degree(v), v))
    colors = [-1] * n
    adj = g.adjacency

    def place(i: int, used: int) -> bool:
        if i == n:
            return True
        v = order[i]
        taken = {colors[u] for u in adj[v] if colors[u] >= 0}
        # symmetry: a fresh colour is only ever the next unused one
        for c in range(min(used + 1, k)):
            if c not in taken:
                colors[v] = c
                if place(i + 1, max(used, c + 1)):
                    return True
        colors[v] = -1
        return False

    return place(0, 0)


def chromatic_number_bf(g: Graph) -> int:
    if g.n > MAX_COLOR_N:
        raise OracleGuardError(f"n={g.n} exceeds coloring guard {MAX_COLOR_N}")
    if g.n == 0:
        return 0
    k = max(1, len(greedy_clique(g)))
    while not _k_colorable(g, k):
        k += 1
    return k
