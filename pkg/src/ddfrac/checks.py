"""Cross-checks between the diagram route and the brute-force oracle."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ddfrac.cover import extract_coloring, verify_cover
from ddfrac.dd import compile_exact, count_paths
from ddfrac.flow import (
    WeightedCover,
    conservation_violations,
    cover_to_flow,
    flow_to_cover,
    positive_support,
    solve_fractional,
    solve_integral,
)
from ddfrac.graph import Graph, make_gnp
from ddfrac.oracle import MAX_COLOR_N, chromatic_number_bf, count_stable_sets, vclp_basic_cover

EDGE_PROBS = (Fraction(1, 5), Fraction(1, 2), Fraction(4, 5))


@dataclass
class GraphCheck:
    graph: Graph
    chi_f: Fraction | None = None
    chi_f_oracle: Fraction | None = None
    chi: int | None = None
    chi_oracle: int | None = None
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_graph(g: Graph, ordering: str = "identity") -> GraphCheck:
    """Run every diagram-vs-oracle invariant on one graph."""
    res = GraphCheck(g)
    fail = res.failures
    d = compile_exact(g, ordering)

    paths = count_paths(d)
    stable = count_stable_sets(g)
    if paths != stable:
        fail.append(f"path count {paths} != stable-set count {stable}")

    frac = solve_fractional(d, g)
    res.chi_f = frac.chi_f
    oracle_val, support = vclp_basic_cover(g)
    res.chi_f_oracle = oracle_val
    if frac.chi_f != oracle_val:
        fail.append(f"flow relaxation {frac.chi_f} != set-cover LP {oracle_val}")

    # cover -> flow: feasible for the relaxation, same objective, support <= n^2
    z = WeightedCover(list(support))
    y = cover_to_flow(z, d)
    if conservation_violations(y, d):
        fail.append("cover_to_flow broke conservation")
    root_out = sum((y[a] for a in d.arcs_out_of(d.root)), Fraction(0))
    if root_out != z.total:
        fail.append(f"cover_to_flow objective {root_out} != cover weight {z.total}")
    if positive_support(y) > g.n * g.n:
        fail.append(f"support {positive_support(y)} exceeds n^2={g.n * g.n}")
    back = flow_to_cover(y, d)
    if back.total != z.total:
        fail.append(f"round trip weight {back.total} != {z.total}")
    if not verify_cover(g, back).ok:
        fail.append("decomposed oracle cover fails verification")

    # relaxation optimum decomposes into a feasible cover of the same weight
    zf = flow_to_cover(frac.flow, d)
    if zf.total != frac.chi_f or not verify_cover(g, zf).ok:
        fail.append("decomposition of the optimal relaxed flow is not a valid cover of equal weight")
    if len(zf) > d.arc_count:
        fail.append("decomposition used more paths than arcs")

    integral = solve_integral(d, g)
    res.chi = integral.chi
    if integral.chi < math.ceil(frac.chi_f):
        fail.append(f"chi {integral.chi} < ceil(chi_f) = {math.ceil(frac.chi_f)}")
    if frac.chi_f.denominator != 1 and integral.chi <= frac.chi_f:
        fail.append("chi <= chi_f although chi_f is fractional")
    zi = flow_to_cover(integral.flow, d)
    rep = verify_cover(g, zi)
    if not rep.ok or rep.total != integral.chi:
        fail.append("integral flow does not decompose into a cover of size chi")
    else:
        col = extract_coloring(g, zi)
        if not col.is_proper(g) or col.num_colors > integral.chi:
            fail.append("extracted coloring improper or too large")
    if g.n <= MAX_COLOR_N:
        res.chi_oracle = chromatic_number_bf(g)
        if res.chi_oracle != integral.chi:
            fail.append(f"integral flow {integral.chi} != brute-force chi {res.chi_oracle}")
    return res


def random_trials(max_n: int, trials: int, seed: int, min_n: int = 4):
    """Deterministic stream of ``(index, n, p, graph_seed, graph)``."""
    rng = np.random.Generator(np.random.PCG64(seed))
    for i in range(trials):
        n = int(rng.integers(min_n, max_n + 1))
        p = EDGE_PROBS[int(rng.integers(0, len(EDGE_PROBS)))]
        gseed = int(rng.integers(0, 2**31 - 1))
        yield i, n, p, gseed, make_gnp(n, p, gseed)
