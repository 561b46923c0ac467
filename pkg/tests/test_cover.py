from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddfrac.cover import Coloring, UncoveredVertex, dsatur, extract_coloring, verify_cover
from ddfrac.flow import WeightedCover
from ddfrac.graph import make_complete, make_cycle, make_empty, make_gnp, make_myciel
from ddfrac.oracle import chromatic_number_bf


def _z(*pairs):
    return WeightedCover([(frozenset(v - 1 for v in s), F(w)) for s, w in pairs])


def test_diamond_cover_passes(diamond):
    rep = verify_cover(diamond, _z(({1, 4}, 1), ({2}, 1), ({3}, 1)))
    assert rep.ok and rep.total == 3


def test_unstable_set_fails(diamond):
    rep = verify_cover(diamond, _z(({2, 3}, 1)))
    assert not rep.stable
    assert any("edge 2-3" in p for p in rep.problems)


def test_undercovered_vertex(diamond):
    rep = verify_cover(diamond, _z(({1, 4}, F(1, 2)), ({2}, 1), ({3}, 1), ({1}, F(1, 3))))
    assert rep.stable and not rep.covered
    assert any("vertex 1" in p for p in rep.problems)


def test_duplicates_merge_before_checking():
    rep = verify_cover(make_empty(1), _z(({1}, F(1, 2)), ({1}, F(1, 2))))
    assert rep.ok and rep.total == 1 and len(rep.merged) == 1


def test_extract_coloring(diamond):
    col = extract_coloring(diamond, _z(({1, 4}, 1), ({2}, 1), ({3}, 1)))
    assert col.is_proper(diamond) and col.num_colors == 3
    assert col.colors == (0, 1, 2, 0)
    assert col.dumps().splitlines()[:2] == ["c colors 3", "s 1 1"]
    g = make_empty(4)
    assert extract_coloring(g, _z(({1, 2, 3, 4}, 1))).num_colors == 1


def test_extract_coloring_compacts_and_rejects():
    g = make_empty(2)
    # the first set is overshadowed entirely; colour ids stay contiguous
    col = extract_coloring(g, _z(({1}, 1), ({1}, 1), ({2}, 1)))
    assert col.colors == (0, 1)
    with pytest.raises(UncoveredVertex):
        extract_coloring(g, _z(({1}, 1)))
    with pytest.raises(ValueError):
        extract_coloring(g, _z(({1, 2}, F(1, 2))))


def test_dsatur_examples():
    assert dsatur(make_complete(4)).num_colors == 4
    assert dsatur(make_cycle(5)).num_colors == 3
    assert dsatur(make_myciel(3)).num_colors == 4
    assert dsatur(make_empty(3)).colors == (0, 0, 0)


def _reference_dsatur(g):
    colors = {}
    while len(colors) < g.n:
        def key(v):
            sat = len({colors[u] for u in g.neighbors(v) if u in colors})
            free = sum(1 for u in g.neighbors(v) if u not in colors)
            return (-sat, -free, v)

        v = min((v for v in range(g.n) if v not in colors), key=key)
        used = {colors[u] for u in g.neighbors(v) if u in colors}
        colors[v] = next(c for c in range(g.n) if c not in used)
    return [colors[v] for v in range(g.n)]


def _same_partition(a, b):
    return all((a[u] == a[v]) == (b[u] == b[v]) for u in range(len(a)) for v in range(len(a)))


def test_dsatur_star():
    from ddfrac.graph import Graph

    # centre first, leaves share the other colour
    g = Graph.from_edges(4, [(2, 0), (2, 1), (2, 3)])
    assert dsatur(g).colors == (0, 0, 1, 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 14), st.sampled_from([F(1, 5), F(1, 2), F(4, 5)]), st.integers(0, 10**6))
def test_dsatur_follows_tie_rule(n, p, seed):
    g = make_gnp(n, p, seed)
    assert _same_partition(list(dsatur(g).colors), _reference_dsatur(g))


def test_coloring_checks(diamond):
    assert Coloring((0, 0, 1, 2)).conflicts(diamond) == [(0, 1)]
    assert not Coloring((0, 1)).is_proper(diamond)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.sampled_from([F(1, 5), F(1, 2), F(4, 5)]), st.integers(0, 10**6))
def test_dsatur_is_proper_upper_bound(n, p, seed):
    g = make_gnp(n, p, seed)
    col = dsatur(g)
    assert col.is_proper(g)
    assert col.num_colors >= chromatic_number_bf(g)
    assert sorted(set(col.colors)) == list(range(col.num_colors))
