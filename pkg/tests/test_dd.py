from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddfrac.dd import (
    DecisionDiagram,
    NodeLimitExceeded,
    PathLimitExceeded,
    compile_exact,
    count_paths,
    dump,
    enumerate_paths,
    load,
    validate,
)
from ddfrac.graph import Graph, make_complete, make_empty, make_gnp, make_queen


def _subsets_stable(g):
    """Brute force over all 2^n subsets."""
    out = set()
    for k in range(g.n + 1):
        for s in combinations(range(g.n), k):
            if all(not g.has_edge(u, v) for u, v in combinations(s, 2)):
                out.add(frozenset(s))
    return out


def test_diamond_structure(diamond):
    d = compile_exact(diamond)
    assert d.layer_sizes() == [1, 2, 3, 2, 1]
    assert d.node_count == 9 and d.arc_count == 12
    one_based = lambda s: {v + 1 for v in s}  # noqa: E731
    states = [[one_based(d.state_set(u)) for u in d.layer_nodes(j)] for j in range(5)]
    assert states[0] == [{1, 2, 3, 4}]
    assert sorted(map(sorted, states[1])) == [[2, 3, 4], [4]]
    assert sorted(map(sorted, states[2])) == [[], [3, 4], [4]]
    assert sorted(map(sorted, states[3])) == [[], [4]]
    assert states[4] == [set()]


def test_diamond_paths_match_subset_enumeration(diamond):
    d = compile_exact(diamond)
    expected = _subsets_stable(diamond)  # {}, {1}, {2}, {3}, {4}, {1,4} in 1-based ids
    assert expected == {frozenset(), frozenset({0}), frozenset({1}), frozenset({2}), frozenset({3}),
                        frozenset({0, 3})}
    assert count_paths(d) == 6
    paths = enumerate_paths(d, 100)
    assert len(paths) == len(set(paths)) == 6
    assert set(paths) == expected


def test_edgeless_three():
    d = compile_exact(make_empty(3))
    assert d.layer_sizes() == [1, 1, 1, 1]
    assert all(d.zero_arc[u] >= 0 and d.one_arc[u] >= 0 for u in range(3))
    assert count_paths(d) == 8


def test_small_counts_and_enumerations():
    assert count_paths(compile_exact(make_complete(4))) == 5
    k3 = enumerate_paths(compile_exact(make_complete(3)), 10)
    assert set(k3) == {frozenset(), frozenset({0}), frozenset({1}), frozenset({2})}
    e2 = enumerate_paths(compile_exact(make_empty(2)), 10)
    assert set(e2) == {frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1})}


def test_enumerate_limit():
    with pytest.raises(PathLimitExceeded):
        enumerate_paths(compile_exact(make_empty(4)), 15)


def test_validate_accepts_compiled(diamond):
    rep = validate(compile_exact(diamond), diamond)
    assert rep.ok and rep.semantic_checked and rep.path_count == 6


def _rebuild(d: DecisionDiagram, states, tails, heads, labels, layer_start=None) -> DecisionDiagram:
    return DecisionDiagram(
        d.ordering, d.layer_start if layer_start is None else layer_start, states,
        np.asarray(tails, dtype=np.int64), np.asarray(heads, dtype=np.int64), np.asarray(labels, dtype=np.int8),
    )


def test_validate_flags_equal_states(diamond):
    d = compile_exact(diamond)
    states = d.states.copy()
    # layer 3 nodes are 3,4,5; make node 5's state equal to node 3's
    states[5] = states[3]
    bad = _rebuild(d, states, d.arc_tail, d.arc_head, d.arc_label)
    rep = validate(bad, diamond)
    assert not rep.ok
    assert any("share state" in v for v in rep.violations)


def test_validate_flags_dangling_node(diamond):
    d = compile_exact(diamond)
    # insert an extra node on layer 3 with no incoming arc
    ls = d.layer_start.copy()
    insert_at = int(ls[3])
    states = np.insert(d.states, insert_at, np.array([[0b0010]], dtype=np.uint64), axis=0)
    ls[3:] += 1
    remap = lambda u: u + 1 if u >= insert_at else u  # noqa: E731
    tails = [remap(t) for t in d.arc_tail.tolist()]
    heads = [remap(h) for h in d.arc_head.tolist()]
    labels = d.arc_label.tolist()
    # its 0-arc keeps the degree rule intact; only reachability is broken
    tails.append(insert_at)
    heads.append(int(ls[3]))
    labels.append(0)
    order = np.lexsort((labels, tails))
    bad = _rebuild(d, states, np.asarray(tails)[order], np.asarray(heads)[order], np.asarray(labels)[order], ls)
    rep = validate(bad, diamond)
    assert not rep.ok
    assert any("not on any r-t path" in v for v in rep.violations)


def test_validate_flags_missing_zero_arc(diamond):
    d = compile_exact(diamond)
    keep = np.ones(d.arc_count, dtype=bool)
    keep[int(d.zero_arc[1])] = False
    bad = _rebuild(d, d.states, d.arc_tail[keep], d.arc_head[keep], d.arc_label[keep])
    rep = validate(bad, diamond)
    assert any("0-arcs" in v for v in rep.violations)


def test_dump_load_round_trip(diamond):
    d = compile_exact(diamond)
    text = dump(d)
    assert text.splitlines()[0] == "node 0 1 f"
    assert "arc 0 1 0" in text
    back = load(text, d.ordering)
    assert dump(back) == text


def test_node_limit_and_empty_graph():
    g = make_queen(5, 5)
    with pytest.raises(NodeLimitExceeded) as err:
        compile_exact(g, node_limit=10)
    assert err.value.nodes > 10 and err.value.layer >= 2
    with pytest.raises(ValueError):
        compile_exact(Graph(0, frozenset()))


def test_orderings_are_permutations(diamond):
    for kind in ("identity", "degree", "reverse"):
        d = compile_exact(diamond, kind)
        assert sorted(d.ordering.tolist()) == [0, 1, 2, 3]
    with pytest.raises(ValueError):
        compile_exact(diamond, [0, 0, 1, 2])


graphs = st.builds(
    make_gnp,
    st.integers(1, 16),
    st.sampled_from([Fraction(1, 5), Fraction(1, 2), Fraction(4, 5)]),
    st.integers(0, 10**6),
)


@settings(max_examples=40, deadline=None)
@given(graphs)
def test_exactness_against_subset_enumeration(g):
    d = compile_exact(g)
    assert set(enumerate_paths(d, 1 << 17)) == _subsets_stable(g)


@settings(max_examples=40, deadline=None)
@given(graphs, st.sampled_from(["degree", "reverse"]), st.integers(0, 2**32 - 1))
def test_structure_and_ordering_invariance(g, kind, perm_seed):
    d = compile_exact(g)
    rep = validate(d, g, semantic_cap=0)
    assert rep.ok, rep.violations
    perm = np.random.default_rng(perm_seed).permutation(g.n)
    for other in (compile_exact(g, kind), compile_exact(g, perm)):
        assert count_paths(other) == count_paths(d)
        assert validate(other, g, semantic_cap=0).ok


@settings(max_examples=20, deadline=None)
@given(graphs)
def test_monotone_node_limit(g):
    d = compile_exact(g)
    compile_exact(g, node_limit=d.node_count)
    compile_exact(g, node_limit=d.node_count + 5)
    if d.node_count > 1:
        with pytest.raises(NodeLimitExceeded):
            compile_exact(g, node_limit=d.node_count - 1)
