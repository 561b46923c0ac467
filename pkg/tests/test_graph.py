from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddfrac.graph import (
    DimacsParseError,
    Graph,
    make_complete,
    make_cycle,
    make_gnp,
    make_myciel,
    make_petersen,
    make_queen,
    parse_dimacs,
    write_dimacs,
)


def test_parse_basic():
    g = parse_dimacs("p edge 3 2\ne 1 2\ne 2 3")
    assert g.n == 3
    assert g.edges == {(0, 1), (1, 2)}


def test_parse_merges_duplicates_and_orientation():
    g = parse_dimacs("c hi\np edge 2 2\ne 1 2\ne 2 1")
    assert g.n == 2 and g.edges == {(0, 1)}


def test_parse_accepts_p_col_blank_lines_and_bytes():
    g = parse_dimacs(b"p col 3 1  \n\n e 3 1 \n\n")
    assert g.edges == {(0, 2)}


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("e 1 2\n", 1),
        ("p edge 2 1\np edge 2 1\n", 2),
        ("p edge 2 1\ne 1 3\n", 2),
        ("p edge 2 1\ne 2 2\n", 2),
        ("p edge 2 1\ne 1 x\n", 2),
        ("p edge 2 1\nq 1 2\n", 2),
        ("p edge two 1\n", 1),
    ],
)
def test_parse_errors_name_the_line(text, lineno):
    with pytest.raises(DimacsParseError) as err:
        parse_dimacs(text)
    assert err.value.lineno == lineno
    assert f"line {lineno}" in str(err.value)


def test_parse_missing_problem_line():
    with pytest.raises(DimacsParseError, match="missing problem line"):
        parse_dimacs("c only a comment\n")


def test_declared_edge_count_mismatch_only_warns(caplog):
    g = parse_dimacs("p edge 3 7\ne 1 2\n")
    assert g.m == 1
    assert "declared 7 edges" in caplog.text


def test_writer_is_canonical():
    g = Graph.from_edges(3, [(2, 0), (1, 0)])
    assert write_dimacs(g) == "p edge 3 2\ne 1 2\ne 1 3\n"


def test_generators():
    c5 = make_cycle(5)
    assert (c5.n, c5.m) == (5, 5) and all(c5.degree(v) == 2 for v in range(5))
    assert make_complete(4).m == 6
    p = make_petersen()
    assert (p.n, p.m) == (10, 15) and all(p.degree(v) == 3 for v in range(10))


def test_benchmark_generators_match_dimacs_sizes():
    # myciel3: 11/20, myciel4: 23/71, queen5_5: 25 vertices / 160 edges, queen6_6: 36/290
    assert (make_myciel(3).n, make_myciel(3).m) == (11, 20)
    assert (make_myciel(4).n, make_myciel(4).m) == (23, 71)
    assert (make_queen(5, 5).n, make_queen(5, 5).m) == (25, 160)
    assert (make_queen(6, 6).n, make_queen(6, 6).m) == (36, 290)


def test_myciel3_edge_list_matches_benchmark_file():
    expected = """e 1 2\ne 1 4\ne 1 7\ne 1 9\ne 2 3\ne 2 6\ne 2 8\ne 3 5\ne 3 7\ne 3 10
e 4 5\ne 4 6\ne 4 10\ne 5 8\ne 5 9\ne 6 11\ne 7 11\ne 8 11\ne 9 11\ne 10 11"""
    assert parse_dimacs("p edge 11 20\n" + expected).edges == make_myciel(3).edges


def test_myciel3_file_parses(tmp_path):
    from conftest import DATA

    g = parse_dimacs((DATA / "myciel3.col").read_bytes())
    assert (g.n, g.m) == (11, 20)


def test_gnp_is_reproducible():
    a = make_gnp(12, Fraction(1, 2), 7)
    b = make_gnp(12, Fraction(1, 2), 7)
    assert a.edges == b.edges
    assert make_gnp(12, 0, 3).m == 0
    assert make_gnp(6, 1, 3).m == 15


def test_bad_generator_arguments():
    with pytest.raises(ValueError):
        make_cycle(0)
    with pytest.raises(ValueError):
        make_gnp(4, Fraction(3, 2), 0)
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(1, 1)])


graphs = st.builds(
    make_gnp,
    st.integers(1, 14),
    st.sampled_from([Fraction(1, 5), Fraction(1, 2), Fraction(4, 5)]),
    st.integers(0, 10**6),
)


@settings(max_examples=60, deadline=None)
@given(graphs)
def test_round_trip_and_symmetry(g):
    back = parse_dimacs(write_dimacs(g))
    assert (back.n, back.edges) == (g.n, g.edges)
    for v in range(g.n):
        assert v not in g.neighbors(v)
        for u in g.neighbors(v):
            assert v in g.neighbors(u)
