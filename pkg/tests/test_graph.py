import math

import pytest
from hypothesis import given, settings, strategies as st

from lbcut.errors import ParseError
from lbcut.graph import (
    INFINITE,
    CutInstance,
    Graph,
    all_pairs_distances,
    bfs_distances,
    parse_graph,
    read_instance,
    verify_cut,
    write_graph,
    write_instance,
)

from conftest import cycle_graph, path_graph


def test_parse_single_edge():
    g = parse_graph("p tw 2 1\n1 2")
    assert g.n == 2 and g.edges == ((1, 2),)


def test_parse_path_and_comments():
    g = parse_graph(b"c a comment\np tw 3 2\n1 2\n\n2 3\n")
    assert g == path_graph(3)


def test_duplicate_edges_collapse():
    g = parse_graph("p tw 3 3\n1 2\n2 1\n2 3")
    assert g.m == 2


@pytest.mark.parametrize("text, line", [
    ("1 2\np tw 2 1", 1),
    ("p tw 2 1\n1 3", 2),
    ("p tw 2 1\n1 1", 2),
    ("p tw 2 1\n1 x", 2),
    ("p tw 2 1\n1 2 3", 2),
    ("p td 2 1\n1 2", 1),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as exc:
        parse_graph(text)
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_missing_header():
    with pytest.raises(ParseError):
        parse_graph("c nothing here\n")


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        Graph(2, ((1, 1),))
    with pytest.raises(ValueError):
        Graph(2, ((1, 3),))


def test_bfs_examples():
    p = path_graph(3)
    assert bfs_distances(p, 1) == {1: 0, 2: 1, 3: 2}
    d = bfs_distances(p, 1, [(1, 2)])
    assert d[1] == 0 and d[2] == INFINITE and d[3] == INFINITE
    c4 = cycle_graph(4)
    assert bfs_distances(c4, 1, [(2, 1)]) == {1: 0, 4: 1, 3: 2, 2: 3}


def test_bfs_rejects_non_edge():
    with pytest.raises(ValueError):
        bfs_distances(path_graph(3), 1, [(1, 3)])


def test_all_pairs_examples():
    k3 = cycle_graph(3)
    d = all_pairs_distances(k3)
    assert all(d[u][v] == 1 for u in range(1, 4) for v in range(1, 4) if u != v)
    assert all_pairs_distances(path_graph(3))[1][3] == 2
    assert all_pairs_distances(Graph(2, ()))[1][2] == math.inf


def test_verify_cut_examples():
    edge = Graph(2, ((1, 2),))
    inst = CutInstance(edge, (1, 2), {(1, 2): 2}, 2)
    assert verify_cut(inst, [(1, 2)])
    assert not verify_cut(inst, [])
    path = CutInstance(path_graph(3), (1, 3), {(1, 3): 2}, 2)
    assert verify_cut(path, [])


def test_two_terminal_shifts_bound_by_one():
    inst = CutInstance.two_terminal(path_graph(3), 1, 3, 2)
    assert inst.bound(1, 3) == 3 and inst.limit == 3
    assert inst.bound(3, 1) == 3


def test_instance_validation():
    g = path_graph(3)
    with pytest.raises(ValueError):
        CutInstance(g, (1, 1), {}, 1)
    with pytest.raises(ValueError):
        CutInstance(g, (1, 3), {(1, 2): 2}, 2)  # pair not among terminals
    with pytest.raises(ValueError):
        CutInstance(g, (1, 3), {(1, 3): 4}, 3)  # bound above limit


def test_instance_round_trip(tmp_path):
    inst = CutInstance(cycle_graph(5), (1, 3, 4), {(1, 3): 3, (3, 4): 2}, 3)
    write_instance(inst, tmp_path / "x.json")
    back = read_instance(tmp_path / "x.json")
    assert back == inst


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, tuple(edges))


@settings(max_examples=100, deadline=None)
@given(graphs())
def test_write_parse_round_trip(g):
    assert parse_graph(write_graph(g)) == g


@settings(max_examples=100, deadline=None)
@given(graphs())
def test_bfs_agrees_with_floyd_warshall(g):
    d = all_pairs_distances(g)
    for s in g.vertices:
        b = bfs_distances(g, s)
        assert all(b[v] == d[s][v] for v in g.vertices)
