import random

import pytest
from hypothesis import given, settings, strategies as st

from lbcut.corpus import random_connected_graph
from lbcut.decomp import (
    INTRODUCE,
    JOIN,
    LEAF,
    TreeDecomposition,
    assign_edges,
    auxiliary_graphs,
    heuristic_decomposition,
    inject_terminals,
    make_nice,
    nice_violations,
    parse_td,
    validate_decomposition,
    write_td,
)
from lbcut.errors import DecompositionError, ParseError
from lbcut.graph import Graph

from conftest import cycle_graph, path_graph


def td_of(*bags, edges=None):
    bags = {i: frozenset(b) for i, b in enumerate(bags, 1)}
    if edges is None:
        edges = [(i, i + 1) for i in range(1, len(bags))]
    return TreeDecomposition(bags, frozenset(edges))


def test_validate_examples():
    p3 = path_graph(3)
    assert validate_decomposition(p3, td_of({1, 2}, {2, 3})) == []
    probs = validate_decomposition(p3, td_of({1, 2}, {3}))
    assert any("(2, 3)" in p for p in probs)
    probs = validate_decomposition(p3, td_of({1, 2}, {2}, {1, 2, 3}))
    assert any("vertex 1" in p for p in probs)


def test_validate_rejects_non_tree():
    probs = validate_decomposition(path_graph(3), td_of({1, 2}, {2, 3}, {2}, edges=[(1, 2), (2, 3), (1, 3)]))
    assert probs


def test_validate_missing_vertex():
    g = Graph(3, ((1, 2),))
    assert any("vertex 3" in p for p in validate_decomposition(g, td_of({1, 2})))


@pytest.mark.parametrize("g, width", [
    (path_graph(6), 1),
    (Graph(5, ((1, 2), (1, 3), (3, 4), (3, 5))), 1),
    (Graph(4, tuple((u, v) for u in range(1, 5) for v in range(u + 1, 5))), 3),
    (cycle_graph(5), 2),
])
def test_heuristic_widths(g, width):
    td = heuristic_decomposition(g)
    assert validate_decomposition(g, td) == []
    assert td.width == width


def test_heuristic_is_deterministic():
    g = random_connected_graph(random.Random(4), 9, 15)
    assert heuristic_decomposition(g) == heuristic_decomposition(g)


def test_inject_unchanged_when_covered():
    td = td_of({1, 2}, {2, 3})
    assert inject_terminals(td, [2, 3]) is td
    single = td_of({1, 2, 3})
    assert inject_terminals(single, [1, 3]) is single


def test_inject_path_endpoints():
    g = path_graph(4)
    td = inject_terminals(td_of({1, 2}, {2, 3}, {3, 4}), [1, 4])
    assert validate_decomposition(g, td) == []
    assert any({1, 4} <= b for b in td.bags.values())
    assert td.width <= 2


def test_inject_unknown_terminal():
    with pytest.raises(ValueError):
        inject_terminals(td_of({1, 2}), [1, 5])


def test_make_nice_single_bag():
    g = Graph(2, ((1, 2),))
    nd = make_nice(td_of({1, 2}), g, [1, 2])
    assert nice_violations(nd, g, [1, 2]) == []
    assert {e for es in nd.leaf_edges.values() for e in es} == {(1, 2)}


def test_make_nice_path():
    g = path_graph(3)
    nd = make_nice(td_of({1, 2, 3}), g, [1, 3])
    assert {1, 3} <= set(nd.nodes[nd.root].bag)
    owned = [e for es in nd.leaf_edges.values() for e in es]
    assert sorted(owned) == [(1, 2), (2, 3)]


def test_make_nice_needs_terminal_bag():
    with pytest.raises(DecompositionError):
        make_nice(td_of({1, 2}, {2, 3}), path_graph(3), [1, 3])


def test_introduce_has_leaf_sibling():
    g = cycle_graph(6)
    td = heuristic_decomposition(g)
    nd = make_nice(td, g)
    par = nd.parents()
    intro = [x for x in nd.nodes.values() if x.kind == INTRODUCE]
    assert intro
    for x in intro:
        p = nd.nodes[par[x.id]]
        assert p.kind == JOIN
        (sib,) = [nd.nodes[c] for c in p.children if c != x.id]
        assert sib.kind == LEAF and sib.bag == x.bag


def test_triangle_goes_to_one_leaf():
    g = cycle_graph(3)
    nd = make_nice(td_of({1, 2, 3}), g)
    owners = [i for i, es in nd.leaf_edges.items() if es]
    assert len(owners) == 1 and len(nd.leaf_edges[owners[0]]) == 3


def test_edge_goes_to_smallest_leaf():
    # (1, 2) lies in all three bags, hence in several leaves
    g = Graph(5, ((1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (1, 5), (2, 5)))
    nd = make_nice(td_of({1, 2, 3}, {1, 2, 4}, {1, 2, 5}, edges=[(1, 2), (1, 3)]), g)
    eligible = sorted(i for i, x in nd.nodes.items() if x.kind == LEAF and {1, 2} <= set(x.bag))
    assert len(eligible) >= 2
    owners = [i for i, es in nd.leaf_edges.items() if (1, 2) in es]
    assert owners == [eligible[0]]


def test_assign_edges_fails_without_leaf():
    nd = make_nice(td_of({1, 2}, {2, 3}), Graph(3, ((1, 2),)))
    with pytest.raises(DecompositionError):
        assign_edges(nd, Graph(3, ((1, 2), (1, 3))))


def test_auxiliary_graph_of_root_is_whole_graph():
    g = cycle_graph(5)
    nd = make_nice(heuristic_decomposition(g), g)
    vs, es = auxiliary_graphs(nd)[nd.root]
    assert vs == frozenset(g.vertices) and es == frozenset(g.edges)


def test_parse_td_examples():
    td = parse_td("s td 1 2 2\nb 1 1 2")
    assert td.bags == {1: frozenset({1, 2})}
    td2 = td_of({1, 2}, {2, 3})
    assert parse_td(write_td(td2, 3)).bags == td2.bags
    assert parse_td(write_td(td2, 3)).tree_edges == td2.tree_edges


@pytest.mark.parametrize("text", [
    "s td 3 2 3\nb 1 1 2\nb 2 2 3\nb 3 3\n1 2\n2 3\n1 3",  # cycle
    "s td 2 2 3\nb 1 1 2\nb 2 2 3",  # disconnected
    "s td 1 2 2\nb 2 1 2",  # bag id out of range
    "s td 1 2 2\nb 1 1 5",  # vertex out of range
    "b 1 1 2",  # no header
    "s td 1 2 2\nb 1 x",
])
def test_parse_td_errors(text):
    with pytest.raises(ParseError):
        parse_td(text)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 10), st.integers(0, 10), st.integers(0, 10**6), st.data())
def test_pipeline_valid_on_random_graphs(n, extra, seed, data):
    rng = random.Random(seed)
    g = random_connected_graph(rng, n, n - 1 + extra)
    td = heuristic_decomposition(g)
    assert validate_decomposition(g, td) == []
    k = data.draw(st.integers(2, min(4, n)))
    terms = sorted(rng.sample(range(1, n + 1), k))
    inj = inject_terminals(td, terms)
    assert validate_decomposition(g, inj) == []
    assert inj.width <= td.width + k - 1
    nd = make_nice(inj, g, terms)
    assert nice_violations(nd, g, terms) == []
    assert nd.width == inj.width


def test_nice_form_on_200_random_graphs():
    rng = random.Random(200)
    for _ in range(200):
        n = rng.randint(2, 10)
        g = random_connected_graph(rng, n, rng.randint(n - 1, min(n * (n - 1) // 2, 2 * n)))
        terms = sorted(rng.sample(range(1, n + 1), min(n, rng.randint(2, 3))))
        td = inject_terminals(heuristic_decomposition(g), terms)
        nd = make_nice(td, g, terms)
        assert nice_violations(nd, g, terms) == []
        assert len(nd.nodes) <= 8 * (g.n + len(td.bags))
        aux = auxiliary_graphs(nd)
        for x in nd.nodes.values():
            if x.kind == JOIN:
                a, b = (aux[c][1] for c in x.children)
                assert not a & b
        assert aux[nd.root][1] == frozenset(g.edges)


def test_heuristic_handles_disconnected_graphs():
    g = Graph(6, ((1, 2), (2, 3), (4, 5)))
    td = heuristic_decomposition(g)
    assert validate_decomposition(g, td) == []
