import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lbcut.corpus import random_connected_graph
from lbcut.decomp import LEAF, TreeDecomposition, make_nice
from lbcut.dp import (
    DPTable,
    ForgetChoice,
    LeafWitness,
    forget_table,
    introduce_table,
    join_tables,
    leaf_table,
    reconstruct_cut,
    root_query,
    run_dp,
    solve_mlbc,
    solve_mlbmc,
)
from lbcut.errors import ResourceLimitError
from lbcut.graph import CutInstance, Graph, verify_cut
from lbcut.lenvec import LengthVector, vector_array
from lbcut.oracle import brute_force_instance, brute_force_mlbc, brute_force_mlbmc

from conftest import cycle_graph, path_graph


def monotone_violations(t: DPTable, samples=2000, seed=0):
    """Count sampled key pairs a <= b with size(a) > size(b)."""
    keys = t.keys.astype(np.int16)
    rng = np.random.default_rng(seed)
    i = rng.integers(0, len(keys), samples)
    # pair each key with a random dominating key where one exists
    bad = 0
    for a in i:
        dom = np.flatnonzero((keys >= keys[a]).all(axis=1))
        b = dom[rng.integers(0, len(dom))]
        bad += int(t.sizes[a] > t.sizes[b])
    return bad


# ---------------------------------------------------------------- leaf


def test_leaf_single_edge():
    t = leaf_table((1, 2), [(1, 2)], 2)
    assert t[(1,)] == 0
    size, wit = t.entry((2,))
    assert size == 1 and wit == LeafWitness(((1, 2),))


def test_leaf_path_examples():
    # support (s, v, t) = (1, 2, 3); entries ordered (sv, st, vt)
    t = leaf_table((1, 2, 3), [(1, 2), (2, 3)], 2)
    assert t[(1, 2, 1)] == 0
    assert t[(2, 2, 1)] == 1
    assert t[(2, 2, 2)] == 2


def test_leaf_without_edges_is_zero():
    t = leaf_table((1, 2, 3), [], 3)
    assert not t.sizes.any()


def test_leaf_edge_cap():
    g = Graph(7, tuple((u, v) for u in range(1, 8) for v in range(u + 1, 8)))
    with pytest.raises(ResourceLimitError):
        leaf_table(tuple(range(1, 8)), g.edges, 1, edge_cap=20)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.integers(1, 4), st.integers(0, 10**6))
def test_leaf_matches_exhaustive(k, lim, seed):
    rng = random.Random(seed)
    pairs = [(u, v) for u in range(1, k + 1) for v in range(u + 1, k + 1)]
    edges = [p for p in pairs if rng.random() < 0.6]
    t = leaf_table(tuple(range(1, k + 1)), edges, lim)
    g = Graph(k, tuple(edges))
    for i in rng.sample(range(len(t)), min(10, len(t))):
        key = t.key_at(i)
        cons = {p: b for p, b in key.as_dict().items()}
        inst = CutInstance(g, tuple(range(1, k + 1)), cons, lim)
        assert t.sizes[i] == brute_force_instance(inst)[0]
        wit = t.backpointer(i).edges
        assert len(wit) == t.sizes[i] and verify_cut(inst, wit)


# ---------------------------------------------------------------- inner nodes


def synthetic(support, lim, sizes):
    return DPTable(0, LEAF, support, lim, np.asarray(sizes, dtype=np.int32))


def test_join_adds():
    keys = vector_array(2, 3)
    a = synthetic((1, 2), 3, [1] * len(keys))
    b = synthetic((1, 2), 3, [2] * len(keys))
    assert (join_tables(a, b).sizes == 3).all()
    z = synthetic((1, 2), 3, [0] * len(keys))
    assert (join_tables(a, z).sizes == a.sizes).all()


def test_forget_example():
    # Y = {s, t, v} with s=1, t=2, v=3; entries (st, sv, tv)
    keys = vector_array(3, 2)
    tY = synthetic((1, 2, 3), 2, (keys == 2).sum(axis=1))
    out = forget_table(tY, 3)
    assert out.support == (1, 2)
    size, choice = out.entry((2,))
    assert size == 1 and choice == ForgetChoice(LengthVector((1, 2, 3), (2, 1, 1), 2))
    size, choice = out.entry((1,))
    assert size == 0 and choice.child_key.entries == (1, 1, 1)


def test_forget_constant():
    keys = vector_array(3, 3)
    out = forget_table(synthetic((1, 2, 3), 3, [7] * len(keys)), 2)
    assert (out.sizes == 7).all()


def test_introduce_copies():
    tY = synthetic((1, 2), 2, [0, 1])
    out = introduce_table(tY, 3)
    for key, size in out.items():
        assert size == (1 if key[(1, 2)] == 2 else 0)
        assert out.backpointer(out.index(key)).child_key.entries == (key[(1, 2)],)


# ---------------------------------------------------------------- driver


def single_leaf(g, bag):
    td = TreeDecomposition({1: frozenset(bag)}, frozenset())
    return make_nice(td, g, sorted(bag))


def test_single_leaf_root_table():
    g = path_graph(3)
    nd = single_leaf(g, {1, 2, 3})
    tables = run_dp(g, nd, 3)
    root = tables[nd.root]
    # entries ordered (sv, st, vt); both short pairs must be separated
    assert root[(2, 3, 2)] == 2
    assert root[(2, 3, 1)] == 1
    assert root_query(root, {(1, 3): 3})[0] == 1
    assert root_query(root, {})[0] == 0


def test_reconstruct_on_join_of_leaves():
    g = path_graph(3)
    td = TreeDecomposition({1: frozenset({1, 2, 3}), 2: frozenset({1, 2, 3})}, frozenset({(1, 2)}))
    nd = make_nice(td, g, [1, 3])
    tables = run_dp(g, nd, 3)
    size, key = root_query(tables[nd.root], {(1, 3): 3})
    cut = reconstruct_cut(nd, tables, key)
    assert len(cut) == size == 1


def test_solve_single_edge():
    assert tuple(solve_mlbc(Graph(2, ((1, 2),)), 1, 2, 1)) == (1, [(1, 2)])


def test_solve_c6(c6):
    sol = solve_mlbc(c6, 1, 4, 3)
    assert sol.size == 2
    assert verify_cut(CutInstance.two_terminal(c6, 1, 4, 3), sol.cut)


def test_solve_diamond_chord(diamond_chord):
    assert solve_mlbc(diamond_chord, 1, 3, 2).size == 3


def test_mlbc_is_two_terminal_mlbmc(diamond_chord):
    for L in range(1, 5):
        a = solve_mlbc(diamond_chord, 1, 3, L)
        b = solve_mlbmc(diamond_chord, [1, 3], {(1, 3): L + 1})
        assert a.size == b.size


def test_star_multicut(star):
    sol = solve_mlbmc(star, [2, 3, 4], {(2, 3): 3, (2, 4): 3, (3, 4): 3})
    assert sol.size == 2


def test_triangle_multicut():
    sol = solve_mlbmc(cycle_graph(3), [1, 2, 3], {(1, 2): 2, (1, 3): 2, (2, 3): 2})
    assert sol.size == 3


def test_non_triangle_constraints(star):
    cons = {(2, 3): 3, (2, 4): 1, (3, 4): 1}
    assert solve_mlbmc(star, [2, 3, 4], cons).size == brute_force_mlbmc(star, [2, 3, 4], cons)[0] == 1


def test_resource_guard_message():
    g = Graph(5, tuple((u, v) for u in range(1, 6) for v in range(u + 1, 6)))
    with pytest.raises(ResourceLimitError) as exc:
        solve_mlbc(g, 1, 2, 3, cap=1000)
    assert exc.value.projected == 4**10
    assert str(4**10) in str(exc.value)


def test_given_decomposition_is_validated(c6):
    bad = TreeDecomposition({1: frozenset({1, 2, 3})}, frozenset())
    with pytest.raises(ValueError):
        solve_mlbc(c6, 1, 4, 3, td=bad)


def test_decomposition_invariance():
    g = cycle_graph(6)
    path_td = TreeDecomposition(
        {1: frozenset({1, 2, 6}), 2: frozenset({2, 3, 6}), 3: frozenset({3, 5, 6}), 4: frozenset({3, 4, 5})},
        frozenset({(1, 2), (2, 3), (3, 4)}),
    )
    for L in range(1, 6):
        assert solve_mlbc(g, 1, 4, L, td=path_td).size == solve_mlbc(g, 1, 4, L).size


def test_root_query_monotone_in_constraints():
    rng = random.Random(11)
    g = random_connected_graph(rng, 6, 9)
    terms = [1, 3, 5]
    full = {(1, 3): 4, (1, 5): 4, (3, 5): 4}
    sol = solve_mlbmc(g, terms, full, keep_tables=True)
    root = sol.tables[sol.decomposition.root]
    for _ in range(50):
        cons = {p: rng.randint(1, 4) for p in full}
        base = root_query(root, cons)[0]
        for p in cons:
            if cons[p] > 1:
                lower = {**cons, p: cons[p] - 1}
                assert root_query(root, lower)[0] <= base


def test_tables_monotone_and_ones_zero():
    rng = random.Random(5)
    for _ in range(5):
        g = random_connected_graph(rng, 6, 8)
        sol = solve_mlbc(g, 1, 6, 3, keep_tables=True)
        for t in sol.tables.values():
            assert t.sizes[0] == 0  # the all-ones key comes first
            assert monotone_violations(t, samples=200) == 0


def test_threads_bit_identical():
    rng = random.Random(8)
    for _ in range(5):
        g = random_connected_graph(rng, 7, 11)
        a = solve_mlbc(g, 1, 7, 3, keep_tables=True)
        b = solve_mlbc(g, 1, 7, 3, keep_tables=True, threads=4)
        assert (a.size, a.cut, a.root_vector) == (b.size, b.cut, b.root_vector)
        for i, t in a.tables.items():
            assert np.array_equal(t.sizes, b.tables[i].sizes)
            assert (t.back is None and b.tables[i].back is None) or np.array_equal(t.back, b.tables[i].back)


def test_solution_json_shape(c6):
    js = solve_mlbc(c6, 1, 4, 3).to_json()
    assert set(js) == {"size", "cut", "root_vector", "stats"}
    assert {"nodes", "table_entries", "elapsed_ms"} <= set(js["stats"])


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(0, 6), st.integers(1, 4), st.integers(0, 10**6))
def test_random_mlbc_matches_oracle(n, extra, L, seed):
    rng = random.Random(seed)
    g = random_connected_graph(rng, n, n - 1 + extra)
    s, t = rng.sample(range(1, n + 1), 2)
    sol = solve_mlbc(g, s, t, L)
    assert sol.size == brute_force_mlbc(g, s, t, L)[0]
    assert verify_cut(CutInstance.two_terminal(g, s, t, L), sol.cut)


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 6), st.integers(0, 5), st.integers(0, 10**6))
def test_random_mlbmc_matches_oracle(n, extra, seed):
    rng = random.Random(seed)
    g = random_connected_graph(rng, n, n - 1 + extra)
    terms = sorted(rng.sample(range(1, n + 1), 3))
    cons = {(terms[i], terms[j]): rng.randint(1, 3) for i in range(3) for j in range(i + 1, 3)}
    sol = solve_mlbmc(g, terms, cons)
    assert sol.size == brute_force_mlbmc(g, terms, cons)[0]
