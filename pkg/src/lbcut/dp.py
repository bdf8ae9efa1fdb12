"""Dynamic program over the modified nice decomposition.

Each node table maps every valid length vector on the node's bag to the size of
a smallest edge set, taken from the edges owned by the node's subtree, whose
removal puts each bag pair at least the vector's entry apart.  Tables share
their key arrays (``lenvec.vector_array``) and store sizes and one backpointer
per key as parallel numpy arrays.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from . import lenvec
from .decomp import FORGET, INTRODUCE, JOIN, LEAF, NiceDecomposition, TreeDecomposition
from .decomp import heuristic_decomposition, inject_terminals, make_nice, validate_decomposition
from .errors import DecompositionError, ResourceLimitError
from .graph import CutInstance, Edge, Graph, norm_edge, verify_cut
from .lenvec import LengthVector

DEFAULT_TABLE_CAP = 10**7
DEFAULT_LEAF_EDGE_CAP = 20


# ---------------------------------------------------------------- backpointers


@dataclass(frozen=True)
class LeafWitness:
    edges: tuple[Edge, ...]


@dataclass(frozen=True)
class JoinSplit:
    key: LengthVector


@dataclass(frozen=True)
class ForgetChoice:
    child_key: LengthVector


@dataclass(frozen=True)
class IntroducePass:
    child_key: LengthVector


@dataclass
class DPTable:
    """Sparse table on one node.

    ``sizes[i]`` belongs to row ``i`` of ``keys``.  ``back[i]`` is a subset rank
    for leaves and a child row index for forget and introduce nodes.
    """

    node: int
    kind: str
    support: tuple[int, ...]
    lim: int
    sizes: np.ndarray
    back: np.ndarray | None = None
    subsets: dict[int, tuple[Edge, ...]] = field(default_factory=dict)
    child_support: tuple[int, ...] | None = None

    @property
    def keys(self) -> np.ndarray:
        return lenvec.vector_array(len(self.support), self.lim)

    def __len__(self) -> int:
        return len(self.sizes)

    def index(self, key) -> int:
        if isinstance(key, LengthVector):
            if key.support != self.support:
                raise ValueError(f"key support {key.support} differs from {self.support}")
            key = key.entries
        return lenvec.lookup(len(self.support), self.lim, tuple(key))

    def key_at(self, i: int) -> LengthVector:
        return LengthVector(self.support, tuple(int(x) for x in self.keys[i]), self.lim)

    def __getitem__(self, key) -> int:
        return int(self.sizes[self.index(key)])

    def entry(self, key) -> tuple[int, object]:
        i = self.index(key)
        return int(self.sizes[i]), self.backpointer(i)

    def backpointer(self, i: int):
        if self.kind == LEAF:
            return LeafWitness(self.subsets[int(self.back[i])])
        if self.kind == JOIN:
            return JoinSplit(self.key_at(i))
        child_support = self.child_support
        child_key = tuple(int(x) for x in lenvec.vector_array(len(child_support), self.lim)[self.back[i]])
        cls = ForgetChoice if self.kind == FORGET else IntroducePass
        return cls(LengthVector(child_support, child_key, self.lim))

    def items(self):
        for i in range(len(self)):
            yield self.key_at(i), int(self.sizes[i])


# ---------------------------------------------------------------- leaf


def _capped_apsp(k: int, lim: int, pos_edges: Sequence[tuple[int, int]], masks: np.ndarray) -> np.ndarray:
    """Floyd-Warshall for a batch of subgraphs of a ``k``-vertex bag.

    ``masks[s, e]`` says whether edge ``e`` survives in subgraph ``s``.  Distances
    are capped at ``lim``, which is exact for comparisons against bounds <= lim.
    """
    S = masks.shape[0]
    d = np.full((S, k, k), lim, dtype=np.int16)
    idx = np.arange(k)
    d[:, idx, idx] = 0
    for e, (a, b) in enumerate(pos_edges):
        keep = masks[:, e]
        d[keep, a, b] = np.minimum(d[keep, a, b], 1)
        d[keep, b, a] = np.minimum(d[keep, b, a], 1)
    for w in range(k):
        d = np.minimum(d, d[:, :, w, None] + d[:, None, w, :])
        np.minimum(d, lim, out=d)
    return d


# leaves with at most this many keys are memoised; bigger ones are recomputed
LEAF_CACHE_KEYS = 10**5


@lru_cache(maxsize=256)
def _leaf_core_cached(k: int, pos_edges: tuple[tuple[int, int], ...], lim: int):
    return _leaf_core(k, pos_edges, lim)


def _leaf_core(k: int, pos_edges: tuple[tuple[int, int], ...], lim: int):
    m = len(pos_edges)
    # removal sets in rank order: by size, then lexicographically
    subsets = [c for r in range(m + 1) for c in combinations(range(m), r)]
    masks = np.ones((len(subsets), m), dtype=bool)
    for s, rem in enumerate(subsets):
        masks[s, list(rem)] = False
    n_keys = len(lenvec.vector_codes(k, lim))
    if m == 0:
        zeros = np.zeros(n_keys, dtype=np.int32)
        return zeros, zeros.copy(), subsets
    d = _capped_apsp(k, lim, pos_edges, masks)
    rows, cols = np.triu_indices(k, 1)
    dvec = d[:, rows, cols]
    codes = lenvec.encode(dvec, lim)
    P = lenvec.num_pairs(k)
    dt = np.int16 if len(subsets) < np.iinfo(np.int16).max else np.int32
    dense = np.full(lim**P, np.iinfo(dt).max, dtype=dt)
    np.minimum.at(dense, codes, np.arange(len(subsets), dtype=dt))
    dense = dense.reshape((lim,) * P)
    # dense[a] := min rank over distance vectors dominating a
    for ax in range(P):
        flipped = np.flip(dense, axis=ax)
        dense = np.flip(np.minimum.accumulate(flipped, axis=ax), axis=ax)
    ranks = dense.reshape(-1)[lenvec.vector_codes(k, lim)].astype(np.int32)
    sizes = np.array([len(s) for s in subsets], dtype=np.int32)[ranks]
    return sizes, ranks, subsets


def leaf_table(bag: Sequence[int], edges: Sequence[Edge], lim: int, node: int = -1,
               edge_cap: int = DEFAULT_LEAF_EDGE_CAP) -> DPTable:
    """Exhaust every removal set of the leaf's edges."""
    bag = tuple(sorted(bag))
    edges = sorted(norm_edge(u, v) for u, v in edges)
    if len(edges) > edge_cap:
        raise ResourceLimitError(f"leaf {node} owns {len(edges)} edges", len(edges), edge_cap)
    pos = {v: i for i, v in enumerate(bag)}
    try:
        pos_edges = tuple((pos[u], pos[v]) for u, v in edges)
    except KeyError as exc:
        raise DecompositionError(f"leaf {node} edge endpoint {exc} outside its bag") from None
    small = len(lenvec.vector_codes(len(bag), lim)) <= LEAF_CACHE_KEYS
    sizes, ranks, subsets = (_leaf_core_cached if small else _leaf_core)(len(bag), pos_edges, lim)
    used = {int(r): tuple(edges[j] for j in subsets[int(r)]) for r in np.unique(ranks)}
    return DPTable(node, LEAF, bag, lim, sizes.copy(), ranks, used)


# ---------------------------------------------------------------- inner nodes


def join_tables(tY: DPTable, tZ: DPTable, node: int = -1) -> DPTable:
    if tY.support != tZ.support or tY.lim != tZ.lim:
        raise DecompositionError(
            f"join children disagree: {tY.support}/{tY.lim} vs {tZ.support}/{tZ.lim}"
        )
    return DPTable(node, JOIN, tY.support, tY.lim, tY.sizes + tZ.sizes)


@lru_cache(maxsize=128)
def _forget_groups(k: int, drop: int, lim: int):
    group = lenvec.contract_index(k, drop, lim)
    perm = np.argsort(group, kind="stable")
    sg = group[perm]
    starts = np.flatnonzero(np.r_[True, sg[1:] != sg[:-1]])
    counts = np.diff(np.r_[starts, len(sg)])
    return perm, starts, counts


def forget_table(tY: DPTable, v: int, node: int = -1) -> DPTable:
    """Minimise over every extension of a key by distances to ``v``.

    Ties go to the lexicographically smallest child key.
    """
    if v not in tY.support:
        raise DecompositionError(f"forgotten vertex {v} not in child support {tY.support}")
    drop = tY.support.index(v)
    support = tuple(x for x in tY.support if x != v)
    perm, starts, counts = _forget_groups(len(tY.support), drop, tY.lim)
    s = tY.sizes[perm]
    mins = np.minimum.reduceat(s, starts)
    hit = s == np.repeat(mins, counts)
    at = np.where(hit, np.arange(len(s)), len(s))
    first = np.minimum.reduceat(at, starts)
    return DPTable(node, FORGET, support, tY.lim, mins.astype(np.int32), perm[first],
                   child_support=tY.support)


def introduce_table(tY: DPTable, x: int, node: int = -1) -> DPTable:
    """The new vertex is isolated below this node, so sizes are copied through."""
    if x in tY.support:
        raise DecompositionError(f"introduced vertex {x} already in {tY.support}")
    support = tuple(sorted(tY.support + (x,)))
    idx = lenvec.contract_index(len(support), support.index(x), tY.lim)
    return DPTable(node, INTRODUCE, support, tY.lim, tY.sizes[idx], idx,
                   child_support=tY.support)


# ---------------------------------------------------------------- driver


def projected_entries(nd: NiceDecomposition, lim: int) -> int:
    k = max(len(x.bag) for x in nd.nodes.values())
    return lim ** lenvec.num_pairs(k)


def _compute(nd: NiceDecomposition, i: int, lim: int, tables: dict, edge_cap: int) -> DPTable:
    x = nd.nodes[i]
    if x.kind == LEAF:
        return leaf_table(x.bag, nd.leaf_edges.get(i, ()), lim, i, edge_cap)
    if x.kind == JOIN:
        a, b = x.children
        return join_tables(tables[a], tables[b], i)
    (c,) = x.children
    if x.kind == FORGET:
        return forget_table(tables[c], x.vertex, i)
    return introduce_table(tables[c], x.vertex, i)


def run_dp(g: Graph, nd: NiceDecomposition, lim: int, cap: int = DEFAULT_TABLE_CAP,
           edge_cap: int = DEFAULT_LEAF_EDGE_CAP, threads: int = 1) -> dict[int, DPTable]:
    """Tables for every node, children before parents.

    With ``threads > 1`` nodes of equal height are computed concurrently; the
    result is identical to the sequential run.
    """
    if lim < 1:
        raise ValueError("lim must be positive")
    projected = projected_entries(nd, lim)
    if projected > cap:
        k = max(len(x.bag) for x in nd.nodes.values())
        raise ResourceLimitError(f"table for a bag of {k} vertices with lim {lim}", projected, cap)
    order = nd.postorder()
    tables: dict[int, DPTable] = {}
    if threads <= 1:
        for i in order:
            tables[i] = _compute(nd, i, lim, tables, edge_cap)
        return tables
    height: dict[int, int] = {}
    for i in order:
        height[i] = 1 + max((height[c] for c in nd.nodes[i].children), default=-1)
    levels: dict[int, list[int]] = {}
    for i in order:
        levels.setdefault(height[i], []).append(i)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for h in sorted(levels):
            batch = levels[h]
            done = list(pool.map(lambda i: _compute(nd, i, lim, tables, edge_cap), batch))
            tables.update(zip(batch, done))
    return tables


def _constraint_columns(support: tuple[int, ...], constraints: Mapping[Edge, int]):
    pos = {v: i for i, v in enumerate(support)}
    pcol = {p: j for j, p in enumerate(combinations(range(len(support)), 2))}
    cols, bounds = [], []
    for (u, v), b in sorted(constraints.items()):
        if u not in pos or v not in pos:
            raise DecompositionError(f"terminal pair ({u}, {v}) not inside root bag {support}")
        a, c = sorted((pos[u], pos[v]))
        cols.append(pcol[(a, c)])
        bounds.append(b)
    return cols, bounds


def root_query(root: DPTable, constraints: Mapping[Edge, int] | LengthVector) -> tuple[int, LengthVector]:
    """Smallest size over root keys whose terminal entries dominate ``constraints``.

    ``constraints`` need not satisfy the triangle inequalities.  Returns the size
    and the lexicographically smallest minimising key.
    """
    if isinstance(constraints, LengthVector):
        constraints = constraints.as_dict()
    cons = {norm_edge(u, v): int(b) for (u, v), b in constraints.items()}
    if any(b > root.lim for b in cons.values()):
        raise ValueError(f"constraint above the table limit {root.lim}")
    cols, bounds = _constraint_columns(root.support, cons)
    keys = root.keys
    ok = np.ones(len(keys), dtype=bool)
    for j, b in zip(cols, bounds):
        ok &= keys[:, j] >= b
    cand = np.flatnonzero(ok)
    best = cand[np.argmin(root.sizes[cand])]
    return int(root.sizes[best]), root.key_at(int(best))


def reconstruct_cut(nd: NiceDecomposition, tables: Mapping[int, DPTable], root_key) -> list[Edge]:
    """Follow backpointers from the root key down to the leaves."""
    start = tables[nd.root].index(root_key)
    out: list[Edge] = []
    stack = [(nd.root, start)]
    while stack:
        i, k = stack.pop()
        t = tables[i]
        x = nd.nodes[i]
        if x.kind == LEAF:
            try:
                out.extend(t.subsets[int(t.back[k])])
            except KeyError:
                raise RuntimeError(f"dangling leaf backpointer at node {i}") from None
        elif x.kind == JOIN:
            stack.extend((c, k) for c in x.children)
        else:
            stack.append((x.children[0], int(t.back[k])))
    return sorted(out)


# ---------------------------------------------------------------- entry points


@dataclass
class Solution:
    size: int
    cut: list[Edge]
    root_vector: LengthVector
    stats: dict
    tables: dict[int, DPTable] | None = None
    decomposition: NiceDecomposition | None = None

    def __iter__(self):
        yield self.size
        yield self.cut

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "cut": [[u, v] for u, v in self.cut],
            "root_vector": {
                "support": list(self.root_vector.support),
                "entries": list(self.root_vector.entries),
                "lim": self.root_vector.lim,
            },
            "stats": self.stats,
        }


def solve_instance(inst: CutInstance, td: TreeDecomposition | None = None, *,
                   cap: int = DEFAULT_TABLE_CAP, edge_cap: int = DEFAULT_LEAF_EDGE_CAP,
                   threads: int = 1, keep_tables: bool = False) -> Solution:
    t0 = time.perf_counter()
    g = inst.graph
    terms = list(inst.terminals)
    lim = max(inst.constraints.values(), default=1)
    if td is None:
        td = heuristic_decomposition(g)
    else:
        problems = validate_decomposition(g, td)
        if problems:
            raise DecompositionError("invalid decomposition: " + "; ".join(problems))
    td = inject_terminals(td, terms) if terms else td
    nd = make_nice(td, g, terms)
    tables = run_dp(g, nd, lim, cap=cap, edge_cap=edge_cap, threads=threads)
    size, root_vec = root_query(tables[nd.root], inst.constraints)
    cut = reconstruct_cut(nd, tables, root_vec)
    if len(cut) != size or not verify_cut(inst, cut):
        raise RuntimeError("reconstructed cut failed verification")
    stats = {
        "nodes": len(nd.nodes),
        "width": nd.width,
        "lim": lim,
        "table_entries": int(sum(len(t) for t in tables.values())),
        "elapsed_ms": round((time.perf_counter() - t0) * 1000, 3),
    }
    return Solution(size, cut, root_vec, stats,
                    tables if keep_tables else None, nd if keep_tables else None)


def solve_mlbmc(g: Graph, S: Sequence[int], constraints: Mapping[Edge, int],
                td: TreeDecomposition | None = None, **kw) -> Solution:
    """Minimum edge set putting each terminal pair at least its bound apart."""
    lim = max(constraints.values(), default=1)
    return solve_instance(CutInstance(g, tuple(S), constraints, lim), td, **kw)


def solve_mlbc(g: Graph, s: int, t: int, L: int, td: TreeDecomposition | None = None, **kw) -> Solution:
    """Minimum L-cut: afterwards every s-t path has at least L+1 edges."""
    if L < 1:
        raise ValueError("L must be at least 1")
    return solve_instance(CutInstance.two_terminal(g, s, t, L), td, **kw)
