"""Gadget generators: buttes, highlands, the multicolour-clique reduction and
AND-composition, each with an explicit path decomposition.

All generated vertex ids are contiguous and carry a provenance label such as
``H1,2/B3/ridge2.4`` (highland (1,2), butte 3, ridgeway 2, offset 4).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Sequence

from .decomp import TreeDecomposition
from .graph import Edge, Graph, norm_edge
from .oracle import MulticolorInstance


class GraphBuilder:
    """Allocates labelled vertices and collects edges."""

    def __init__(self):
        self.labels: list[str] = []
        self.edges: list[Edge] = []

    def vertex(self, label: str) -> int:
        self.labels.append(label)
        return len(self.labels)

    def edge(self, u: int, v: int) -> None:
        self.edges.append(norm_edge(u, v))

    def graph(self) -> Graph:
        return Graph(len(self.labels), tuple(self.edges), tuple(self.labels))


# ---------------------------------------------------------------- butte


@dataclass(frozen=True)
class Butte:
    """``h`` s-t paths of length 2 (shortcuts) and ``Q`` of length ``h+2`` (ridgeways)."""

    s: int
    t: int
    h: int
    Q: int
    shortcuts: tuple[int, ...]
    ridgeways: tuple[tuple[int, ...], ...]

    @property
    def shortcut_edges(self) -> list[tuple[Edge, Edge]]:
        return [(norm_edge(self.s, m), norm_edge(m, self.t)) for m in self.shortcuts]

    @property
    def ridgeway_edges(self) -> list[list[Edge]]:
        out = []
        for path in self.ridgeways:
            seq = (self.s,) + path + (self.t,)
            out.append([norm_edge(a, b) for a, b in zip(seq, seq[1:])])
        return out

    @property
    def edges(self) -> list[Edge]:
        return [e for pair in self.shortcut_edges for e in pair] + [
            e for path in self.ridgeway_edges for e in path
        ]

    @property
    def interior(self) -> list[int]:
        return list(self.shortcuts) + [v for p in self.ridgeways for v in p]


def make_butte(h: int, Q: int, builder: GraphBuilder | None = None, s: int | None = None,
               t: int | None = None, tag: str = "B") -> Butte:
    if h < 1 or Q < 1:
        raise ValueError("butte needs h >= 1 and Q >= 1")
    b = builder if builder is not None else GraphBuilder()
    if s is None:
        s = b.vertex(f"{tag}/s")
    if t is None:
        t = b.vertex(f"{tag}/t")
    mids = []
    for i in range(1, h + 1):
        m = b.vertex(f"{tag}/short{i}")
        b.edge(s, m)
        b.edge(m, t)
        mids.append(m)
    ways = []
    for r in range(1, Q + 1):
        path = tuple(b.vertex(f"{tag}/ridge{r}.{o}") for o in range(1, h + 2))
        seq = (s,) + path + (t,)
        for a, c in zip(seq, seq[1:]):
            b.edge(a, c)
        ways.append(path)
    return Butte(s, t, h, Q, tuple(mids), tuple(ways))


def butte_graph(h: int, Q: int) -> tuple[Graph, Butte]:
    b = GraphBuilder()
    butte = make_butte(h, Q, b)
    return b.graph(), butte


def ridge_edges(b: Butte) -> list[Edge]:
    """First edge of every shortcut; removing them all makes the butte ``h+2`` long."""
    return [norm_edge(b.s, m) for m in b.shortcuts]


def _butte_bags(b: Butte, base: frozenset[int]) -> list[frozenset[int]]:
    bags = [base | {m} for m in b.shortcuts]
    for path in b.ridgeways:
        if len(path) == 1:
            bags.append(base | {path[0]})
        bags += [base | {x, y} for x, y in zip(path, path[1:])]
    return bags


def path_decomposition(bags: Sequence[frozenset[int]], n: int) -> TreeDecomposition:
    return TreeDecomposition(
        {i: b for i, b in enumerate(bags, 1)},
        frozenset((i, i + 1) for i in range(1, len(bags))),
        n,
    )


def butte_path_decomposition(b: Butte, n: int = 0) -> TreeDecomposition:
    """Width-3 path decomposition: ``{s, t}`` plus at most two interior vertices per bag."""
    return path_decomposition(_butte_bags(b, frozenset((b.s, b.t))), n)


# ---------------------------------------------------------------- highland


@dataclass(frozen=True)
class Highland:
    X: int
    Y: int
    s: int
    t: int
    buttes: tuple[Butte, ...]

    @property
    def center(self) -> int:
        return self.buttes[self.X - 1].t

    def junction(self, p: int) -> int:
        """Top of butte ``p`` (1-based); ``junction(0)`` is ``s``."""
        return self.s if p == 0 else self.buttes[p - 1].t


def make_highland(X: int, high_heights: Sequence[int], builder: GraphBuilder | None = None,
                  s: int | None = None, t: int | None = None, tag: str = "H") -> Highland:
    """Chain of ``X`` low buttes (heights X²+i) and ``len(high_heights)`` high ones."""
    if X < 1 or not high_heights:
        raise ValueError("highland needs X >= 1 and at least one high butte")
    lo, hi = X**4, X**4 + X - 1
    for h in high_heights:
        if not lo <= h <= hi:
            raise ValueError(f"high butte height {h} outside [{lo}, {hi}]")
    b = builder if builder is not None else GraphBuilder()
    if s is None:
        s = b.vertex(f"{tag}/s")
    if t is None:
        t = b.vertex(f"{tag}/t")
    heights = [X * X + i for i in range(1, X + 1)] + list(high_heights)
    Q = X**4 + X**2
    buttes = []
    cur = s
    for p, h in enumerate(heights, 1):
        top = t if p == len(heights) else b.vertex(f"{tag}/top{p}")
        buttes.append(make_butte(h, Q, b, cur, top, f"{tag}/B{p}"))
        cur = top
    return Highland(X, len(high_heights), s, t, tuple(buttes))


def highland_graph(X: int, high_heights: Sequence[int]) -> tuple[Graph, Highland]:
    b = GraphBuilder()
    hl = make_highland(X, high_heights, b)
    return b.graph(), hl


def highland_path_decomposition(hl: Highland, n: int = 0) -> TreeDecomposition:
    """Butte decompositions chained end to end; consecutive buttes share a top."""
    bags = []
    for bt in hl.buttes:
        bags += _butte_bags(bt, frozenset((bt.s, bt.t)))
    return path_decomposition(bags, n)


# ---------------------------------------------------------------- reduction


@dataclass(frozen=True)
class ReductionOutput:
    graph: Graph
    s: int
    t: int
    L: int
    budget: int
    instance: MulticolorInstance
    highlands: dict[tuple[int, int], Highland]
    low_valleys: tuple[Edge, ...]
    high_valleys: dict[tuple[int, int, int], tuple[int, ...]] = field(default_factory=dict)

    def butte(self, i: int, j: int, pos: int) -> Butte:
        return self.highlands[(i, j)].buttes[pos - 1]

    @property
    def butte_index(self) -> dict[tuple[tuple[int, int], int], Butte]:
        return {(hj, p): b for hj, hl in self.highlands.items() for p, b in enumerate(hl.buttes, 1)}

    @property
    def vertex_butte(self) -> dict[int, list[tuple[tuple[int, int], int]]]:
        """Source vertex -> the low buttes representing it."""
        inst = self.instance
        out = {}
        for c, part in enumerate(inst.parts, 1):
            for idx, v in enumerate(part, 1):
                out[v] = [((c, j), idx) for j in range(1, inst.k + 1) if j != c]
        return out

    @property
    def edge_butte(self) -> dict[Edge, list[tuple[tuple[int, int], int]]]:
        """Source edge -> the two high buttes representing it."""
        N = self.instance.N
        out = {}
        for (i, j), lst in self.instance.edges.items():
            for pos, e in enumerate(lst, 1):
                out[e] = [((i, j), N + pos), ((j, i), N + pos)]
        return out


def reduction_parameters(k: int, N: int, M: int) -> tuple[int, int]:
    """(L, budget) of the reduction."""
    per = N**4 + N**2 + N
    return 2 * (N + M) + per - 1, k * (k - 1) * per


def reduce_clique_to_mlbc(inst: MulticolorInstance) -> ReductionOutput:
    """Build the MLBC instance with one highland per ordered colour pair."""
    k, N, M = inst.k, inst.N, inst.M
    if k < 2 or N < 1 or M < 1:
        raise ValueError("reduction needs k >= 2, N >= 1, M >= 1")
    b = GraphBuilder()
    s, t = b.vertex("s"), b.vertex("t")
    highlands = {}
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            if i == j:
                continue
            lst = inst.edges[(min(i, j), max(i, j))]
            heights = []
            for u, v in lst:
                mine = u if i < j else v
                heights.append(N**4 + N - inst.index(mine)[1])
            highlands[(i, j)] = make_highland(N, heights, b, s, t, f"H{i},{j}")
    low = []
    for i in range(1, k + 1):
        js = [j for j in range(1, k + 1) if j != i]
        for ja, jb in zip(js, js[1:]):
            for p in range(1, N):
                e = norm_edge(highlands[(i, ja)].junction(p), highlands[(i, jb)].junction(p))
                b.edge(*e)
                low.append(e)
    high = {}
    for i, j in combinations(range(1, k + 1), 2):
        for ell in range(1, M):
            p = N + ell
            a, c = highlands[(i, j)].junction(p), highlands[(j, i)].junction(p)
            mids = tuple(b.vertex(f"V{i},{j}/{ell}.{o}") for o in range(1, N - 1))
            seq = (a,) + mids + (c,)
            for x, y in zip(seq, seq[1:]):
                b.edge(x, y)
            high[(i, j, ell)] = mids
    L, budget = reduction_parameters(k, N, M)
    return ReductionOutput(b.graph(), s, t, L, budget, inst, highlands, tuple(low), high)


def ridge_selection(out: ReductionOutput, vertices: Sequence[int], edges: dict[tuple[int, int], Edge]) -> list[Edge]:
    """Ridge the low buttes of one chosen vertex per colour and the high buttes
    of one chosen edge per colour pair.  No adjacency check."""
    inst = out.instance
    cut = set()
    for i, v in enumerate(vertices, 1):
        c, idx = inst.index(v)
        if c != i:
            raise ValueError(f"vertex {v} is not in colour class {i}")
        for j in range(1, inst.k + 1):
            if j != i:
                cut.update(ridge_edges(out.butte(i, j, idx)))
    for (i, j), e in edges.items():
        pos = inst.edges[(i, j)].index(tuple(e)) + 1
        cut.update(ridge_edges(out.butte(i, j, inst.N + pos)))
        cut.update(ridge_edges(out.butte(j, i, inst.N + pos)))
    return sorted(cut)


def ridge_set_for_clique(out: ReductionOutput, clique: Sequence[int]) -> list[Edge]:
    """Cut of exactly the budget size induced by a multicolour clique."""
    inst = out.instance
    if len(clique) != inst.k:
        raise ValueError("clique needs one vertex per colour")
    edges = {}
    for i, j in combinations(range(1, inst.k + 1), 2):
        e = (clique[i - 1], clique[j - 1])
        if e not in inst.edges[(i, j)]:
            raise ValueError(f"{e} is not an edge between colours {i} and {j}")
        edges[(i, j)] = e
    return ridge_selection(out, clique, edges)


def reduction_path_decomposition(out: ReductionOutput) -> TreeDecomposition:
    """Path decomposition whose width depends on k only.

    Every bag holds ``s``, ``t`` and all highland centres.  The low halves of the
    highlands of one colour are swept column by column, then the high halves of
    each colour pair together with their valley paths.
    """
    inst = out.instance
    k, N, M = inst.k, inst.N, inst.M
    hub = frozenset({out.s, out.t} | {hl.center for hl in out.highlands.values()})
    bags: list[frozenset[int]] = []

    def sweep(keys, columns, after_column=None):
        front = {h: out.highlands[h].junction(columns[0] - 1) for h in keys}
        for p in columns:
            for h in keys:
                bt = out.highlands[h].buttes[p - 1]
                base = hub | frozenset(front.values()) | {bt.t}
                bags.extend(_butte_bags(bt, base))
                front[h] = bt.t
            if after_column:
                after_column(p, hub | frozenset(front.values()))

    for i in range(1, k + 1):
        sweep([(i, j) for j in range(1, k + 1) if j != i], list(range(1, N + 1)))
    for i, j in combinations(range(1, k + 1), 2):

        def valley(p, base, i=i, j=j):
            mids = out.high_valleys.get((i, j, p - N), ())
            if len(mids) == 1:
                bags.append(base | {mids[0]})
            bags.extend(base | {x, y} for x, y in zip(mids, mids[1:]))

        sweep([(i, j), (j, i)], list(range(N + 1, N + M + 1)), valley)
    return path_decomposition(bags, out.graph.n)


# ---------------------------------------------------------------- composition


@dataclass(frozen=True)
class ComposedInstance:
    graph: Graph
    s: int
    t: int
    L: int
    K: int
    decomposition: TreeDecomposition
    vertex_maps: tuple[dict[int, int], ...]


def and_compose(instances: Sequence[tuple[Graph, int, int]], L: int, K: int) -> ComposedInstance:
    """Disjoint union with all sources merged into ``s = 1`` and all sinks into ``t = 2``.

    ``K`` is the per-instance target; the composed target is ``len(instances) * K``.
    """
    if not instances:
        raise ValueError("need at least one instance")
    sizes = {g.n for g, _, _ in instances}
    if len(sizes) != 1:
        raise ValueError(f"instances must have equal vertex counts, got {sorted(sizes)}")
    direct = sum(g.has_edge(a, c) for g, a, c in instances)
    if direct > 1:
        raise ValueError("more than one instance has a direct source-sink edge")
    labels = ["s", "t"]
    edges = []
    maps = []
    bags = []
    for idx, (g, a, c) in enumerate(instances, 1):
        if a == c:
            raise ValueError("source and sink must differ")
        m = {a: 1, c: 2}
        for v in g.vertices:
            if v not in m:
                labels.append(f"G{idx}/{g.label(v)}")
                m[v] = len(labels)
        edges += [(m[u], m[v]) for u, v in g.edges]
        maps.append(m)
        bags.append(frozenset(m.values()))
    graph = Graph(len(labels), tuple(edges), tuple(labels))
    td = path_decomposition(bags, graph.n)
    return ComposedInstance(graph, 1, 2, L, K * len(instances), td, tuple(maps))


# ---------------------------------------------------------------- random instances


def random_multicolor_instance(k: int, N: int, M: int, plant: bool, seed: int) -> MulticolorInstance:
    """Uniform cross edges per colour pair; with ``plant`` a random clique goes in first."""
    if M > N * N:
        raise ValueError(f"M = {M} exceeds the N^2 = {N * N} possible cross edges")
    if k < 1 or N < 1 or M < 0:
        raise ValueError("need k >= 1, N >= 1, M >= 0")
    rng = random.Random(seed)
    parts = tuple(tuple(range((c - 1) * N + 1, c * N + 1)) for c in range(1, k + 1))
    clique = tuple(rng.choice(p) for p in parts) if plant else None
    edges = {}
    for i, j in combinations(range(1, k + 1), 2):
        chosen = set()
        if clique is not None and M > 0:
            chosen.add((clique[i - 1], clique[j - 1]))
        rest = [e for e in product(parts[i - 1], parts[j - 1]) if e not in chosen]
        chosen.update(rng.sample(rest, M - len(chosen)))
        edges[(i, j)] = tuple(sorted(chosen))
    return MulticolorInstance(k, parts, edges)
