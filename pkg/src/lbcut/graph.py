"""Undirected simple graphs, unweighted shortest paths, cut checking and file I/O.

Vertex ids are 1-based everywhere a user can see them.
"""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import ParseError

INFINITE = math.inf

Edge = tuple[int, int]


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``1..n``.

    ``edges`` is normalised on construction: each pair is stored as ``(min, max)``,
    duplicates are dropped and the tuple is sorted.
    """

    n: int
    edges: tuple[Edge, ...] = ()
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            for x in (u, v):
                if not 1 <= x <= self.n:
                    raise ValueError(f"endpoint {x} out of range 1..{self.n}")
            seen.add(norm_edge(u, v))
        object.__setattr__(self, "edges", tuple(sorted(seen)))
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != self.n:
                raise ValueError("need exactly one label per vertex")
            object.__setattr__(self, "labels", labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Sorted neighbour tuples, index 0 unused."""
        adj: list[list[int]] = [[] for _ in range(self.n + 1)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def has_edge(self, u: int, v: int) -> bool:
        return norm_edge(u, v) in self.edge_set

    def label(self, v: int) -> str:
        if self.labels is None:
            return str(v)
        return self.labels[v - 1]

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        dist = bfs_distances(self, 1)
        return all(d != INFINITE for d in dist.values())


# ---------------------------------------------------------------- distances


def bfs_distances(g: Graph, source: int, removed: Iterable[Edge] = ()) -> dict[int, float]:
    """Edge-count distances from ``source`` in ``g`` minus ``removed``.

    Unreachable vertices map to ``INFINITE``.
    """
    if not 1 <= source <= g.n:
        raise ValueError(f"source {source} is not a vertex")
    gone = set()
    for u, v in removed:
        e = norm_edge(u, v)
        if e not in g.edge_set:
            raise ValueError(f"removed pair {e} is not an edge")
        gone.add(e)
    dist: dict[int, float] = {v: INFINITE for v in g.vertices}
    dist[source] = 0
    queue = deque([source])
    adj = g.adjacency
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if dist[w] == INFINITE and (not gone or norm_edge(u, w) not in gone):
                dist[w] = du
                queue.append(w)
    return dist


def all_pairs_distances(g: Graph) -> list[list[float]]:
    """Floyd-Warshall over unit edge lengths.

    Returns an ``(n+1) x (n+1)`` matrix indexed by vertex id; row and column 0
    are unused.
    """
    n = g.n
    d = [[INFINITE] * (n + 1) for _ in range(n + 1)]
    for v in g.vertices:
        d[v][v] = 0
    for u, v in g.edges:
        d[u][v] = d[v][u] = 1
    for w in g.vertices:
        dw = d[w]
        for u in g.vertices:
            duw = d[u][w]
            if duw == INFINITE:
                continue
            du = d[u]
            for v in g.vertices:
                alt = duw + dw[v]
                if alt < du[v]:
                    du[v] = alt
    return d


# ---------------------------------------------------------------- instances


@dataclass(frozen=True)
class CutInstance:
    """Graph, terminals and per-pair lower bounds on post-cut distance.

    ``constraints`` maps normalised terminal pairs to bounds; missing pairs mean
    bound 1 (no constraint).
    """

    graph: Graph
    terminals: tuple[int, ...]
    constraints: Mapping[Edge, int]
    limit: int

    def __post_init__(self):
        terms = tuple(self.terminals)
        if len(set(terms)) != len(terms):
            raise ValueError("terminals must be distinct")
        for s in terms:
            if not 1 <= s <= self.graph.n:
                raise ValueError(f"terminal {s} is not a vertex")
        cons = {}
        tset = set(terms)
        for (u, v), bound in dict(self.constraints).items():
            if u not in tset or v not in tset or u == v:
                raise ValueError(f"constraint pair ({u}, {v}) is not a terminal pair")
            if bound < 1:
                raise ValueError("bounds must be positive")
            cons[norm_edge(u, v)] = max(int(bound), cons.get(norm_edge(u, v), 1))
        limit = int(self.limit)
        if limit < 1 or (cons and limit < max(cons.values())):
            raise ValueError("limit must be positive and at least every bound")
        object.__setattr__(self, "terminals", terms)
        object.__setattr__(self, "constraints", dict(sorted(cons.items())))
        object.__setattr__(self, "limit", limit)

    @classmethod
    def two_terminal(cls, g: Graph, s: int, t: int, L: int) -> "CutInstance":
        """The L-cut problem: distance at least L+1 between s and t."""
        if s == t:
            raise ValueError("source and sink must differ")
        return cls(g, (s, t), {norm_edge(s, t): L + 1}, L + 1)

    def bound(self, u: int, v: int) -> int:
        return self.constraints.get(norm_edge(u, v), 1)


def verify_cut(inst: CutInstance, cut: Iterable[Edge]) -> bool:
    """True iff removing ``cut`` puts every terminal pair at least its bound apart."""
    cut = [norm_edge(u, v) for u, v in cut]
    terms = inst.terminals
    for i, s in enumerate(terms[:-1]):
        needed = [(t, inst.bound(s, t)) for t in terms[i + 1:]]
        if all(b <= 1 for _, b in needed):
            continue
        dist = bfs_distances(inst.graph, s, cut)
        if any(dist[t] < b for t, b in needed):
            return False
    return True


# ---------------------------------------------------------------- file formats


def parse_graph(text: bytes | str) -> Graph:
    """Read a PACE ``.gr`` graph (``p tw n m`` header, one edge per line)."""
    if isinstance(text, bytes):
        text = text.decode()
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise ParseError("duplicate header", lineno)
            if len(parts) != 4 or parts[1] != "tw":
                raise ParseError(f"malformed header {line!r}", lineno)
            try:
                n, _ = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"malformed header {line!r}", lineno) from None
            if n < 0:
                raise ParseError("negative vertex count", lineno)
            continue
        if n is None:
            raise ParseError("edge before header", lineno)
        if len(parts) != 2:
            raise ParseError(f"expected two endpoints, got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer endpoint in {line!r}", lineno) from None
        for x in (u, v):
            if not 1 <= x <= n:
                raise ParseError(f"endpoint {x} out of range 1..{n}", lineno)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", lineno)
        edges.append((u, v))
    if n is None:
        raise ParseError("missing 'p tw' header")
    return Graph(n, tuple(edges))


def write_graph(g: Graph) -> str:
    lines = [f"p tw {g.n} {g.m}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    return parse_graph(Path(path).read_bytes())


def instance_to_json(inst: CutInstance, graph_file: str) -> dict:
    return {
        "graph_file": graph_file,
        "terminals": list(inst.terminals),
        "constraints": [{"u": u, "v": v, "bound": b} for (u, v), b in inst.constraints.items()],
        "limit": inst.limit,
    }


def read_instance(path) -> CutInstance:
    """Load an instance JSON; ``graph_file`` is resolved relative to the JSON file."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
        gpath = Path(data["graph_file"])
        terminals = [int(x) for x in data["terminals"]]
        cons = {(int(c["u"]), int(c["v"])): int(c["bound"]) for c in data.get("constraints", [])}
        limit = int(data.get("limit", max(cons.values(), default=1)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad instance file {path}: {exc}") from None
    if not gpath.is_absolute():
        gpath = path.parent / gpath
    g = read_graph(gpath)
    return CutInstance(g, tuple(terminals), cons, limit)


def write_instance(inst: CutInstance, path, graph_file: str | None = None) -> None:
    """Write ``<path>`` JSON plus the graph file next to it."""
    path = Path(path)
    if graph_file is None:
        graph_file = path.with_suffix(".gr").name
    (path.parent / graph_file).write_text(write_graph(inst.graph))
    path.write_text(json.dumps(instance_to_json(inst, graph_file), indent=2) + "\n")


def dump_edges(edges: Sequence[Edge]) -> list[list[int]]:
    return [[u, v] for u, v in sorted(edges)]
