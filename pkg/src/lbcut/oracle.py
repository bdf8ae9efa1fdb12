"""Exhaustive ground-truth solvers. Deliberately naive."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Mapping, Sequence

from .errors import ResourceLimitError
from .graph import CutInstance, Edge, Graph, norm_edge, verify_cut

DEFAULT_EDGE_CAP = 20
DEFAULT_CLIQUE_CAP = 10**6


def brute_force_instance(inst: CutInstance, edge_cap: int = DEFAULT_EDGE_CAP) -> tuple[int, list[Edge]]:
    """Scan removal sets by increasing size, lexicographically within a size.

    The first accepted set is optimal and lexicographically smallest.
    """
    edges = inst.graph.edges
    if len(edges) > edge_cap:
        raise ResourceLimitError("oracle edge count", len(edges), edge_cap)
    for r in range(len(edges) + 1):
        for cut in combinations(edges, r):
            if verify_cut(inst, cut):
                return r, list(cut)
    raise AssertionError("removing every edge must satisfy any bound")  # pragma: no cover


def brute_force_mlbmc(g: Graph, S: Sequence[int], constraints: Mapping[Edge, int],
                      edge_cap: int = DEFAULT_EDGE_CAP) -> tuple[int, list[Edge]]:
    lim = max(constraints.values(), default=1)
    return brute_force_instance(CutInstance(g, tuple(S), constraints, lim), edge_cap)


def brute_force_mlbc(g: Graph, s: int, t: int, L: int,
                     edge_cap: int = DEFAULT_EDGE_CAP) -> tuple[int, list[Edge]]:
    return brute_force_instance(CutInstance.two_terminal(g, s, t, L), edge_cap)


@dataclass(frozen=True)
class MulticolorInstance:
    """k colour classes of N vertices each and M cross edges per colour pair.

    ``edges[(i, j)]`` (``i < j``, colours 1-based) lists pairs ``(u, v)`` with
    ``u`` in part ``i`` and ``v`` in part ``j``.
    """

    k: int
    parts: tuple[tuple[int, ...], ...]
    edges: Mapping[tuple[int, int], tuple[tuple[int, int], ...]]

    def __post_init__(self):
        parts = tuple(tuple(p) for p in self.parts)
        if len(parts) != self.k:
            raise ValueError("need one part per colour")
        sizes = {len(p) for p in parts}
        if len(sizes) != 1:
            raise ValueError("parts must have equal size")
        seen = [v for p in parts for v in p]
        if len(seen) != len(set(seen)):
            raise ValueError("parts must be disjoint")
        color = {v: c for c, p in enumerate(parts, 1) for v in p}
        edges = {}
        counts = set()
        for i, j in combinations(range(1, self.k + 1), 2):
            lst = tuple(tuple(e) for e in self.edges.get((i, j), ()))
            for u, v in lst:
                if color.get(u) != i or color.get(v) != j:
                    raise ValueError(f"edge ({u}, {v}) does not join parts {i} and {j}")
            if len(set(lst)) != len(lst):
                raise ValueError(f"duplicate edge between parts {i} and {j}")
            counts.add(len(lst))
            edges[(i, j)] = lst
        if len(counts) > 1:
            raise ValueError("every colour pair needs the same edge count")
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "edges", edges)

    @property
    def N(self) -> int:
        return len(self.parts[0])

    @property
    def M(self) -> int:
        return len(next(iter(self.edges.values()), ()))

    def index(self, v: int) -> tuple[int, int]:
        """(colour, 1-based position in its part)."""
        for c, p in enumerate(self.parts, 1):
            if v in p:
                return c, p.index(v) + 1
        raise KeyError(v)

    def has_edge(self, u: int, v: int) -> bool:
        cu, cv = self.index(u)[0], self.index(v)[0]
        if cu == cv:
            return False
        if cu > cv:
            u, v, cu, cv = v, u, cv, cu
        return (u, v) in self.edges[(cu, cv)]


def find_multicolor_clique(inst: MulticolorInstance, cap: int = DEFAULT_CLIQUE_CAP) -> tuple[int, ...] | None:
    """First choice tuple (one vertex per colour) that is pairwise adjacent, else None."""
    total = inst.N ** inst.k
    if total > cap:
        raise ResourceLimitError("clique search space", total, cap)
    adj = {(min(u, v), max(u, v)) for lst in inst.edges.values() for u, v in lst}
    for choice in product(*inst.parts):
        if all(norm_edge(u, v) in adj for u, v in combinations(choice, 2)):
            return choice
    return None
