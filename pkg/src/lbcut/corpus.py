"""Small test graphs: exhaustive isomorph-free lists and seeded random samples."""
from __future__ import annotations

import random
from itertools import combinations, permutations
from pathlib import Path

from .graph import CutInstance, Graph, write_instance


def _canonical(n: int, edges) -> tuple:
    best = None
    for perm in permutations(range(1, n + 1)):
        m = dict(zip(range(1, n + 1), perm))
        key = tuple(sorted(tuple(sorted((m[u], m[v]))) for u, v in edges))
        if best is None or key < best:
            best = key
    return best


def connected_graphs(n: int) -> list[Graph]:
    """Every connected graph on ``n`` vertices, one per isomorphism class, sorted by edge list."""
    pairs = list(combinations(range(1, n + 1), 2))
    found = set()
    for mask in range(1 << len(pairs)):
        edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
        if len(edges) < n - 1:
            continue
        g = Graph(n, tuple(edges))
        if not g.is_connected():
            continue
        found.add(_canonical(n, edges))
    return [Graph(n, e) for e in sorted(found, key=lambda e: (len(e), e))]


def small_connected_graphs(max_n: int = 5) -> list[Graph]:
    return [g for n in range(1, max_n + 1) for g in connected_graphs(n)]


def random_connected_graph(rng: random.Random, n: int, m: int) -> Graph:
    """Random spanning tree plus uniformly chosen extra edges, ``m`` edges in total."""
    m = max(n - 1, min(m, n * (n - 1) // 2))
    order = list(range(1, n + 1))
    rng.shuffle(order)
    edges = {tuple(sorted((order[i], order[rng.randrange(i)]))) for i in range(1, n)}
    rest = [p for p in combinations(range(1, n + 1), 2) if p not in edges]
    edges |= set(rng.sample(rest, m - len(edges)))
    return Graph(n, tuple(edges))


def write_corpus(directory, graphs, L: int = 2) -> list[Path]:
    """One two-terminal instance per graph (s = 1, t = n); single-vertex graphs are skipped."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for i, g in enumerate(graphs, 1):
        if g.n < 2:
            continue
        path = directory / f"g{i:03d}_n{g.n}_m{g.m}.json"
        write_instance(CutInstance.two_terminal(g, 1, g.n, L), path)
        out.append(path)
    return out
