"""Tree decompositions: validation, a min-degree heuristic, terminal injection,
and the modified nice form the DP runs on.

In the nice form used here every introduce node hangs under a join node whose
other child is a leaf with the same bag.  Edges are owned by leaves only, which
is what lets the DP treat every introduced vertex as isolated.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DecompositionError, ParseError
from .graph import Edge, Graph, norm_edge

LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


@dataclass(frozen=True)
class TreeDecomposition:
    bags: dict[int, frozenset[int]]
    tree_edges: frozenset[tuple[int, int]]
    n: int = 0

    def __post_init__(self):
        object.__setattr__(self, "bags", {i: frozenset(b) for i, b in sorted(self.bags.items())})
        object.__setattr__(
            self, "tree_edges", frozenset(norm_edge(a, b) for a, b in self.tree_edges)
        )

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def neighbours(self) -> dict[int, list[int]]:
        nb: dict[int, list[int]] = {i: [] for i in self.bags}
        for a, b in sorted(self.tree_edges):
            nb[a].append(b)
            nb[b].append(a)
        return nb


def _tree_problems(td: TreeDecomposition) -> list[str]:
    ids = set(td.bags)
    out = []
    for a, b in sorted(td.tree_edges):
        if a not in ids or b not in ids:
            out.append(f"tree edge ({a}, {b}) references an unknown bag")
    if out or not ids:
        return out
    if len(td.tree_edges) != len(ids) - 1:
        out.append(f"tree has {len(td.tree_edges)} edges for {len(ids)} bags")
    nb = td.neighbours()
    start = min(ids)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in nb[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    if seen != ids:
        out.append(f"tree is disconnected: bags {sorted(ids - seen)} unreachable from {start}")
    return out


def validate_decomposition(g: Graph, td: TreeDecomposition) -> list[str]:
    """All violated tree-decomposition conditions, each naming a witness. Empty means valid."""
    out = _tree_problems(td)
    if out:
        return out
    where: dict[int, list[int]] = defaultdict(list)
    for i, bag in td.bags.items():
        for v in sorted(bag):
            if not 1 <= v <= g.n:
                out.append(f"bag {i} contains {v}, which is not a vertex")
            where[v].append(i)
    for v in g.vertices:
        if v not in where:
            out.append(f"vertex {v} is in no bag")
    for u, v in g.edges:
        if not any(u in td.bags[i] for i in where.get(v, ())):
            out.append(f"edge ({u}, {v}) is not covered by any bag")
    nb = td.neighbours()
    for v, holders in sorted(where.items()):
        hs = set(holders)
        seen = {holders[0]}
        queue = deque([holders[0]])
        while queue:
            x = queue.popleft()
            for y in nb[x]:
                if y in hs and y not in seen:
                    seen.add(y)
                    queue.append(y)
        if seen != hs:
            out.append(f"vertex {v}: bags {sorted(hs)} do not form a connected subtree")
    return out


def heuristic_decomposition(g: Graph) -> TreeDecomposition:
    """Decomposition from a min-degree elimination ordering (ties: smallest id).

    Components are joined into one tree by linking their roots in order.
    """
    if g.n == 0:
        return TreeDecomposition({1: frozenset()}, frozenset(), 0)
    adj = {v: set(g.adjacency[v]) for v in g.vertices}
    order: list[int] = []
    bag_of: dict[int, frozenset[int]] = {}
    alive = set(g.vertices)
    while alive:
        v = min(alive, key=lambda x: (len(adj[x]), x))
        nbrs = adj[v]
        bag_of[v] = frozenset(nbrs | {v})
        for a in nbrs:
            adj[a] |= nbrs
            adj[a].discard(a)
            adj[a].discard(v)
        alive.discard(v)
        order.append(v)
        del adj[v]
    rank = {v: i for i, v in enumerate(order)}
    parent: dict[int, int | None] = {}
    for v in order:
        rest = bag_of[v] - {v}
        parent[v] = min(rest, key=rank.__getitem__) if rest else None
    roots = [v for v in order if parent[v] is None]
    for a, b in zip(roots, roots[1:]):
        parent[a] = b

    # contract tree edges where one bag contains the other
    bags = dict(bag_of)
    nb: dict[int, set[int]] = {v: set() for v in order}
    for v, p in parent.items():
        if p is not None:
            nb[v].add(p)
            nb[p].add(v)
    changed = True
    while changed:
        changed = False
        for v in order:
            if v not in bags:
                continue
            w = next((w for w in sorted(nb[v], key=rank.__getitem__) if bags[v] <= bags[w]), None)
            if w is None:
                continue
            for x in nb[v] - {w}:
                nb[x].discard(v)
                nb[x].add(w)
                nb[w].add(x)
            nb[w].discard(v)
            del nb[v], bags[v]
            changed = True
    ids = {v: i + 1 for i, v in enumerate(v for v in order if v in bags)}
    tree = frozenset(norm_edge(ids[v], ids[w]) for v in ids for w in nb[v])
    return TreeDecomposition({ids[v]: bags[v] for v in ids}, tree, g.n)


def _tree_paths(td: TreeDecomposition, root: int) -> dict[int, int | None]:
    nb = td.neighbours()
    par: dict[int, int | None] = {root: None}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in nb[x]:
            if y not in par:
                par[y] = x
                queue.append(y)
    return par


def _inject_at(td: TreeDecomposition, root: int, terminals) -> dict[int, set[int]]:
    par = _tree_paths(td, root)
    # BFS order from root so the first holder found is the closest one
    order = list(par)
    bags = {i: set(b) for i, b in td.bags.items()}
    for x in terminals:
        if x in td.bags[root]:
            continue
        near = next(i for i in order if x in td.bags[i])
        node = par[near]
        while node is not None:
            bags[node].add(x)
            node = par[node]
    return bags


def inject_terminals(td: TreeDecomposition, terminals: Sequence[int]) -> TreeDecomposition:
    """Make some bag contain every terminal.

    Each missing terminal is added along the tree path from its nearest holder
    to a target bag.  The target is chosen among bags already holding a
    terminal, minimising the resulting width (ties: smallest bag id), so width
    grows by at most ``len(terminals) - 1``.
    """
    terms = set(terminals)
    if any(terms <= b for b in td.bags.values()):
        return td
    for x in terms:
        if not any(x in b for b in td.bags.values()):
            raise ValueError(f"terminal {x} appears in no bag")
    best = None
    for r in sorted(td.bags):
        if not terms & td.bags[r]:
            continue
        bags = _inject_at(td, r, sorted(terms))
        w = max(len(b) for b in bags.values())
        if best is None or w < best[0]:
            best = (w, bags)
    return TreeDecomposition({i: frozenset(b) for i, b in best[1].items()}, td.tree_edges, td.n)


# ---------------------------------------------------------------- nice form


@dataclass(frozen=True)
class NiceNode:
    id: int
    kind: str
    bag: tuple[int, ...]
    children: tuple[int, ...] = ()
    vertex: int | None = None


@dataclass(frozen=True)
class NiceDecomposition:
    nodes: dict[int, NiceNode]
    root: int
    leaf_edges: dict[int, tuple[Edge, ...]] = field(default_factory=dict)

    @property
    def width(self) -> int:
        return max(len(x.bag) for x in self.nodes.values()) - 1

    def postorder(self) -> list[int]:
        out = []
        stack = [(self.root, False)]
        while stack:
            x, done = stack.pop()
            if done:
                out.append(x)
                continue
            stack.append((x, True))
            for c in reversed(self.nodes[x].children):
                stack.append((c, False))
        return out

    def parents(self) -> dict[int, int | None]:
        par: dict[int, int | None] = {self.root: None}
        for x in self.nodes.values():
            for c in x.children:
                par[c] = x.id
        return par

    def leaves(self) -> list[int]:
        return sorted(i for i, x in self.nodes.items() if x.kind == LEAF)


def make_nice(td: TreeDecomposition, g: Graph, root_terminals: Sequence[int] = ()) -> NiceDecomposition:
    """Convert ``td`` into the modified nice form and assign edges to leaves.

    The root is the smallest-id bag containing ``root_terminals``.
    """
    terms = set(root_terminals)
    cands = [i for i, b in td.bags.items() if terms <= b]
    if not cands:
        raise DecompositionError(
            f"no bag contains all root terminals {sorted(terms)}; inject them first"
        )
    root = min(cands)
    par = _tree_paths(td, root)
    kids: dict[int, list[int]] = defaultdict(list)
    for x, p in par.items():
        if p is not None:
            kids[p].append(x)

    kind: list[str] = []
    bag: list[frozenset[int]] = []
    vert: list[int | None] = []
    ch: list[list[int]] = []

    def new(k, b, v=None, c=()):
        kind.append(k)
        bag.append(frozenset(b))
        vert.append(v)
        ch.append(list(c))
        return len(kind) - 1

    top: dict[int, int] = {}
    bfs = list(par)
    for x in reversed(bfs):
        B = td.bags[x]
        branches = []
        for c in sorted(kids[x]):
            cur, cb = top[c], td.bags[c]
            for v in sorted(cb - B):
                cb = cb - {v}
                cur = new(FORGET, cb, v, [cur])
            for v in sorted(B - cb):
                cb = cb | {v}
                cur = new(INTRODUCE, cb, v, [cur])
            branches.append(cur)
        if not branches:
            top[x] = new(LEAF, B)
        else:
            acc = branches[0]
            for b in branches[1:]:
                acc = new(JOIN, B, None, [acc, b])
            top[x] = acc
    tmp_root = top[root]

    # every introduce node gets a join parent with a same-bag leaf sibling
    parent_of = {c: p for p in range(len(kind)) for c in ch[p]}
    for i in range(len(kind)):
        if kind[i] != INTRODUCE:
            continue
        sib = new(LEAF, bag[i])
        j = new(JOIN, bag[i], None, [sib, i])
        p = parent_of.get(i)
        if p is None:
            tmp_root = j
        else:
            ch[p][ch[p].index(i)] = j

    # renumber in preorder
    ids: dict[int, int] = {}
    stack = [tmp_root]
    while stack:
        x = stack.pop()
        ids[x] = len(ids)
        stack.extend(reversed(ch[x]))
    nodes = {
        ids[x]: NiceNode(ids[x], kind[x], tuple(sorted(bag[x])), tuple(ids[c] for c in ch[x]), vert[x])
        for x in ids
    }
    return assign_edges(NiceDecomposition(nodes, ids[tmp_root]), g)


def assign_edges(nd: NiceDecomposition, g: Graph) -> NiceDecomposition:
    """Give each edge to the smallest-id leaf whose bag holds both endpoints."""
    holders: dict[int, list[int]] = defaultdict(list)
    for i in nd.leaves():
        for v in nd.nodes[i].bag:
            holders[v].append(i)
    owned: dict[int, list[Edge]] = {i: [] for i in nd.leaves()}
    for u, v in g.edges:
        hv = set(holders.get(v, ()))
        leaf = next((i for i in holders.get(u, ()) if i in hv), None)
        if leaf is None:
            raise DecompositionError(f"edge ({u}, {v}) fits in no leaf bag")
        owned[leaf].append((u, v))
    return NiceDecomposition(nd.nodes, nd.root, {i: tuple(e) for i, e in owned.items()})


def auxiliary_graphs(nd: NiceDecomposition) -> dict[int, tuple[frozenset[int], frozenset[Edge]]]:
    """Vertex and edge sets of the subgraph each node's subtree is responsible for."""
    out: dict[int, tuple[frozenset[int], frozenset[Edge]]] = {}
    for i in nd.postorder():
        x = nd.nodes[i]
        if x.kind == LEAF:
            out[i] = (frozenset(x.bag), frozenset(nd.leaf_edges.get(i, ())))
        else:
            vs = set(x.bag)
            es: set[Edge] = set()
            for c in x.children:
                vs |= out[c][0]
                es |= out[c][1]
            out[i] = (frozenset(vs), frozenset(es))
    return out


def nice_violations(nd: NiceDecomposition, g: Graph, terminals: Iterable[int] = ()) -> list[str]:
    """Structural check of the modified nice form; empty means every invariant holds."""
    out = []
    par = nd.parents()
    for i, x in sorted(nd.nodes.items()):
        cb = [set(nd.nodes[c].bag) for c in x.children]
        b = set(x.bag)
        if x.kind == LEAF and x.children:
            out.append(f"leaf {i} has children")
        elif x.kind == INTRODUCE:
            if len(cb) != 1 or x.vertex in cb[0] or b != cb[0] | {x.vertex}:
                out.append(f"introduce node {i} is malformed")
            p = par.get(i)
            pn = nd.nodes.get(p) if p is not None else None
            if pn is None or pn.kind != JOIN:
                out.append(f"introduce node {i} has no join parent")
            else:
                sib = [nd.nodes[c] for c in pn.children if c != i]
                if len(sib) != 1 or sib[0].kind != LEAF or sib[0].bag != x.bag:
                    out.append(f"introduce node {i} lacks a same-bag leaf sibling")
        elif x.kind == FORGET:
            if len(cb) != 1 or x.vertex not in cb[0] or b != cb[0] - {x.vertex}:
                out.append(f"forget node {i} is malformed")
        elif x.kind == JOIN:
            if len(cb) != 2 or any(c != b for c in cb):
                out.append(f"join node {i} is malformed")
        if x.kind != LEAF and i in nd.leaf_edges:
            out.append(f"non-leaf {i} owns edges")
    seen: set[Edge] = set()
    for i, es in nd.leaf_edges.items():
        bag = set(nd.nodes[i].bag)
        for e in es:
            if e in seen:
                out.append(f"edge {e} owned twice")
            seen.add(e)
            if not set(e) <= bag:
                out.append(f"edge {e} not inside leaf {i}")
    if seen != set(g.edges):
        out.append(f"leaf edges miss {sorted(set(g.edges) - seen)}")
    if not set(terminals) <= set(nd.nodes[nd.root].bag):
        out.append("root bag does not contain the terminals")
    return out


# ---------------------------------------------------------------- .td format


def parse_td(text: bytes | str) -> TreeDecomposition:
    """Read a PACE 2017 ``.td`` file."""
    if isinstance(text, bytes):
        text = text.decode()
    header = None
    bags: dict[int, frozenset[int]] = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        try:
            if parts[0] == "s":
                if header is not None or len(parts) != 5 or parts[1] != "td":
                    raise ParseError(f"malformed solution line {line!r}", lineno)
                header = tuple(int(x) for x in parts[2:])
            elif parts[0] == "b":
                if header is None:
                    raise ParseError("bag before solution line", lineno)
                i = int(parts[1])
                if not 1 <= i <= header[0]:
                    raise ParseError(f"bag id {i} out of range 1..{header[0]}", lineno)
                if i in bags:
                    raise ParseError(f"bag {i} listed twice", lineno)
                vs = [int(x) for x in parts[2:]]
                if any(not 1 <= v <= header[2] for v in vs):
                    raise ParseError(f"bag {i} has a vertex outside 1..{header[2]}", lineno)
                if len(vs) > header[1]:
                    raise ParseError(f"bag {i} exceeds declared size {header[1]}", lineno)
                bags[i] = frozenset(vs)
            else:
                if header is None:
                    raise ParseError("tree edge before solution line", lineno)
                if len(parts) != 2:
                    raise ParseError(f"malformed line {line!r}", lineno)
                a, b = int(parts[0]), int(parts[1])
                for x in (a, b):
                    if not 1 <= x <= header[0]:
                        raise ParseError(f"bag id {x} out of range 1..{header[0]}", lineno)
                edges.append((a, b))
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"non-integer field in {line!r}", lineno) from None
    if header is None:
        raise ParseError("missing 's td' line")
    for i in range(1, header[0] + 1):
        bags.setdefault(i, frozenset())
    td = TreeDecomposition(bags, frozenset(edges), header[2])
    if len(td.tree_edges) != len(edges):
        raise ParseError("duplicate tree edge")
    probs = _tree_problems(td)
    if probs:
        raise ParseError("tree edges do not form a tree: " + "; ".join(probs))
    return td


def write_td(td: TreeDecomposition, n: int | None = None) -> str:
    if n is None:
        n = td.n or max((max(b) for b in td.bags.values() if b), default=0)
    size = max((len(b) for b in td.bags.values()), default=0)
    lines = [f"s td {len(td.bags)} {size} {n}"]
    for i, b in td.bags.items():
        lines.append(" ".join(["b", str(i)] + [str(v) for v in sorted(b)]))
    lines += [f"{a} {b}" for a, b in sorted(td.tree_edges)]
    return "\n".join(lines) + "\n"
