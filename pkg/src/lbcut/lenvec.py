"""Length vectors: per-pair distance lower bounds on a vertex set.

A vector on support ``X`` (sorted vertex ids) stores one entry in ``[1, lim]`` for
each pair ``(u, v)``, ``u < v``, in lexicographic pair order.  Valid vectors obey
the triangle inequalities ``a[u,w] + a[w,v] >= a[u,v]``.

Two layers live here.  The object layer (``LengthVector`` and friends) is the
readable reference; the array layer (``vector_array``, ``contract_index``) is what
the DP tables run on.  Both enumerate in the same lexicographic order.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterator, Mapping, Sequence

import numpy as np


def pair_list(X: Sequence[int]) -> list[tuple[int, int]]:
    """Canonical pair order for a support."""
    return list(combinations(sorted(X), 2))


def num_pairs(k: int) -> int:
    return k * (k - 1) // 2


@dataclass(frozen=True)
class LengthVector:
    support: tuple[int, ...]
    entries: tuple[int, ...]
    lim: int

    def __post_init__(self):
        support = tuple(self.support)
        if list(support) != sorted(set(support)):
            raise ValueError("support must be sorted and duplicate-free")
        entries = tuple(int(x) for x in self.entries)
        if len(entries) != num_pairs(len(support)):
            raise ValueError(f"expected {num_pairs(len(support))} entries, got {len(entries)}")
        if any(not 1 <= x <= self.lim for x in entries):
            raise ValueError(f"entries must lie in [1, {self.lim}]")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_mapping(cls, X, values: Mapping[tuple[int, int], int], lim: int, default: int = 1):
        X = tuple(sorted(X))
        ent = []
        for u, v in pair_list(X):
            ent.append(values.get((u, v), values.get((v, u), default)))
        return cls(X, tuple(ent), lim)

    def as_dict(self) -> dict[tuple[int, int], int]:
        return dict(zip(pair_list(self.support), self.entries))

    def __getitem__(self, pair: tuple[int, int]) -> int:
        u, v = pair
        if u > v:
            u, v = v, u
        return self.as_dict()[(u, v)]


def _as_dict(entries, X) -> dict[tuple[int, int], int]:
    if isinstance(entries, Mapping):
        return {(min(u, v), max(u, v)): x for (u, v), x in entries.items()}
    return dict(zip(pair_list(X), entries))


def satisfies_triangle(entries, X) -> bool:
    """Check every inequality ``a[u,w] + a[w,v] >= a[u,v]`` over distinct u, v, w."""
    a = _as_dict(entries, X)
    X = sorted(X)

    def get(u, v):
        return a[(u, v)] if u < v else a[(v, u)]

    for u, v, w in combinations(X, 3):
        x, y, z = get(u, v), get(u, w), get(v, w)
        if x > y + z or y > x + z or z > x + y:
            return False
    return True


def enumerate_vectors(X, lim: int) -> Iterator[LengthVector]:
    """Lazily yield every triangle-satisfying ``[1, lim]`` vector on ``X``, lexicographically."""
    X = tuple(sorted(X))
    pairs = pair_list(X)
    pos = {p: i for i, p in enumerate(pairs)}
    # triangles to check once the lexicographically last pair (b, c) is assigned
    checks = [[(pos[(a, b)], pos[(a, c)]) for a in X if a < b] for b, c in pairs]
    cur = [0] * len(pairs)

    def rec(i):
        if i == len(pairs):
            yield LengthVector(X, tuple(cur), lim)
            return
        for x in range(1, lim + 1):
            ok = True
            for p, q in checks[i]:
                y, z = cur[p], cur[q]
                if x > y + z or y > x + z or z > x + y:
                    ok = False
                    break
            if ok:
                cur[i] = x
                yield from rec(i + 1)

    yield from rec(0)


def _check_same(a: LengthVector, b: LengthVector):
    if a.support != b.support:
        raise ValueError(f"support mismatch: {a.support} vs {b.support}")


def dominates(a: LengthVector, b: LengthVector) -> bool:
    """``a ⪯ b``: every entry of ``a`` is at most the matching entry of ``b``."""
    _check_same(a, b)
    return all(x <= y for x, y in zip(a.entries, b.entries))


def contract(a: LengthVector, Y) -> LengthVector:
    """Restrict ``a`` to the pairs inside ``Y``."""
    Y = tuple(sorted(set(Y)))
    if not set(Y) <= set(a.support):
        raise ValueError(f"{Y} is not a subset of the support {a.support}")
    d = a.as_dict()
    return LengthVector(Y, tuple(d[p] for p in pair_list(Y)), a.lim)


def augmentations(a: LengthVector, Y, lim: int | None = None) -> Iterator[LengthVector]:
    """All triangle-satisfying vectors ``b`` on ``Y`` with ``contract(b, X) == a``.

    ``Y`` must be the support of ``a`` plus exactly one new vertex.
    """
    lim = a.lim if lim is None else lim
    Y = tuple(sorted(set(Y)))
    X = a.support
    extra = set(Y) - set(X)
    if len(extra) != 1 or not set(X) <= set(Y):
        raise ValueError("Y must add exactly one vertex to the support")
    (v,) = extra
    base = a.as_dict()
    out = []
    for col in product(range(1, lim + 1), repeat=len(X)):
        d = dict(base)
        for x, val in zip(X, col):
            d[(min(x, v), max(x, v))] = val
        if satisfies_triangle(d, Y):
            out.append(tuple(d[p] for p in pair_list(Y)))
    for ent in sorted(out):
        yield LengthVector(Y, ent, lim)


# ---------------------------------------------------------------- array layer


@lru_cache(maxsize=64)
def vector_array(k: int, lim: int) -> np.ndarray:
    """All valid vectors on a ``k``-vertex support as an ``(count, C(k,2))`` int8 array.

    Rows are in lexicographic order, identical to ``enumerate_vectors``.  The
    support is positional: column order is the canonical pair order on
    positions ``0..k-1``.
    """
    if lim > 127:
        raise ValueError("lim above 127 does not fit the int8 key encoding")
    pairs = list(combinations(range(k), 2))
    pos = {p: i for i, p in enumerate(pairs)}
    rows = np.zeros((1, 0), dtype=np.int8)
    values = np.arange(1, lim + 1, dtype=np.int8)
    for b, c in pairs:
        n = rows.shape[0]
        new = np.empty((n * lim, rows.shape[1] + 1), dtype=np.int8)
        new[:, :-1] = np.repeat(rows, lim, axis=0)
        new[:, -1] = np.tile(values, n)
        keep = np.ones(len(new), dtype=bool)
        x = new[:, -1].astype(np.int16)
        for a in range(b):
            y = new[:, pos[(a, b)]].astype(np.int16)
            z = new[:, pos[(a, c)]].astype(np.int16)
            keep &= (x <= y + z) & (y <= x + z) & (z <= x + y)
        rows = new[keep]
    rows.flags.writeable = False
    return rows


def encode(rows: np.ndarray, lim: int) -> np.ndarray:
    """Mixed-radix code per row; monotone in lexicographic row order."""
    rows = np.asarray(rows)
    if rows.ndim == 1:
        rows = rows[None, :]
    code = np.zeros(rows.shape[0], dtype=np.int64)
    for j in range(rows.shape[1]):
        code = code * lim + (rows[:, j].astype(np.int64) - 1)
    return code


@lru_cache(maxsize=64)
def vector_codes(k: int, lim: int) -> np.ndarray:
    codes = encode(vector_array(k, lim), lim)
    codes.flags.writeable = False
    return codes


def kept_columns(k: int, drop: int) -> list[int]:
    """Pair columns of a ``k``-support that avoid position ``drop``."""
    return [i for i, (a, b) in enumerate(combinations(range(k), 2)) if drop not in (a, b)]


def columns_for(k: int, positions: Sequence[int]) -> list[int]:
    """Pair columns of a ``k``-support lying inside ``positions`` (sorted)."""
    keep = set(positions)
    return [i for i, (a, b) in enumerate(combinations(range(k), 2)) if a in keep and b in keep]


@lru_cache(maxsize=128)
def contract_index(k: int, drop: int, lim: int) -> np.ndarray:
    """For each vector on ``k`` positions, the row index of its contraction after
    deleting position ``drop`` in ``vector_array(k - 1, lim)``."""
    rows = vector_array(k, lim)
    sub = rows[:, kept_columns(k, drop)]
    small = vector_codes(k - 1, lim)
    idx = np.searchsorted(small, encode(sub, lim))
    idx = idx.astype(np.int64)
    idx.flags.writeable = False
    return idx


def lookup(k: int, lim: int, entries: Sequence[int]) -> int:
    """Row index of a vector in ``vector_array(k, lim)``; KeyError if absent."""
    codes = vector_codes(k, lim)
    c = encode(np.asarray(entries, dtype=np.int64)[None, :], lim)[0] if len(entries) else 0
    i = int(np.searchsorted(codes, c))
    if i >= len(codes) or codes[i] != c:
        raise KeyError(tuple(entries))
    return i
