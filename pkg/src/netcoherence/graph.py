"""Weighted undirected graphs, incidence rows and Laplacian assembly.

Nodes are dense integers ``0..n-1``. Edges are stored canonically with
``u < v`` and sorted lexicographically, so every downstream tie-break that
falls back on edge order is deterministic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

Edge = tuple[int, int, float]
WeightFn = Callable[[int, int], float]


class GraphError(ValueError):
    """Invalid graph construction or mutation."""


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[Edge, ...]
    _index: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", frozenset((u, v) for u, v, _ in self.edges))

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self._index

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def weight(self, u: int, v: int) -> float:
        if u > v:
            u, v = v, u
        for a, b, w in self.edges:
            if (a, b) == (u, v):
                return w
        raise KeyError((u, v))


@dataclass(frozen=True)
class IncidenceRow:
    """Sparse incidence vector: ``+s`` at ``u``, ``-s`` at ``v``."""

    u: int
    v: int
    s: float

    def dense(self, n: int) -> np.ndarray:
        m = np.zeros(n)
        m[self.u] = self.s
        m[self.v] = -self.s
        return m


@dataclass
class CandidateEdge:
    u: int
    v: int
    w: float
    cached_gain: float = math.inf
    stamp: int = -1

    @property
    def key(self) -> tuple[int, int]:
        return (self.u, self.v)


def _canonical(u: int, v: int, w: float, n: int) -> Edge:
    u, v = int(u), int(v)
    if not (0 <= u < n and 0 <= v < n):
        raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
    if u == v:
        raise GraphError(f"self-loop at node {u}")
    w = float(w)
    if not w >= 0.0:
        raise GraphError(f"edge ({u}, {v}) has negative or NaN weight {w}")
    if u > v:
        u, v = v, u
    return (u, v, w)


def new_graph(n: int, edges: Iterable[Sequence] = ()) -> Graph:
    """Build a canonical graph on ``n`` nodes.

    Each edge is ``(u, v)`` or ``(u, v, w)``; missing weights default to 1.
    Raises GraphError on out-of-range endpoints, self-loops, duplicates
    (in either orientation) and negative weights.
    """
    n = int(n)
    if n < 0:
        raise GraphError(f"negative node count {n}")
    seen: dict[tuple[int, int], Edge] = {}
    for e in edges:
        w = e[2] if len(e) > 2 else 1.0
        c = _canonical(e[0], e[1], w, n)
        if (c[0], c[1]) in seen:
            raise GraphError(f"duplicate edge ({c[0]}, {c[1]})")
        seen[(c[0], c[1])] = c
    ordered = tuple(sorted(seen.values()))
    return Graph(n, ordered)


def add_edge(g: Graph, e: Sequence) -> Graph:
    """Return a new graph with edge ``e`` added."""
    w = e[2] if len(e) > 2 else 1.0
    c = _canonical(e[0], e[1], w, g.n)
    if (c[0], c[1]) in g._index:
        raise GraphError(f"duplicate edge ({c[0]}, {c[1]})")
    return new_graph(g.n, g.edges + (c,))


def add_nodes(g: Graph, count: int) -> Graph:
    return new_graph(g.n + int(count), g.edges)


def incidence_row(edge: Sequence) -> IncidenceRow:
    u, v = int(edge[0]), int(edge[1])
    w = float(edge[2]) if len(edge) > 2 else 1.0
    if u == v:
        raise GraphError(f"self-loop at node {u}")
    if w < 0:
        raise GraphError(f"negative weight {w}")
    return IncidenceRow(u, v, math.sqrt(w))


def laplacian(g: Graph) -> np.ndarray:
    """Dense weighted Laplacian, assembled entry by entry.

    Diagonals are accumulated from the same weights as the off-diagonals,
    so rows sum to zero up to rounding in the degree sum.
    """
    L = np.zeros((g.n, g.n))
    for u, v, w in g.edges:
        L[u, v] -= w
        L[v, u] -= w
        L[u, u] += w
        L[v, v] += w
    return L


class UnionFind:
    """Disjoint sets over ``0..n-1`` with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.count = n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.count -= 1
        return True

    def labels(self) -> tuple[int, ...]:
        """Component label per node, numbered by smallest member."""
        roots: dict[int, int] = {}
        out = []
        for x in range(len(self.parent)):
            r = self.find(x)
            out.append(roots.setdefault(r, len(roots)))
        return tuple(out)


def component_labels(g: Graph) -> tuple[int, ...]:
    uf = UnionFind(g.n)
    for u, v, w in g.edges:
        if w > 0:
            uf.union(u, v)
    return uf.labels()


def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    labels = component_labels(g)
    return max(labels) == 0


def unit_weight(u: int, v: int) -> float:
    return 1.0


def candidate_edges(g: Graph, weight_fn: WeightFn | float = 1.0) -> list[CandidateEdge]:
    """All absent pairs ``u < v`` in lexicographic order with their weights."""
    if not callable(weight_fn):
        const = float(weight_fn)
        weight_fn = lambda u, v: const  # noqa: E731
    out = []
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if (u, v) not in g._index:
                out.append(CandidateEdge(u, v, float(weight_fn(u, v))))
    return out
