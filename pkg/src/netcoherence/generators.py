"""Seeded test-graph generators: Erdos-Renyi, cycle, Barabasi-Albert, complete."""
from __future__ import annotations

import math

import numpy as np

from .graph import Graph, is_connected, new_graph

KINDS = ("er", "cycle", "ba", "complete")


def er_probability(n: int, c: float) -> float:
    """Edge probability ``c * ln(n) / n`` clamped to (0, 1]."""
    if n < 2:
        raise ValueError("er graphs need n >= 2")
    p = c * math.log(n) / n
    if not p > 0:
        raise ValueError(f"er probability {p} is not positive (c={c}, n={n})")
    return min(p, 1.0)


def erdos_renyi(n: int, c: float, seed: int, max_retries: int = 1000) -> tuple[Graph, int]:
    """Connected G(n, p) sample; returns the graph and the attempt count."""
    p = er_probability(n, c)
    rng = np.random.default_rng(seed)
    iu, iv = np.triu_indices(n, 1)
    for attempt in range(1, max_retries + 1):
        keep = rng.random(iu.size) < p
        g = new_graph(n, zip(iu[keep].tolist(), iv[keep].tolist()))
        if is_connected(g):
            return g, attempt
    raise RuntimeError(f"no connected er graph after {max_retries} attempts (n={n}, p={p:.4g})")


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs n >= 3")
    return new_graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete graph needs n >= 1")
    return new_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def barabasi_albert(n: int, m: int, seed: int) -> Graph:
    """Preferential attachment: each arriving node links to ``m`` existing nodes.

    Seeds with a clique on ``m + 1`` nodes; targets are drawn without
    replacement with probability proportional to degree. ``m = 1`` gives a tree.
    """
    if m < 1 or n <= m:
        raise ValueError(f"ba needs m >= 1 and n > m (got n={n}, m={m})")
    rng = np.random.default_rng(seed)
    edges = [(u, v) for u in range(m + 1) for v in range(u + 1, m + 1)]
    # each node appears once per incident edge
    ends = [x for e in edges for x in e]
    for new in range(m + 1, n):
        targets: set[int] = set()
        while len(targets) < m:
            targets.add(ends[int(rng.integers(len(ends)))])
        for t in sorted(targets):
            edges.append((t, new))
            ends += [t, new]
    return new_graph(n, edges)


def generate(kind: str, n: int, seed: int | None = None, c: float = 1.1, m: int = 1,
             max_retries: int = 1000) -> tuple[Graph, dict]:
    """Dispatch to a generator; returns the graph and a metadata record."""
    meta: dict = {"kind": kind, "n": n, "seed": seed}
    if kind == "er":
        if seed is None:
            raise ValueError("er generation requires a seed")
        g, attempts = erdos_renyi(n, c, seed, max_retries)
        meta.update(c=c, p=er_probability(n, c), attempts=attempts)
    elif kind == "ba":
        if seed is None:
            raise ValueError("ba generation requires a seed")
        g = barabasi_albert(n, m, seed)
        meta.update(m=m)
    elif kind == "cycle":
        g = cycle(n)
    elif kind == "complete":
        g = complete(n)
    else:
        raise ValueError(f"unknown generator {kind!r}; choose from {', '.join(KINDS)}")
    meta["edges"] = g.num_edges
    return g, meta
