"""Independent reference computations used to check the fast paths.

Nothing here touches the rank-one or attachment update code: every
objective value comes from a fresh eigenvalue decomposition of a Laplacian
assembled locally from an incidence matrix.
"""
from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .graph import CandidateEdge, Graph, is_connected, new_graph

SUBSET_BUDGET = 10**6
MAX_TREE_NODES = 8
_CHUNK = 4096


class BudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    best_value: float
    best_witness: tuple
    instances_examined: int


@dataclass(frozen=True)
class SimulationEstimate:
    coherence_hat: float
    std_error: float
    trials: int
    horizon: float
    dt: float
    seed: int


def _laplacians(n: int, edge_sets: Sequence[Sequence[tuple]]) -> np.ndarray:
    """Stack of Laplacians ``B' diag(w) B`` for a batch of edge lists."""
    out = np.zeros((len(edge_sets), n, n))
    for k, edges in enumerate(edge_sets):
        if not edges:
            continue
        B = np.zeros((len(edges), n))
        w = np.empty(len(edges))
        for r, (u, v, wt) in enumerate(edges):
            B[r, u], B[r, v], w[r] = 1.0, -1.0, wt
        out[k] = B.T @ (w[:, None] * B)
    return out


def _traces(stack: np.ndarray) -> np.ndarray:
    """``trace(L^+)`` for each matrix in a stack; ``inf`` when disconnected."""
    if stack.shape[0] == 0:
        return np.zeros(0)
    n = stack.shape[1]
    lam = np.linalg.eigvalsh(stack)
    cutoff = n * np.finfo(float).eps * np.maximum(lam[:, -1:], 0.0)
    nonzero = lam > cutoff
    inv = np.where(nonzero, 1.0 / np.where(nonzero, lam, 1.0), 0.0)
    tr = inv.sum(axis=1)
    tr[nonzero.sum(axis=1) < n - 1] = np.inf
    return tr


def trace_pinv(n: int, edges: Sequence[tuple]) -> float:
    return float(_traces(_laplacians(n, [list(edges)]))[0])


def _as_triples(candidates) -> list[tuple[int, int, float]]:
    out = []
    for c in candidates:
        if isinstance(c, CandidateEdge):
            out.append((c.u, c.v, c.w))
        else:
            out.append((int(c[0]), int(c[1]), float(c[2]) if len(c) > 2 else 1.0))
    return out


def best_subset_bruteforce(
    g: Graph, candidates, k: int, budget: int = SUBSET_BUDGET
) -> OracleResult:
    """Exact minimizer of ``trace(L^+)`` over all k-subsets of ``candidates``.

    Ties resolve to the first subset in ``itertools.combinations`` order.
    """
    if not is_connected(g):
        raise ValueError("subset oracle requires a connected graph")
    cands = sorted(_as_triples(candidates))
    if not 0 <= k <= len(cands):
        raise ValueError(f"k={k} outside [0, {len(cands)}]")
    total = math.comb(len(cands), k)
    if total > budget:
        raise BudgetExceeded(f"C({len(cands)}, {k}) = {total} subsets exceeds budget {budget}")
    base = list(g.edges)
    best_val, best_set, seen = math.inf, (), 0
    combos = itertools.combinations(range(len(cands)), k)
    while True:
        chunk = list(itertools.islice(combos, _CHUNK))
        if not chunk:
            break
        traces = _traces(_laplacians(g.n, [base + [cands[i] for i in c] for c in chunk]))
        j = int(np.argmin(traces))
        if traces[j] < best_val:
            best_val, best_set = float(traces[j]), tuple(cands[i] for i in chunk[j])
        seen += len(chunk)
    return OracleResult(best_val, best_set, seen)


def prufer_decode(seq: Sequence[int], n: int) -> list[tuple[int, int]]:
    """Edges ``(u, v)`` with ``u < v`` of the labeled tree encoded by ``seq``."""
    if n == 2:
        return [(0, 1)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [i for i in range(n) if degree[i] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((min(leaf, x), max(leaf, x)))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    a, b = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((min(a, b), max(a, b)))
    return edges


def labeled_trees(n: int):
    """Yield every labeled tree on ``n`` nodes as an edge list."""
    for seq in itertools.product(range(n), repeat=max(n - 2, 0)):
        yield prufer_decode(seq, n)


def best_tree_bruteforce(
    n: int, weight_fn: Callable[[int, int], float] | float = 1.0
) -> OracleResult:
    """Exact minimum of ``trace(L^+)`` over all ``n^(n-2)`` labeled trees."""
    if n < 2 or n > MAX_TREE_NODES:
        raise ValueError(f"tree oracle supports 2 <= n <= {MAX_TREE_NODES}, got {n}")
    if not callable(weight_fn):
        const = float(weight_fn)
        weight_fn = lambda u, v: const  # noqa: E731
    W = {(u, v): float(weight_fn(u, v)) for u in range(n) for v in range(u + 1, n)}
    best_val, best_tree, seen = math.inf, (), 0
    trees = labeled_trees(n)
    while True:
        chunk = list(itertools.islice(trees, _CHUNK))
        if not chunk:
            break
        weighted = [[(u, v, W[(u, v)]) for u, v in t] for t in chunk]
        traces = _traces(_laplacians(n, weighted))
        j = int(np.argmin(traces))
        if traces[j] < best_val:
            best_val, best_tree = float(traces[j]), tuple(weighted[j])
        seen += len(chunk)
    return OracleResult(best_val, best_tree, seen)


def _trace_objective(g: Graph) -> float:
    return trace_pinv(g.n, g.edges)


def submodularity_sample(
    g: Graph,
    candidates,
    samples: int,
    seed: int,
    objective: Callable[[Graph], float] | None = None,
    slack: float = 1e-9,
) -> int:
    """Count diminishing-returns violations over random chains ``A <= B``.

    ``objective`` maps a graph to a value being minimized (default
    ``trace(L^+)``); the gain of ``e`` given ``S`` is
    ``objective(S) - objective(S + e)``.
    """
    if not is_connected(g):
        raise ValueError("submodularity sampling requires a connected graph")
    obj = objective or _trace_objective
    cands = sorted(_as_triples(candidates))
    if len(cands) < 1:
        return 0
    rng = np.random.default_rng(seed)
    base = list(g.edges)
    violations = 0
    for _ in range(samples):
        order = rng.permutation(len(cands))
        e = cands[order[0]]
        size_b = int(rng.integers(0, len(cands)))
        b_idx = order[1 : 1 + size_b]
        a_idx = b_idx[rng.random(size_b) < 0.5]
        A = [cands[i] for i in a_idx]
        B = [cands[i] for i in b_idx]

        def gain(S):
            return obj(new_graph(g.n, base + S)) - obj(new_graph(g.n, base + S + [e]))

        if gain(A) < gain(B) - slack:
            violations += 1
    return violations


def simulate_coherence(
    g: Graph,
    dt: float | None = None,
    horizon: float | None = None,
    trials: int = 200,
    seed: int = 0,
) -> SimulationEstimate:
    """Monte Carlo estimate of steady-state disagreement under noisy consensus.

    Integrates ``dx = -L x dt + dW`` from ``x(0) = 0`` with Euler-Maruyama,
    time-averages ``x' P x`` over the second half of each trajectory and
    reports the mean and standard error across independent trials. Defaults:
    ``dt = 0.01 / lambda_max`` and ``horizon = 40 / lambda_2``.
    """
    if not is_connected(g) or g.n < 2:
        raise ValueError("simulation requires a connected graph with at least two nodes")
    if trials < 2:
        raise ValueError("need at least two trials for a standard error")
    n = g.n
    L = _laplacians(n, [list(g.edges)])[0]
    lam = np.linalg.eigvalsh(L)
    lam2, lam_max = float(lam[1]), float(lam[-1])
    if dt is None:
        dt = 0.01 / lam_max
    if dt <= 0 or dt > 0.1 / lam_max:
        raise ValueError(f"dt={dt} is outside the stable range (0, {0.1 / lam_max:.4g}]")
    if horizon is None:
        horizon = 40.0 / lam2
    if horizon < 10.0 / lam2:
        raise ValueError(f"horizon={horizon} is shorter than the mixing bound {10.0 / lam2:.4g}")

    rng = np.random.default_rng(seed)
    steps = int(math.ceil(horizon / dt))
    burn = steps // 2
    step = np.eye(n) - dt * L
    sd = math.sqrt(dt)
    X = np.zeros((trials, n))
    acc = np.zeros(trials)
    block = 256
    done = 0
    while done < steps:
        m = min(block, steps - done)
        noise = rng.standard_normal((m, trials, n)) * sd
        for j in range(m):
            X = X @ step + noise[j]
            if done + j >= burn:
                dev = X - X.mean(axis=1, keepdims=True)
                acc += np.einsum("ij,ij->i", dev, dev)
        done += m
    per_trial = acc / (steps - burn)
    mean = float(per_trial.mean())
    se = float(per_trial.std(ddof=1) / math.sqrt(trials))
    return SimulationEstimate(mean, se, trials, float(horizon), float(dt), int(seed))
