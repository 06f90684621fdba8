"""Laplacian pseudoinverse state and its edge-addition updates.

Two regimes exist when an edge is added to a graph:

* both endpoints already share a component, so the rank is preserved and the
  pseudoinverse changes by a Sherman-Morrison style rank-one correction;
* the endpoints lie in different components, so the rank grows by one and the
  trace of the pseudoinverse *increases* by
  ``(1 + m'L^+m) / ||(I - LL^+)m||^2``.

Gains are evaluated from two columns of the dense pseudoinverse, so a single
evaluation costs O(n); updates cost O(n^2).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, IncidenceRow, UnionFind, component_labels, laplacian


class ComponentError(ValueError):
    """Edge endpoints are in the wrong component relation for the requested update."""


@dataclass(frozen=True)
class PinvState:
    pinv: np.ndarray
    trace: float
    rank: int
    labels: tuple[int, ...]
    laplacian: np.ndarray

    @property
    def n(self) -> int:
        return self.pinv.shape[0]

    @property
    def components(self) -> list[list[int]]:
        groups: dict[int, list[int]] = {}
        for node, lab in enumerate(self.labels):
            groups.setdefault(lab, []).append(node)
        return list(groups.values())

    @property
    def component_sizes(self) -> np.ndarray:
        return np.bincount(np.asarray(self.labels, dtype=np.intp), minlength=1)

    def same_component(self, u: int, v: int) -> bool:
        return self.labels[u] == self.labels[v]


def _labels_from_matrix(L: np.ndarray) -> tuple[int, ...]:
    n = L.shape[0]
    uf = UnionFind(n)
    rows, cols = np.nonzero(np.triu(L, 1))
    for i, j in zip(rows.tolist(), cols.tolist()):
        uf.union(i, j)
    return uf.labels()


def _labels_from_partition(components, n: int) -> tuple[int, ...]:
    # accepts a label sequence or an iterable of node groups
    comps = list(components)
    if len(comps) == n and all(isinstance(c, (int, np.integer)) for c in comps):
        raw = [int(c) for c in comps]
    else:
        raw = [-1] * n
        for k, group in enumerate(comps):
            for node in group:
                raw[node] = k
        if -1 in raw:
            raise ValueError("component partition does not cover every node")
    renumber: dict[int, int] = {}
    return tuple(renumber.setdefault(lab, len(renumber)) for lab in raw)


def pinv_symmetric(L: np.ndarray, components=None) -> PinvState:
    """Moore-Penrose pseudoinverse of a graph Laplacian via ``eigh``.

    Eigenvalues at or below ``n * eps * lambda_max`` are treated as zero.
    ``components`` may be a per-node label sequence or a list of node groups;
    when omitted it is read off the sparsity pattern of ``L``.
    """
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {L.shape}")
    n = L.shape[0]
    asym = np.max(np.abs(L - L.T)) if n else 0.0
    if asym > 1e-8:
        raise ValueError(f"matrix is not symmetric (max asymmetry {asym:.3g})")
    labels = _labels_from_matrix(L) if components is None else _labels_from_partition(components, n)
    if n == 0:
        return PinvState(np.zeros((0, 0)), 0.0, 0, (), L.copy())

    vals, vecs = np.linalg.eigh(L)
    lam_max = max(float(vals[-1]), 0.0)
    tol = n * np.finfo(float).eps * lam_max
    if vals[0] < -tol:
        raise ValueError(f"matrix is not positive semidefinite (eigenvalue {vals[0]:.3g})")
    keep = vals > tol
    rank = int(np.count_nonzero(keep))
    expected = n - len(set(labels))
    if rank != expected:
        raise np.linalg.LinAlgError(
            f"numerical rank {rank} disagrees with {expected} implied by the component structure"
        )
    V = vecs[:, keep]
    P = (V / vals[keep]) @ V.T
    P = 0.5 * (P + P.T)
    return PinvState(P, float(np.trace(P)), rank, labels, L.copy())


def graph_state(g: Graph) -> PinvState:
    return pinv_symmetric(laplacian(g), component_labels(g))


def _quad_and_norm(P: np.ndarray, us, vs, ss):
    diff = P[us, :] - P[vs, :]
    norm2 = (diff * diff).sum(axis=1)
    quad = P[us, us] + P[vs, vs] - 2.0 * P[us, vs]
    s2 = ss * ss
    return s2 * quad, s2 * norm2


def trace_decreases(state: PinvState, us, vs, ss) -> np.ndarray:
    """Vectorized trace decrease for many same-component edges at once.

    ``us``, ``vs``, ``ss`` are equal-length arrays of endpoints and incidence
    scales. Component membership is not checked here; callers that mix
    regimes should use :func:`marginal_trace_decrease`.
    """
    us = np.asarray(us, dtype=np.intp)
    vs = np.asarray(vs, dtype=np.intp)
    ss = np.asarray(ss, dtype=float)
    quad, norm2 = _quad_and_norm(state.pinv, us, vs, ss)
    return norm2 / (1.0 + quad)


def trace_decrease_at(P: np.ndarray, u: int, v: int, s: float) -> float:
    """Scalar twin of :func:`trace_decreases` with the same rounding.

    The row difference is reduced with the same pairwise summation numpy
    applies per row in the batched kernel, so both paths agree bit for bit.
    """
    diff = P[u] - P[v]
    norm2 = float((diff * diff).sum())
    quad = float(P[u, u] + P[v, v] - 2.0 * P[u, v])
    s2 = s * s
    return (s2 * norm2) / (1.0 + s2 * quad)


def _check_same(state: PinvState, row: IncidenceRow) -> None:
    if not state.same_component(row.u, row.v):
        raise ComponentError(
            f"nodes {row.u} and {row.v} are in different components; use attach_update"
        )


def marginal_trace_decrease(state: PinvState, row: IncidenceRow) -> float:
    _check_same(state, row)
    if row.s == 0.0:
        return 0.0
    return trace_decrease_at(state.pinv, row.u, row.v, row.s)


def rank_one_update(state: PinvState, row: IncidenceRow) -> PinvState:
    """Add a rank-preserving edge: ``P - (P m)(P m)' / (1 + m'Pm)``."""
    _check_same(state, row)
    if row.s == 0.0:
        return state
    P = state.pinv
    u, v, s = row.u, row.v, row.s
    k = s * (P[u, :] - P[v, :])
    beta = 1.0 + s * s * (P[u, u] + P[v, v] - 2.0 * P[u, v])
    if not beta > 0.0:
        raise FloatingPointError(f"non-positive beta={beta}; pseudoinverse state is corrupted")
    newP = P - np.outer(k, k) / beta
    decrease = float(k @ k) / beta
    L = state.laplacian.copy()
    w = s * s
    L[u, u] += w
    L[v, v] += w
    L[u, v] -= w
    L[v, u] -= w
    return PinvState(newP, state.trace - decrease, state.rank, state.labels, L)


def project_onto_nullspace(state: PinvState, row: IncidenceRow) -> np.ndarray:
    """``(I - LL^+) m``: replace each entry of m by its component mean.

    The Laplacian null space is spanned by component indicators, so the
    orthogonal projector onto it averages within components.
    """
    labels = np.asarray(state.labels, dtype=np.intp)
    m = row.dense(state.n)
    sizes = np.bincount(labels)
    sums = np.bincount(labels, weights=m, minlength=len(sizes))
    return (sums / sizes)[labels]


def _check_different(state: PinvState, row: IncidenceRow) -> None:
    if state.same_component(row.u, row.v):
        raise ComponentError(
            f"nodes {row.u} and {row.v} share a component; use marginal_trace_decrease"
        )
    if not row.s > 0.0:
        raise ValueError("attaching edge must have positive weight")


def attach_gains(state: PinvState, us, vs, ss) -> np.ndarray:
    """Vectorized trace increase for many component-joining edges.

    For ``m = s(e_u - e_v)`` with u, v in different components of sizes
    ``a`` and ``b``, ``||(I - LL^+)m||^2 = s^2 (1/a + 1/b)``.
    """
    us = np.asarray(us, dtype=np.intp)
    vs = np.asarray(vs, dtype=np.intp)
    ss = np.asarray(ss, dtype=float)
    P = state.pinv
    s2 = ss * ss
    quad = s2 * (P[us, us] + P[vs, vs] - 2.0 * P[us, vs])
    labels = np.asarray(state.labels, dtype=np.intp)
    sizes = np.bincount(labels).astype(float)
    proj = s2 * (1.0 / sizes[labels[us]] + 1.0 / sizes[labels[vs]])
    return (1.0 + quad) / proj


def attach_gain(state: PinvState, row: IncidenceRow) -> float:
    _check_different(state, row)
    return float(attach_gains(state, [row.u], [row.v], [row.s])[0])


def attach_update(state: PinvState, row: IncidenceRow) -> PinvState:
    """Join two components by an edge, recomputing the pseudoinverse."""
    _check_different(state, row)
    u, v, w = row.u, row.v, row.s * row.s
    L = state.laplacian.copy()
    L[u, u] += w
    L[v, v] += w
    L[u, v] -= w
    L[v, u] -= w
    lu, lv = state.labels[u], state.labels[v]
    labels = tuple(lu if lab == lv else lab for lab in state.labels)
    return pinv_symmetric(L, labels)
