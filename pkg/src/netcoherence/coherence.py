"""Network coherence: half the trace of the Laplacian pseudoinverse."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph, is_connected, laplacian
from .pinv import graph_state


class DisconnectedGraphError(ValueError):
    pass


@dataclass(frozen=True)
class CoherenceValue:
    value: float
    trace_pinv: float

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)


DISCONNECTED = CoherenceValue(math.inf, math.inf)


def coherence(g: Graph) -> CoherenceValue:
    """Coherence of ``g``; the infinite sentinel when ``g`` is disconnected."""
    if not is_connected(g):
        return DISCONNECTED
    tr = graph_state(g).trace
    return CoherenceValue(0.5 * tr, tr)


def coherence_spectral(g: Graph) -> CoherenceValue:
    """Coherence from the Laplacian spectrum, ``0.5 * sum(1/lambda_i)`` for i >= 2."""
    if g.n < 2:
        raise DisconnectedGraphError("coherence needs at least two nodes")
    lam = np.linalg.eigvalsh(laplacian(g))
    cutoff = g.n * np.finfo(float).eps * max(lam[-1], 0.0)
    if lam[1] <= cutoff:
        raise DisconnectedGraphError(f"graph is disconnected (lambda_2 = {lam[1]:.3g})")
    tr = float(np.sum(1.0 / lam[1:]))
    return CoherenceValue(0.5 * tr, tr)
