import numpy as np
import pytest

from netcoherence.graph import new_graph


def random_connected(rng, n, extra_p=0.3, weighted=False):
    """Random spanning tree plus independent extra edges; always connected."""
    order = rng.permutation(n)
    edges = {}
    for i in range(1, n):
        u, v = int(order[i]), int(order[rng.integers(i)])
        edges[(min(u, v), max(u, v))] = None
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < extra_p:
                edges[(u, v)] = None
    return new_graph(n, [(u, v, rng.uniform(0.2, 3.0) if weighted else 1.0) for u, v in edges])


def path(n):
    return new_graph(n, [(i, i + 1) for i in range(n - 1)])


def star(n, hub=0):
    return new_graph(n, [(hub, i) for i in range(n) if i != hub])


def complete(n):
    return new_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def eig_trace(L):
    """trace(L+) from eigenvalues; independent of the package's pseudoinverse."""
    lam = np.linalg.eigvalsh(L)
    cut = L.shape[0] * np.finfo(float).eps * max(lam[-1], 0.0)
    return float(sum(1.0 / x for x in lam if x > cut))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
