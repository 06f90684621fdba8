import itertools
import math

import numpy as np
import pytest

from conftest import complete, path, random_connected, star
from netcoherence.graph import candidate_edges, new_graph
from netcoherence.greedy import lazy_greedy, naive_greedy
from netcoherence.oracle import (
    BudgetExceeded,
    best_subset_bruteforce,
    best_tree_bruteforce,
    labeled_trees,
    prufer_decode,
    simulate_coherence,
    submodularity_sample,
    trace_pinv,
)


def test_subset_oracle_path4():
    g = path(4)
    res = best_subset_bruteforce(g, candidate_edges(g), 1)
    assert res.best_witness == ((0, 3, 1.0),)
    assert res.best_value == pytest.approx(1.25, rel=1e-12)
    assert res.instances_examined == 3


def test_subset_oracle_edge_cases():
    g = path(5)
    cands = candidate_edges(g)
    everything = best_subset_bruteforce(g, cands, len(cands))
    assert len(everything.best_witness) == len(cands)
    assert everything.best_value == pytest.approx(4 / 5, rel=1e-12)  # K5
    nothing = best_subset_bruteforce(g, cands, 0)
    assert nothing.best_witness == ()
    assert nothing.best_value == pytest.approx((25 - 1) / 6, rel=1e-12)
    assert nothing.instances_examined == 1


def test_subset_oracle_budget():
    g = path(30)
    with pytest.raises(BudgetExceeded):
        best_subset_bruteforce(g, candidate_edges(g), 3, budget=1000)


def test_subset_oracle_counts(rng):
    g = random_connected(rng, 7, extra_p=0.1)
    cands = candidate_edges(g)
    res = best_subset_bruteforce(g, cands, 2)
    assert res.instances_examined == math.comb(len(cands), 2)


def test_oracle_never_worse_than_greedy(rng):
    for _ in range(15):
        g = random_connected(rng, int(rng.integers(4, 8)), extra_p=0.1, weighted=True)
        cands = candidate_edges(g)
        k = int(rng.integers(1, min(3, len(cands)) + 1))
        opt = best_subset_bruteforce(g, cands, k)
        for engine in (naive_greedy, lazy_greedy):
            assert opt.best_value <= engine(g, cands, k).trace_after + 1e-9


def test_prufer_roundtrip_small():
    assert prufer_decode([], 2) == [(0, 1)]
    assert sorted(prufer_decode([0], 3)) == [(0, 1), (0, 2)]
    assert sorted(prufer_decode([3, 3, 3], 5)) == [(0, 3), (1, 3), (2, 3), (3, 4)]


@pytest.mark.parametrize("n", range(2, 7))
def test_prufer_enumerates_distinct_trees(n):
    trees = [frozenset(t) for t in labeled_trees(n)]
    assert len(trees) == n ** (n - 2)
    assert len(set(trees)) == len(trees)
    for t in trees[:50]:
        assert len(t) == n - 1


def test_tree_oracle_values():
    assert best_tree_bruteforce(3).best_value == pytest.approx(4 / 3)
    four = best_tree_bruteforce(4)
    assert four.best_value == pytest.approx(2.25)
    assert four.instances_examined == 16
    degrees = np.bincount([x for e in four.best_witness for x in e[:2]], minlength=4)
    assert degrees.max() == 3
    with pytest.raises(ValueError):
        best_tree_bruteforce(9)


def test_tree_oracle_weighted():
    # heavy spokes at node 2 make that star optimal
    res = best_tree_bruteforce(4, lambda u, v: 5.0 if 2 in (u, v) else 1.0)
    assert all(2 in e[:2] for e in res.best_witness)
    assert res.best_value == pytest.approx(2.25 / 5, rel=1e-12)
    assert res.best_value == pytest.approx(trace_pinv(4, res.best_witness))


def test_trace_pinv_disconnected_is_inf():
    assert math.isinf(trace_pinv(3, [(0, 1, 1.0)]))


def test_submodularity_sampler_finds_known_violation():
    base = new_graph(7, [(0, 1), (0, 4), (1, 2), (1, 6), (2, 6), (3, 6), (4, 5), (5, 6)])
    assert submodularity_sample(base, [(0, 2), (2, 3)], 200, seed=1) > 0


def test_submodularity_sampler_modular_objective(rng):
    g = random_connected(rng, 8)
    edge_count = lambda graph: -graph.num_edges  # noqa: E731
    assert submodularity_sample(g, candidate_edges(g), 100, seed=3, objective=edge_count) == 0


def test_submodularity_sampler_is_seeded(rng):
    g = random_connected(rng, 9, extra_p=0.2)
    c = candidate_edges(g)
    assert submodularity_sample(g, c, 30, seed=4) == submodularity_sample(g, c, 30, seed=4)


def test_submodularity_sampler_degenerate_pool():
    assert submodularity_sample(path(3), [(0, 2)], 20, seed=0) == 0


@pytest.mark.parametrize(
    "g, exact",
    [(new_graph(2, [(0, 1)]), 0.25), (complete(3), 1 / 3), (star(5), 1.6)],
)
def test_simulation_matches_analytic(g, exact):
    est = simulate_coherence(g, seed=11)
    assert abs(est.coherence_hat - exact) <= 3 * est.std_error
    assert est.std_error > 0 and est.coherence_hat > 0
    assert est.std_error < 0.05 * exact
    assert est.seed == 11


def test_simulation_error_shrinks_with_trials():
    g = complete(3)
    small = simulate_coherence(g, trials=50, seed=5)
    large = simulate_coherence(g, trials=200, seed=6)
    assert 1.5 <= small.std_error / large.std_error <= 3.0


def test_simulation_is_deterministic():
    g = path(3)
    assert simulate_coherence(g, trials=20, seed=9) == simulate_coherence(g, trials=20, seed=9)


def test_simulation_preconditions():
    with pytest.raises(ValueError):
        simulate_coherence(new_graph(3, [(0, 1)]), seed=0)
    with pytest.raises(ValueError):
        simulate_coherence(complete(3), dt=0.1, seed=0)  # lambda_max = 3
    with pytest.raises(ValueError):
        simulate_coherence(complete(3), horizon=1.0, seed=0)
