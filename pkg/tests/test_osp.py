import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from osplab.core import ClockStream, Seed, sample_clock_stream
from osplab.lpp import lpp_batch
from osplab.osp import (
    IncompleteTraceError,
    absorbing_time,
    finishing_times,
    last_swap_times,
    osp_batch,
    simulate_osp,
    simulate_osp_coupled,
)
from osplab.stats import ks_two_sample


def sorting_networks(n):
    """All oriented swap sequences from the identity to the reverse permutation."""
    rev = tuple(range(n, 0, -1))

    def grow(perm, word):
        if perm == rev:
            yield word
            return
        for k in range(n - 1):
            if perm[k] < perm[k + 1]:
                p = list(perm)
                p[k], p[k + 1] = p[k + 1], p[k]
                yield from grow(tuple(p), word + [k + 1])

    return list(grow(tuple(range(1, n + 1)), []))


def test_sorting_network_count_n4():
    assert len(sorting_networks(4)) == 16


def test_figure_one_configuration_exists():
    times = [0.3, 0.8, 1.1, 1.9, 2.4, 3.0]
    hits = []
    for word in sorting_networks(4):
        U = last_swap_times(list(zip(word, times)), 4)
        if U.tolist() == [times[3], times[5], times[4]]:
            hits.append(word)
    assert hits
    for word in hits:
        U = last_swap_times(list(zip(word, times)), 4)
        assert absorbing_time(U) == times[-1]


def test_max_formulas():
    Z = finishing_times([1.0, 3.0, 2.0])
    assert Z.tolist() == [1.0, 3.0, 3.0, 2.0]
    assert absorbing_time([1.0, 3.0, 2.0]) == 3.0
    assert finishing_times([0.4]).tolist() == [0.4, 0.4]
    assert absorbing_time([0.4]) == 0.4


def test_last_swap_times_rejects_bad_traces():
    with pytest.raises(IncompleteTraceError):
        last_swap_times([(1, 0.1), (2, 0.2)], 3)
    with pytest.raises(IncompleteTraceError):
        last_swap_times([(1, 0.1), (1, 0.2), (2, 0.3)], 3)
    with pytest.raises(IncompleteTraceError):
        last_swap_times([(1, 0.3), (2, 0.2), (1, 0.4)], 3)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 25), st.integers(0, 2**32))
def test_simulate_osp_invariants(n, seed):
    res = simulate_osp(n, seed)
    assert len(res.swap_edges) == n * (n - 1) // 2
    assert np.all(np.diff(res.swap_times) > 0)
    assert res.final_permutation() == tuple(range(n, 0, -1))
    U = res.U
    assert np.all(U > 0)
    assert res.T == res.swap_times[-1] == U.max()
    for k in range(1, n):
        assert U[k - 1] == res.swap_times[res.swap_edges == k].max()


def test_simulate_osp_deterministic():
    assert simulate_osp(12, Seed(3, 1, "osp")) == simulate_osp(12, Seed(3, 1, "osp"))
    assert simulate_osp(12, Seed(3, 1, "osp")) != simulate_osp(12, Seed(3, 2, "osp"))


def test_n2_single_swap():
    res = simulate_osp(2, 5)
    assert res.swaps[0][0] == 1 and len(res.swaps) == 1


def test_coupled_examples():
    res = simulate_osp_coupled(2, ClockStream(1.0, {1: [0.7]}))
    assert res.swaps == [(1, 0.7)] and res.T == 0.7 and res.absorbed
    part = simulate_osp_coupled(3, ClockStream(5.0, {1: [0.5, 1.0, 2.0], 2: []}))
    assert not part.absorbed
    with pytest.raises(IncompleteTraceError):
        _ = part.U
    with pytest.raises(ValueError):
        simulate_osp_coupled(3, ClockStream(5.0, {1: [0.5]}))


def test_coupled_deterministic_and_consumes_rings():
    clocks = sample_clock_stream(range(1, 6), 40.0, 9)
    a, b = simulate_osp_coupled(6, clocks), simulate_osp_coupled(6, clocks)
    assert a == b and a.absorbed
    assert a.rings >= 15
    times, edges = clocks.merged()
    assert a.T == times[a.rings - 1]


def test_gillespie_matches_heap_law():
    rng = np.random.default_rng(2024)
    heap = np.array([oracles.heap_osp(6, rng)[0] for _ in range(4000)])
    T, _ = osp_batch(6, range(4000), 77, keep_u=False)
    assert ks_two_sample(heap, T).p_value > 0.001


def test_heap_reports_ring_counts():
    rng = np.random.default_rng(1)
    rings = [oracles.heap_osp(5, rng)[2] for _ in range(200)]
    assert min(rings) >= 10 and np.isfinite(np.mean(rings))


@pytest.mark.parametrize("n,mean", [(2, 1.0), (3, 2.5), (4, 25 / 6)])
def test_small_n_means(n, mean):
    T, _ = osp_batch(n, range(40_000), 5, keep_u=False)
    se = T.std() / np.sqrt(T.size)
    assert abs(T.mean() - mean) < 4 * se


def test_batch_matches_single_runs():
    T, U = osp_batch(7, range(5), 19)
    for r in range(5):
        res = simulate_osp(7, Seed(19, r, "osp"))
        assert T[r] == res.T
        assert np.array_equal(U[r], res.U)


@pytest.mark.parametrize("n", [3, 5, 8])
def test_u_marginals_match_v_marginals(n):
    # Monte Carlo check of the top-k-colors reduction behind the exact U marginals
    _, U = osp_batch(n, range(20_000), 1)
    _, V = lpp_batch(n, range(20_000), 2)
    threshold = 0.001 / (n - 1)
    for k in range(n - 1):
        assert ks_two_sample(U[:, k], V[:, k]).p_value > threshold


def test_u_marginal_reduction_pathwise():
    # last swap at edge k happens exactly when colors n-k+1..n first fill positions 1..k
    n = 6
    for r in range(200):
        res = simulate_osp(n, Seed(4, r, "osp"))
        perm = list(range(1, n + 1))
        first_hit = [None] * (n - 1)
        for k_swap, t in res.swaps:
            perm[k_swap - 1], perm[k_swap] = perm[k_swap], perm[k_swap - 1]
            for k in range(1, n):
                if first_hit[k - 1] is None and set(perm[:k]) == set(range(n - k + 1, n + 1)):
                    first_hit[k - 1] = t
        assert first_hit == res.U.tolist()
