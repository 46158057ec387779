import statistics

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bicover.core import Hypergraph, ceil_log2_ratio, dependency, verify_cover
from bicover.generators import gen_bounded_dependency, gen_complete, gen_random_m_edges
from bicover.randomized import (
    BitSource,
    DependencyBudget,
    NonTermination,
    PreconditionError,
    check_run,
    max_dependency_for,
    min_cover_size_for_dependency,
    mtc,
    sparse_bound,
    sparse_random_cover,
)


def test_bit_source_counts_and_replays():
    a, b = BitSource(5), BitSource(5)
    x = a.bits((3, 4))
    assert a.used == 12
    assert np.array_equal(x, b.bits((3, 4)))
    assert set(np.unique(x)) <= {0, 1}


def test_sparse_k3_x1_two_edges():
    G = Hypergraph(6, 3, ((0, 1, 2), (3, 4, 5)))
    assert sparse_bound(3, 1) == 2
    attempts = [sparse_random_cover(G, 1, s).iterations for s in range(2000)]
    assert statistics.fmean(attempts) < 2


def test_sparse_edgeless_first_attempt():
    run = sparse_random_cover(Hypergraph(5, 3), 3, 0)
    assert run.iterations == 1 and run.bits_used == 15


def test_sparse_m8_mean_attempts():
    G = gen_random_m_edges(10, 3, 8, 0)
    runs = [sparse_random_cover(G, 2, s) for s in range(1000)]
    assert all(check_run(G, r) for r in runs)
    assert statistics.fmean(r.iterations for r in runs) < 2


def test_sparse_precondition():
    G = gen_random_m_edges(10, 3, 9, 0)
    with pytest.raises(PreconditionError, match="2\\^"):
        sparse_random_cover(G, 2, 0)
    assert check_run(G, sparse_random_cover(G, 2, 0, override=True))


def test_sparse_retry_limit_transcript():
    with pytest.raises(NonTermination) as info:
        sparse_random_cover(gen_complete(9, 3), 1, 0, override=True, retry_limit=5)
    assert len(info.value.transcript) == 5


def test_max_dependency_examples():
    assert DependencyBudget(3, 2).max_dependency == 4
    assert max_dependency_for(1, 3) == 0
    assert min_cover_size_for_dependency(0, 3) == 1
    assert max_dependency_for(1, 2) == -1


@pytest.mark.parametrize("s", [1, 2, 3, 4, 5, 10, 20, 40, 63, 64, 100, 200])
def test_floor_matches_high_precision(s):
    with mpmath.workdps(s + 50):
        expected = int(mpmath.floor(mpmath.mpf(2) ** s / mpmath.e)) - 1
    assert max_dependency_for(s, 2) == expected


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 12), st.integers(2, 8))
def test_budget_monotone_and_consistent(x, k):
    d = max_dependency_for(x, k)
    assert max_dependency_for(x + 1, k) >= d
    assert max_dependency_for(x, k + 1) >= d
    if d >= 0:
        assert min_cover_size_for_dependency(d, k) <= x


def test_budget_practicality_ceiling():
    # x = log2(n/(k-1)) exactly: the budget is the largest d <= (n/(k-1))^(k-1)/e - 1
    for n, k in [(8, 3), (16, 3), (24, 4), (32, 2), (64, 5)]:
        ratio = n // (k - 1)
        x = ceil_log2_ratio(n, k - 1)
        assert 2**x == ratio
        d = max_dependency_for(x, k)
        with mpmath.workdps(60):
            ceiling = mpmath.mpf(ratio) ** (k - 1) / mpmath.e - 1
            assert d <= ceiling < d + 1


def test_mtc_d4_instance():
    G = gen_bounded_dependency(20, 3, 20, 4, 1)
    assert dependency(G) <= 4
    for seed in range(50):
        run = mtc(G, 2, seed)
        assert verify_cover(G, run.cover).valid
        assert run.bits_used == G.n * 2 + run.iterations * G.k * 2
        assert len(run.transcript) == run.iterations


def test_mtc_perfect_matching():
    G = Hypergraph(9, 3, ((0, 1, 2), (3, 4, 5), (6, 7, 8)))
    run = mtc(G, 1, 3)
    assert check_run(G, run)


def test_mtc_precondition():
    with pytest.raises(PreconditionError):
        mtc(gen_complete(6, 3), 2, 0)


def test_mtc_guard():
    with pytest.raises(NonTermination) as info:
        mtc(gen_complete(9, 3), 1, 0, override=True, max_resamples=10)
    assert len(info.value.transcript) == 10


def test_mtc_resamples_only_chosen_edge():
    G = gen_bounded_dependency(15, 3, 12, 4, 3)
    seed = next(s for s in range(200) if mtc(G, 2, s).iterations >= 2)
    run = mtc(G, 2, seed)
    # replay the bit stream by hand
    src = np.random.default_rng(seed)
    colors = src.integers(0, 2, size=(2, G.n), dtype=np.uint8)
    for j in run.transcript:
        e = list(G.edges[j])
        sub = colors[:, e]
        assert (sub == sub[:, :1]).all()
        others = [v for v in range(G.n) if v not in e]
        before = colors[:, others].copy()
        colors[:, e] = src.integers(0, 2, size=(2, G.k), dtype=np.uint8)
        assert np.array_equal(before, colors[:, others])
    assert [tuple(r) for r in colors] == [X.bits for X in run.cover.colorings]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 50))
def test_determinism(seed, inst):
    G = gen_bounded_dependency(14, 3, 10, 4, inst)
    a, b = mtc(G, 2, seed), mtc(G, 2, seed)
    assert (a.transcript, a.cover, a.bits_used) == (b.transcript, b.cover, b.bits_used)
    H = gen_random_m_edges(10, 3, 8, inst)
    s1, s2 = sparse_random_cover(H, 2, seed), sparse_random_cover(H, 2, seed)
    assert (s1.iterations, s1.cover, s1.transcript) == (s2.iterations, s2.cover, s2.transcript)
    assert s1.bits_used == s1.iterations * H.n * 2
