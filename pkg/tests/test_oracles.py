import itertools
import math

import pytest
from hypothesis import given, settings

from bicover.core import Hypergraph, canonical_partition, ceil_log2, is_proper, verify_cover
from bicover.generators import gen_complete, gen_g1, gen_odd_cycle
from bicover.oracles import (
    CapExceeded,
    exact_alpha,
    exact_chi_c,
    exact_chromatic,
    exact_gamma,
    exact_omega,
    gamma_by_enumeration,
    has_cover_of_size,
    m_bracket,
    m_search,
    max_independent_set,
    oracle_report,
)

from conftest import hypergraphs

# frozen values: (chi_c, chi, alpha, gamma, omega)
EXPECTED = {
    "k4": (2, 4, 1, 1, 4),
    "c5": (2, 3, 2, 2, 2),
    "c7": (2, 3, 3, 3, 2),
    "h_bicolorable": (1, 2, 3, 3, 4),
    "k5_3": (2, 3, 2, 2, 5),
    "g1": (2, 4, 5, 3, 8),
    "k9_3": (3, 5, 2, 2, 9),
}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_golden_oracle_values(golden, name):
    r = oracle_report(golden[name])
    assert (r.chi_c, r.chi, r.alpha, r.gamma, r.omega) == EXPECTED[name]
    assert all(r.checks.values())


def test_chi_c_witness_is_a_cover(golden):
    for G in golden.values():
        x, C = exact_chi_c(G)
        assert len(C) == x and verify_cover(G, C).valid


def test_k93_has_no_two_cover():
    assert has_cover_of_size(gen_complete(9, 3), 2) is None
    assert has_cover_of_size(gen_complete(9, 3), 3) is not None


def test_limit_reports_none():
    assert exact_chi_c(gen_complete(9, 3), limit=2) == (None, None)


def test_edgeless_chi_c_zero():
    x, C = exact_chi_c(Hypergraph(5, 2))
    assert x == 0 and len(C) == 0


def test_vertex_cap():
    G = gen_complete(15, 14)
    for fn in (exact_chi_c, exact_chromatic, exact_alpha, exact_gamma):
        with pytest.raises(CapExceeded) as info:
            fn(G)
        assert info.value.cap == 14


def test_gamma_x_cap():
    with pytest.raises(CapExceeded):
        exact_gamma(gen_complete(9, 2), xcap=3)
    assert exact_gamma(gen_complete(9, 2), xcap=4)[0] == 1


def test_chromatic_examples():
    chi, P = exact_chromatic(gen_complete(9, 3))
    assert chi == 5 and max(len(c) for c in P.classes()) <= 2
    assert exact_chromatic(gen_odd_cycle(7))[0] == 3


def test_alpha_edgeless():
    assert exact_alpha(Hypergraph(6, 3))[0] == 6


def test_omega_examples():
    K53 = gen_complete(5, 3)
    minus_one = Hypergraph(5, 3, K53.edges[1:])
    assert exact_omega(minus_one)[0] == 4
    assert exact_omega(Hypergraph(4, 3)) == (2, (0, 1), True)


def test_gamma_witness_attains_value(golden):
    G = golden["g1"]
    g, W = exact_gamma(G)
    part = canonical_partition(G, W)
    assert part.cover_valid and len(W) == 2 and part.largest == g == 3


@pytest.mark.parametrize("G,expected", [
    (gen_complete(4, 2), 1),
    (gen_odd_cycle(5), 2),
    (gen_odd_cycle(7), 3),
    (gen_complete(8, 2), 1),
])
def test_gamma_matches_enumeration(G, expected):
    assert exact_gamma(G)[0] == expected
    assert gamma_by_enumeration(G)[0] == expected


def test_gamma_enumeration_without_normalization():
    # all ordered covers, no complementation shortcut
    for G in (gen_complete(4, 2), gen_odd_cycle(5), gen_complete(5, 3)):
        assert gamma_by_enumeration(G, normalize=False)[0] == gamma_by_enumeration(G)[0]


@settings(max_examples=60, deadline=None)
@given(hypergraphs(max_n=7))
def test_invariants_on_random(G):
    r = oracle_report(G, xcap=3)
    assert r.chi_c == ceil_log2(r.chi)
    assert is_proper(G, r.coloring)
    if r.gamma is not None:
        assert r.alpha >= r.gamma
        if G.m:
            assert r.gamma >= G.k - 1
        assert r.chi_c >= ceil_log2(-(-G.n // r.gamma))
        assert 2 * r.gamma * r.chi >= G.n


@settings(max_examples=30, deadline=None)
@given(hypergraphs(max_n=6, ks=(2, 3)))
def test_gamma_agrees_with_enumeration(G):
    x, _ = exact_chi_c(G)
    if x == 0 or x > 3:
        return
    assert exact_gamma(G)[0] == gamma_by_enumeration(G)[0]


@settings(max_examples=40, deadline=None)
@given(hypergraphs(max_n=7))
def test_chi_c_brute_force(G):
    # independent check: smallest x with some x-subset of all 2^n bicolorings covering G
    x, _ = exact_chi_c(G)
    masks = []
    for X in range(1 << G.n):
        masks.append(sum(1 << j for j, em in enumerate(G.edge_masks) if X & em in (0, em)))
    full = (1 << G.m) - 1
    best = 0
    while True:
        if any(not (full & _and(T)) for T in itertools.combinations(masks, best)):
            break
        best += 1
    assert x == best


def _and(T):
    out = -1
    for t in T:
        out &= t
    return out


@settings(max_examples=30, deadline=None)
@given(hypergraphs(max_n=9))
def test_branch_and_bound_alpha_agrees(G):
    S, exhausted = max_independent_set(G)
    assert exhausted and len(S) == exact_alpha(G)[0]


def test_m_search_small_values():
    assert m_search(2, 1, 3).value == 3
    assert m_search(2, 1, 5).value == 3
    r = m_search(2, 2, 5)
    assert r.value == 10 and r.witness.edges == gen_complete(5, 2).edges


def test_m_search_refuses_large():
    with pytest.raises(CapExceeded) as info:
        m_search(3, 2, 9)
    rep = info.value.report
    assert (rep.lower_bound, rep.upper_bound, rep.upper_witness) == (8, 84, "K_9^3")


def test_m_bracket_values():
    b = m_bracket(2, 1)
    assert (b.lower_bound, b.upper_bound) == (1, 3)
    assert m_bracket(3, 2).general_upper_bound == 2 * 9 * 2 ** 10
    assert math.comb(9, 3) == 84
