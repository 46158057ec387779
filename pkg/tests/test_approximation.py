from hypothesis import given, settings

from bicover.approximation import (
    budgeted_coloring,
    cover_via_coloring_sweep,
    greedy_proper_coloring,
    peeling_coloring,
    portfolio,
)
from bicover.core import Hypergraph, ceil_log2, cover_from_coloring, is_proper, verify_cover
from bicover.generators import gen_complete, gen_g1, gen_odd_cycle
from bicover.oracles import exact_chi_c

from conftest import hypergraphs


def test_greedy_examples():
    assert greedy_proper_coloring(gen_complete(4, 2)).palette_size == 4
    assert greedy_proper_coloring(Hypergraph(5, 3)).palette_size == 1
    P = greedy_proper_coloring(gen_complete(9, 3))
    assert is_proper(gen_complete(9, 3), P) and P.palette_size <= 5


def test_bipartite_sweep():
    G = Hypergraph(6, 2, ((0, 3), (1, 4), (2, 5), (0, 5)))
    rep = cover_via_coloring_sweep(G)
    assert rep.s_star == 1 and rep.size == 1


def test_k93_sweep_optimal():
    rep = cover_via_coloring_sweep(gen_complete(9, 3))
    assert rep.size == 3 and verify_cover(gen_complete(9, 3), rep.cover).valid


def test_g1_sweep_optimal():
    rep = cover_via_coloring_sweep(gen_g1())
    assert rep.size == 2 and verify_cover(gen_g1(), rep.cover).valid


def test_g1_needs_more_than_greedy():
    # no fixed-order heuristic finds a 4-coloring of G1; the budgeted search does
    G = gen_g1()
    assert min(c.palette_size for _, c in portfolio(G)) > 4
    P = budgeted_coloring(G, 4)
    assert P is not None and is_proper(G, P) and P.palette_size <= 4


def test_budgeted_coloring_refuses_impossible():
    assert budgeted_coloring(gen_odd_cycle(7), 2) is None


def test_edgeless_sweep():
    rep = cover_via_coloring_sweep(Hypergraph(4, 2))
    assert rep.size == 0


def test_chosen_record_matches_cover():
    rep = cover_via_coloring_sweep(gen_odd_cycle(7))
    chosen = next(r for r in rep.records if r.s == rep.s_star)
    assert chosen.cover_size == ceil_log2(chosen.colors_used) == rep.size


def test_portfolio_is_proper_and_deterministic():
    G = gen_g1()
    a, b = portfolio(G), portfolio(G)
    assert [n for n, _ in a] == [n for n, _ in b]
    assert [c.colors for _, c in a] == [c.colors for _, c in b]
    assert all(is_proper(G, c) for _, c in a)


@settings(max_examples=80, deadline=None)
@given(hypergraphs(max_n=8))
def test_sweep_sound(G):
    rep = cover_via_coloring_sweep(G)
    assert verify_cover(G, rep.cover).valid
    x, _ = exact_chi_c(G)
    assert x <= rep.size <= ceil_log2(-(-G.n // (G.k - 1)))
    if rep.coloring is not None:
        assert len(cover_from_coloring(G, rep.coloring)) == rep.size


@settings(max_examples=80, deadline=None)
@given(hypergraphs(max_n=10))
def test_heuristics_proper(G):
    assert is_proper(G, greedy_proper_coloring(G, range(G.n - 1, -1, -1)))
    assert is_proper(G, peeling_coloring(G))
