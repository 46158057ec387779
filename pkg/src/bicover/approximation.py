"""Cover approximation by sweeping palette budgets 2^s, coloring with a
portfolio of heuristics, and converting the best proper coloring to a cover."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .constructions import kn_cover
from .core import (
    Cover,
    Hypergraph,
    ProperColoring,
    ceil_log2,
    ceil_log2_ratio,
    cover_from_coloring,
    is_proper,
)

PORTFOLIO_SEEDS = (0, 1, 2)
BACKTRACK_BUDGET = 50_000


def greedy_proper_coloring(G: Hypergraph, order: Sequence[int] | None = None) -> ProperColoring:
    """Sequential greedy: each vertex takes the smallest color that does not
    complete a monochromatic edge among already-colored vertices."""
    if order is None:
        order = range(G.n)
    colors = [-1] * G.n
    for v in order:
        forbidden = set()
        for j in G.incidence[v]:
            others = [colors[u] for u in G.edges[j] if u != v]
            if others[0] >= 0 and all(c == others[0] for c in others):
                forbidden.add(others[0])
        c = 0
        while c in forbidden:
            c += 1
        colors[v] = c
    return ProperColoring(tuple(colors))


def peeling_coloring(G: Hypergraph, order: Sequence[int] | None = None) -> ProperColoring:
    """Peel maximal independent sets off the remaining vertices, one color each."""
    if order is None:
        order = range(G.n)
    colors = [-1] * G.n
    remaining = list(order)
    c = 0
    while remaining:
        cls = 0
        rest = []
        for v in remaining:
            blocked = any(
                all((cls >> u) & 1 for u in G.edges[j] if u != v) for j in G.incidence[v]
            )
            if blocked:
                rest.append(v)
            else:
                cls |= 1 << v
                colors[v] = c
        remaining = rest
        c += 1
    return ProperColoring(tuple(colors))


def budgeted_coloring(G: Hypergraph, palette: int, node_budget: int = BACKTRACK_BUDGET
                      ) -> ProperColoring | None:
    """Backtracking search for a proper coloring within ``palette`` colors.

    Gives up (returns None) after ``node_budget`` nodes, so it is a heuristic
    on large inputs and exact on small ones.
    """
    n = G.n
    order = sorted(range(n), key=lambda v: (-G.degree(v), v))
    pos = {v: i for i, v in enumerate(order)}
    closing: list[list[tuple[int, ...]]] = [[] for _ in range(n)]
    for e in G.edges:
        last = max(e, key=lambda v: pos[v])
        closing[pos[last]].append(tuple(u for u in e if u != last))
    colors = [-1] * n
    nodes = 0

    def extend(i: int, used: int) -> bool | None:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            return None
        if i == n:
            return True
        v = order[i]
        for c in range(min(used + 1, palette)):
            if any(all(colors[u] == c for u in rest) for rest in closing[i]):
                continue
            colors[v] = c
            res = extend(i + 1, max(used, c + 1))
            if res is None or res:
                return res
        colors[v] = -1
        return False

    return ProperColoring(tuple(colors)) if extend(0, 0) else None


def portfolio(G: Hypergraph) -> list[tuple[str, ProperColoring]]:
    """The fixed, ordered set of heuristic colorings tried at every budget."""
    natural = list(range(G.n))
    by_degree = sorted(natural, key=lambda v: (-G.degree(v), v))
    orders = [("natural", natural), ("reverse", natural[::-1]), ("max-degree", by_degree)]
    for s in PORTFOLIO_SEEDS:
        orders.append((f"random-{s}", [int(v) for v in np.random.default_rng(s).permutation(G.n)]))
    out = [(f"greedy/{name}", greedy_proper_coloring(G, order)) for name, order in orders]
    out += [(f"peel/{name}", peeling_coloring(G, order)) for name, order in orders[:3]]
    return out


@dataclass
class SweepRecord:
    s: int
    heuristic: str | None
    colors_used: int | None
    cover_size: int | None


@dataclass
class SweepReport:
    records: list[SweepRecord]
    s_star: int | None
    heuristic: str
    coloring: ProperColoring | None
    cover: Cover
    top: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.cover)


def cover_via_coloring_sweep(G: Hypergraph, node_budget: int = BACKTRACK_BUDGET) -> SweepReport:
    """For s = 1 .. ceil(log2(n/(k-1))), look for a proper coloring with at
    most 2^s colors; the smallest such s gives the cover.

    Among colorings that fit, the fewest colors wins, then the
    lexicographically smallest resulting cover.  Heuristic colorings are
    tried first at each budget; a budgeted
    backtracking search is run only for budgets no heuristic meets.  If
    every budget fails the group-labelling cover of the complete hypergraph
    is returned.
    """
    top = ceil_log2_ratio(G.n, G.k - 1)
    tried = portfolio(G)
    for name, col in tried:
        assert is_proper(G, col), name
    records = []
    chosen: tuple[str, ProperColoring] | None = None
    s_star = None
    for s in range(1, top + 1):
        budget = 1 << s
        fits = [(col.palette_size, i, name, col) for i, (name, col) in enumerate(tried)
                if col.palette_size <= budget]
        if not fits:
            col = budgeted_coloring(G, budget, node_budget)
            if col is not None:
                tried.append((f"backtrack/{budget}", col))
                fits = [(col.palette_size, len(tried) - 1, f"backtrack/{budget}", col)]
        if fits:
            used, _, name, col = min(
                fits, key=lambda f: (f[0], cover_from_coloring(G, f[3]).values, f[1]))
            records.append(SweepRecord(s, name, used, ceil_log2(used)))
            if chosen is None:
                chosen, s_star = (name, col), s
        else:
            records.append(SweepRecord(s, None, None, None))
    if chosen is None:
        return SweepReport(records, None, "kn-groups", None, kn_cover(G.n, G.k), top,
                           ["no budget met; complete-hypergraph labelling used"])
    name, col = chosen
    return SweepReport(records, s_star, name, col, cover_from_coloring(G, col), top)
