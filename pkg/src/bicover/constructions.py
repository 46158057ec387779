"""Deterministic cover constructions: group labelling for complete
hypergraphs, the matching-based scheme and the hitting-set scheme."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import (
    Bicoloring,
    Cover,
    Hypergraph,
    ceil_log2,
    ceil_log2_ratio,
    is_hitting_set,
    is_matching,
    verify_cover,
)


class ConstructionError(ValueError):
    pass


@dataclass
class ConstructionTrace:
    algorithm: str
    input_size: int
    cover: Cover
    bound: int
    levels: list[dict] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.cover)

    @property
    def within_bound(self) -> bool:
        return self.size <= self.bound


def _group_label_colorings(n: int, vertices: Sequence[int], group_size: int,
                           fill: Sequence[int] | None = None) -> list[Bicoloring]:
    """Split ``vertices`` into consecutive groups of ``group_size`` and emit
    one bicoloring per bit of the group index.  Vertices outside the list
    keep their color from ``fill`` (0 if not given)."""
    groups = -(-len(vertices) // group_size)
    x = ceil_log2(groups)
    out = []
    for i in range(x):
        bits = list(fill) if fill is not None else [0] * n
        for pos, v in enumerate(vertices):
            bits[v] = ((pos // group_size) >> i) & 1
        out.append(Bicoloring(tuple(bits)))
    return out


def kn_cover(n: int, k: int) -> Cover:
    """Cover of the complete k-uniform hypergraph on n vertices.

    Vertices are placed in groups of k-1 and a vertex's color in bicoloring
    i is bit i of its group index.  Any k vertices span two groups, whose
    indices differ in some bit.  Size is ceil(log2 ceil(n/(k-1))).
    """
    if not 2 <= k <= n:
        raise ConstructionError(f"kn_cover needs 2 <= k <= n, got n={n}, k={k}")
    return Cover(n, tuple(_group_label_colorings(n, range(n), k - 1)))


def mbc_bound(matching_size: int) -> int:
    return ceil_log2(matching_size) + 2


def hbc_bound(hitting_size: int, k: int) -> int:
    return ceil_log2_ratio(hitting_size, k - 1) + 1


def _check_maximal_matching(G: Hypergraph, M: Sequence[tuple[int, ...]]) -> None:
    edge_set = set(G.edges)
    for e in M:
        if tuple(sorted(e)) not in edge_set:
            raise ConstructionError(f"matching edge {tuple(e)} is not an edge of G")
    if not is_matching(G, M):
        raise ConstructionError("edge set is not a matching (two edges share a vertex)")
    covered = set(v for e in M for v in e)
    for e in G.edges:
        if not covered.intersection(e):
            raise ConstructionError(f"matching is not maximal: edge {e} can be added")


def mbc(G: Hypergraph, M: Iterable[Sequence[int]]) -> ConstructionTrace:
    """Cover from a maximal matching, at most ceil(log2 |M|) + 2 bicolorings.

    Level 0 separates matched vertices (0) from the rest (1).  Then the
    matched edges are halved recursively; all groups at one recursion depth
    share a single bicoloring (first half 0, second half 1, vertices outside
    active groups keep their previous color).  A last bicoloring splits every
    matched edge internally.
    """
    M = [tuple(sorted(e)) for e in M]
    _check_maximal_matching(G, M)
    n = G.n
    if not M:
        return ConstructionTrace("mbc", 0, Cover(n, ()), 0)
    matched = {v for e in M for v in e}
    level0 = [0 if v in matched else 1 for v in range(n)]
    colorings = [Bicoloring(tuple(level0))]
    levels = [{"level": 0, "rule": "matched vertices 0, others 1"}]

    prev = level0
    groups = [M]
    depth = 0
    while any(len(g) > 1 for g in groups):
        depth += 1
        bits = list(prev)
        next_groups = []
        splits = []
        for g in groups:
            if len(g) == 1:
                next_groups.append(g)
                continue
            half = len(g) // 2
            A, B = g[:half], g[half:]
            for e in A:
                for v in e:
                    bits[v] = 0
            for e in B:
                for v in e:
                    bits[v] = 1
            next_groups.extend([A, B])
            splits.append([len(A), len(B)])
        colorings.append(Bicoloring(tuple(bits)))
        levels.append({"level": depth, "splits": splits})
        prev = bits
        groups = next_groups

    bits = list(prev)
    lead = -(-G.k // 2)
    for e in M:
        for pos, v in enumerate(e):
            bits[v] = 0 if pos < lead else 1
    colorings.append(Bicoloring(tuple(bits)))
    levels.append({"level": depth + 1, "rule": f"each matched edge split {lead}/{G.k - lead}"})
    return ConstructionTrace("mbc", len(M), Cover(n, tuple(colorings)), mbc_bound(len(M)), levels)


def hbc(G: Hypergraph, H: Iterable[int]) -> ConstructionTrace:
    """Cover from a hitting set, at most ceil(log2(|H|/(k-1))) + 1 bicolorings.

    The first bicoloring puts H on 0 and everything else on 1, leaving only
    edges inside H monochromatic; the complete-hypergraph group labelling on
    H's vertices then splits those.
    """
    H = sorted(set(H))
    if any(not 0 <= v < G.n for v in H):
        raise ConstructionError("hitting set has a vertex outside the hypergraph")
    if not is_hitting_set(G, H):
        missed = next(e for e in G.edges if not set(H).intersection(e))
        raise ConstructionError(f"not a hitting set: edge {missed} is missed")
    n = G.n
    if G.m == 0:
        return ConstructionTrace("hbc", len(H), Cover(n, ()), 0)
    hs = set(H)
    first = [0 if v in hs else 1 for v in range(n)]
    rest = _group_label_colorings(n, H, G.k - 1, fill=first)
    groups = -(-len(H) // (G.k - 1))
    levels = [
        {"level": 0, "rule": "hitting set 0, others 1"},
        {"level": 1, "rule": f"{groups} groups of <= {G.k - 1} hitting-set vertices, binary labels",
         "bicolorings": len(rest)},
    ]
    cover = Cover(n, (Bicoloring(tuple(first)), *rest))
    return ConstructionTrace("hbc", len(H), cover, hbc_bound(len(H), G.k), levels)


def kn_trace(n: int, k: int) -> ConstructionTrace:
    cover = kn_cover(n, k)
    return ConstructionTrace(
        "kn", n, cover, ceil_log2_ratio(n, k - 1),
        [{"level": 0, "rule": f"{-(-n // (k - 1))} groups of <= {k - 1} vertices, binary labels"}],
    )


def check_trace(G: Hypergraph, trace: ConstructionTrace) -> bool:
    return verify_cover(G, trace.cover).valid and trace.within_bound
