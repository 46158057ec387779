"""Hypergraphs, bicolorings, covers and the conversions between covers and
proper colorings.

Vertices are 0-based everywhere in this module.  A bicoloring over ``n``
vertices is also available as an integer whose bit ``i`` is the color of
vertex ``i``; edge ``e`` likewise has an integer mask.  Those two integer
views are what the search code works on.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence


class DimensionError(ValueError):
    """A bicoloring or cover does not match the hypergraph's vertex count."""


class InvalidCoverError(ValueError):
    pass


class ImproperColoringError(ValueError):
    pass


class DuplicateEdgeWarning(UserWarning):
    pass


def ceil_log2(value: int) -> int:
    """Smallest x >= 0 with 2**x >= value (0 for value <= 1)."""
    if value <= 1:
        return 0
    return (value - 1).bit_length()


def ceil_log2_ratio(num: int, den: int) -> int:
    """Smallest x >= 0 with 2**x * den >= num, in exact integer arithmetic."""
    if den <= 0:
        raise ValueError("denominator must be positive")
    if num <= den:
        return 0
    # 2**x >= num/den  <=>  2**x >= ceil(num/den)
    return ceil_log2(-(-num // den))


def popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class Hypergraph:
    """A k-uniform hypergraph on vertices ``0..n-1``.

    Edges are canonicalized on construction: each edge is sorted, duplicates
    are dropped (with a :class:`DuplicateEdgeWarning`) and the edge list is
    stored in lexicographic order.
    """

    n: int
    k: int
    edges: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"vertex count must be positive, got {self.n}")
        if not 2 <= self.k <= self.n:
            raise ValueError(f"uniformity must satisfy 2 <= k <= n, got k={self.k}, n={self.n}")
        canon = set()
        count = 0
        for raw in self.edges:
            e = tuple(sorted(int(v) for v in raw))
            if len(e) != self.k or len(set(e)) != self.k:
                raise ValueError(f"edge {raw!r} does not have {self.k} distinct vertices")
            if e[0] < 0 or e[-1] >= self.n:
                raise ValueError(f"edge {raw!r} has a vertex outside [0, {self.n})")
            canon.add(e)
            count += 1
        if len(canon) != count:
            warnings.warn(
                f"{count - len(canon)} duplicate edge(s) dropped", DuplicateEdgeWarning, stacklevel=3
            )
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << v for v in e) for e in self.edges)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """Edge indices incident to each vertex."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for j, e in enumerate(self.edges):
            for v in e:
                inc[v].append(j)
        return tuple(tuple(x) for x in inc)

    @property
    def full_vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def induced(self, vertices: Iterable[int]) -> tuple["Hypergraph", list[int]]:
        """Sub-hypergraph induced on ``vertices``, relabelled to 0..n'-1.

        Returns the hypergraph and the list mapping new ids to old ids.
        """
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        edges = [tuple(index[v] for v in e) for e in self.edges if all(v in index for v in e)]
        return Hypergraph(len(keep), self.k, tuple(edges)), keep

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, k={self.k}, m={self.m})"


@dataclass(frozen=True)
class Bicoloring:
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError("bicoloring bits must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_int(cls, value: int, n: int) -> "Bicoloring":
        return cls(tuple((value >> i) & 1 for i in range(n)))

    @classmethod
    def from_string(cls, s: str) -> "Bicoloring":
        if set(s) - {"0", "1"}:
            raise ValueError(f"bicoloring string must be over {{0,1}}: {s!r}")
        return cls(tuple(int(c) for c in s))

    @classmethod
    def from_classes(cls, n: int, one: Iterable[int]) -> "Bicoloring":
        ones = set(one)
        return cls(tuple(1 if v in ones else 0 for v in range(n)))

    @cached_property
    def value(self) -> int:
        return sum(b << i for i, b in enumerate(self.bits))

    @property
    def n(self) -> int:
        return len(self.bits)

    def complement(self) -> "Bicoloring":
        return Bicoloring(tuple(1 - b for b in self.bits))

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class Cover:
    """An ordered sequence of bicolorings of ``n`` vertices (possibly empty)."""

    n: int
    colorings: tuple[Bicoloring, ...] = ()

    def __post_init__(self) -> None:
        cols = tuple(self.colorings)
        for X in cols:
            if X.n != self.n:
                raise DimensionError(f"bicoloring of length {X.n} in a cover over {self.n} vertices")
        object.__setattr__(self, "colorings", cols)

    @classmethod
    def from_ints(cls, n: int, values: Iterable[int]) -> "Cover":
        return cls(n, tuple(Bicoloring.from_int(int(v), n) for v in values))

    def __len__(self) -> int:
        return len(self.colorings)

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(X.value for X in self.colorings)

    def bit_vectors(self) -> tuple[tuple[int, ...], ...]:
        """Per-vertex color bit vector; entry j is the color in bicoloring j."""
        return tuple(tuple(X.bits[v] for X in self.colorings) for v in range(self.n))


@dataclass(frozen=True)
class CoverCertificate:
    valid: bool
    witness: tuple[int | None, ...]

    def uncovered(self) -> list[int]:
        return [j for j, w in enumerate(self.witness) if w is None]


@dataclass(frozen=True)
class CanonicalPartition:
    parts: tuple[tuple[int, ...], ...]
    vectors: tuple[tuple[int, ...], ...]
    cover_valid: bool

    @property
    def largest(self) -> int:
        return max((len(p) for p in self.parts), default=0)


@dataclass(frozen=True)
class ProperColoring:
    colors: tuple[int, ...]

    def __post_init__(self) -> None:
        colors = tuple(int(c) for c in self.colors)
        if any(c < 0 for c in colors):
            raise ValueError("colors must be non-negative")
        object.__setattr__(self, "colors", colors)

    @property
    def palette_size(self) -> int:
        return len(set(self.colors))

    def classes(self) -> list[tuple[int, ...]]:
        by: dict[int, list[int]] = {}
        for v, c in enumerate(self.colors):
            by.setdefault(c, []).append(v)
        return [tuple(by[c]) for c in sorted(by)]


def _check_length(G: Hypergraph, n: int, what: str) -> None:
    if n != G.n:
        raise DimensionError(f"{what} has {n} vertices, hypergraph has {G.n}")


def is_monochromatic(edge_mask: int, coloring: int) -> bool:
    t = coloring & edge_mask
    return t == 0 or t == edge_mask


def verify_cover(G: Hypergraph, C: Cover) -> CoverCertificate:
    """Check every edge against the cover, one edge at a time.

    The witness for an edge is the smallest index of a bicoloring under
    which it is not monochromatic, or ``None``.
    """
    _check_length(G, C.n, "cover")
    values = C.values
    witness: list[int | None] = []
    for em in G.edge_masks:
        w = None
        for j, X in enumerate(values):
            if not is_monochromatic(em, X):
                w = j
                break
        witness.append(w)
    return CoverCertificate(all(w is not None for w in witness), tuple(witness))


def uncovered_mask(G: Hypergraph, X: Bicoloring) -> int:
    """Bitmask over edge indices; bit j set iff edge j is monochromatic under X."""
    _check_length(G, X.n, "bicoloring")
    value = X.value
    out = 0
    for j, em in enumerate(G.edge_masks):
        if is_monochromatic(em, value):
            out |= 1 << j
    return out


def covers_by_masks(G: Hypergraph, C: Cover) -> bool:
    """Cover validity as an AND of uncovered masks (second route to verify_cover)."""
    _check_length(G, C.n, "cover")
    acc = (1 << G.m) - 1
    for X in C.colorings:
        acc &= uncovered_mask(G, X)
        if not acc:
            break
    return acc == 0


def canonical_partition(G: Hypergraph, C: Cover) -> CanonicalPartition:
    _check_length(G, C.n, "cover")
    groups: dict[tuple[int, ...], list[int]] = {}
    for v, vec in enumerate(C.bit_vectors()):
        groups.setdefault(vec, []).append(v)
    ordered = sorted(groups.items(), key=lambda kv: kv[1][0])
    return CanonicalPartition(
        parts=tuple(tuple(vs) for _, vs in ordered),
        vectors=tuple(vec for vec, _ in ordered),
        cover_valid=verify_cover(G, C).valid,
    )


def is_proper(G: Hypergraph, P: ProperColoring) -> bool:
    _check_length(G, len(P.colors), "coloring")
    colors = P.colors
    for e in G.edges:
        c = colors[e[0]]
        if all(colors[v] == c for v in e[1:]):
            return False
    return True


def coloring_from_cover(G: Hypergraph, C: Cover) -> ProperColoring:
    """Color each vertex by the integer whose bit j is its color in bicoloring j."""
    cert = verify_cover(G, C)
    if not cert.valid:
        bad = cert.uncovered()[0]
        raise InvalidCoverError(
            f"edge {G.edges[bad]} is monochromatic in every bicoloring; "
            "the induced coloring would not be proper"
        )
    colors = [0] * G.n
    for j, X in enumerate(C.colorings):
        for v in range(G.n):
            colors[v] |= X.bits[v] << j
    return ProperColoring(tuple(colors))


def cover_from_coloring(G: Hypergraph, P: ProperColoring) -> Cover:
    """Bicoloring i takes bit i of each vertex's rank-compressed color."""
    if not is_proper(G, P):
        raise ImproperColoringError("input coloring leaves an edge monochromatic")
    rank = {c: i for i, c in enumerate(sorted(set(P.colors)))}
    x = ceil_log2(len(rank))
    ranked = [rank[c] for c in P.colors]
    cols = tuple(Bicoloring(tuple((r >> i) & 1 for r in ranked)) for i in range(x))
    return Cover(G.n, cols)


def dependency(G: Hypergraph) -> int:
    """Largest number of other edges meeting a single edge."""
    best = 0
    for j, e in enumerate(G.edges):
        nbrs = set()
        for v in e:
            nbrs.update(G.incidence[v])
        nbrs.discard(j)
        best = max(best, len(nbrs))
    return best


def greedy_maximal_matching(G: Hypergraph) -> list[tuple[int, ...]]:
    used = 0
    out = []
    for e, em in zip(G.edges, G.edge_masks):
        if not used & em:
            out.append(e)
            used |= em
    return out


def greedy_hitting_set(G: Hypergraph) -> list[int]:
    """Repeatedly take the vertex meeting the most un-hit edges (ties: smallest id)."""
    alive = set(range(G.m))
    chosen = []
    while alive:
        best_v, best_d = -1, 0
        for v in range(G.n):
            d = sum(1 for j in G.incidence[v] if j in alive)
            if d > best_d:
                best_v, best_d = v, d
        chosen.append(best_v)
        alive.difference_update(G.incidence[best_v])
    return sorted(chosen)


def is_matching(G: Hypergraph, M: Sequence[Sequence[int]]) -> bool:
    used: set[int] = set()
    for e in M:
        if used.intersection(e):
            return False
        used.update(e)
    return True


def is_hitting_set(G: Hypergraph, H: Iterable[int]) -> bool:
    hs = set(H)
    return all(hs.intersection(e) for e in G.edges)
