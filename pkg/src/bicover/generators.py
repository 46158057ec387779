"""Instance families: complete hypergraphs, odd cycles, G1, the cover-friendly
grid family, random k-uniform hypergraphs and the clique-gap procedure."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import Hypergraph, dependency

SUBSET_BUDGET = 5_000_000


class GeneratorError(ValueError):
    pass


def _check_budget(n: int, k: int) -> None:
    if math.comb(n, k) > SUBSET_BUDGET:
        raise GeneratorError(f"C({n},{k}) = {math.comb(n, k)} k-subsets exceeds budget {SUBSET_BUDGET}")


def gen_complete(n: int, k: int) -> Hypergraph:
    if not 2 <= k <= n:
        raise GeneratorError(f"need 2 <= k <= n, got n={n}, k={k}")
    _check_budget(n, k)
    return Hypergraph(n, k, tuple(itertools.combinations(range(n), k)))


def gen_odd_cycle(n: int) -> Hypergraph:
    if n < 3 or n % 2 == 0:
        raise GeneratorError(f"odd cycle needs odd n >= 3, got {n}")
    return Hypergraph(n, 2, tuple((i, (i + 1) % n) for i in range(n)))


def gen_g1() -> Hypergraph:
    """The 12-vertex 3-uniform example: all triples of vertices 0..7, plus
    every pair from 0..7 with one vertex of 8..11, except the four column
    triples {0,4,8}, {1,5,9}, {2,6,10}, {3,7,11}."""
    inner = list(itertools.combinations(range(8), 3))
    excluded = {(0, 4, 8), (1, 5, 9), (2, 6, 10), (3, 7, 11)}
    cross = [
        (u, v, w)
        for u, v in itertools.combinations(range(8), 2)
        for w in range(8, 12)
        if (u, v, w) not in excluded
    ]
    return Hypergraph(12, 3, tuple(inner + cross))


@dataclass(frozen=True)
class CoverFriendlyParams:
    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p <= 2:
            raise GeneratorError(f"p must exceed 2, got {self.p}")
        if self.q <= self.p:
            raise GeneratorError(f"q must exceed p, got p={self.p}, q={self.q}")
        if self.q & (self.q - 1):
            raise GeneratorError(f"q must be a power of two, got {self.q}")

    @property
    def n(self) -> int:
        return self.p * self.q

    @property
    def k(self) -> int:
        return self.p

    @property
    def z(self) -> int:
        return self.q.bit_length() - 1

    @property
    def t(self) -> float:
        return math.log(self.p) / math.log(self.n)

    def column(self, v: int) -> int:
        """Column class of 0-based vertex v."""
        return v % self.q


def gen_cover_friendly(params: CoverFriendlyParams) -> Hypergraph:
    """Grid construction with p rows and q columns, k = p.

    The first n - q vertices form the inner block; every k-subset of it is
    an edge, as is every (k-1)-subset of it joined with one of the last q
    vertices.  Edges lying inside a single column are then removed.
    """
    p, q = params.p, params.q
    n, k = params.n, params.k
    inner = n - q
    _check_budget(inner, k - 1)
    edges = []
    for e in itertools.combinations(range(inner), k):
        if len({params.column(v) for v in e}) > 1:
            edges.append(e)
    for base in itertools.combinations(range(inner), k - 1):
        cols = {params.column(v) for v in base}
        for w in range(inner, n):
            if len(cols | {params.column(w)}) > 1:
                edges.append(base + (w,))
    return Hypergraph(n, k, tuple(edges))


def cover_friendly_columns(params: CoverFriendlyParams) -> list[list[int]]:
    return [[v for v in range(params.n) if params.column(v) == r] for r in range(params.q)]


def gen_random_kuniform(n: int, k: int, prob: float, seed: int) -> Hypergraph:
    """Each k-subset, in lexicographic order, kept with probability ``prob``."""
    if not 0.0 <= prob <= 1.0:
        raise GeneratorError(f"probability must be in [0, 1], got {prob}")
    _check_budget(n, k)
    rng = np.random.default_rng(seed)
    pool = list(itertools.combinations(range(n), k))
    keep = rng.random(len(pool)) < prob
    return Hypergraph(n, k, tuple(e for e, kept in zip(pool, keep) if kept))


def gen_random_m_edges(n: int, k: int, m: int, seed: int) -> Hypergraph:
    """Uniformly random k-uniform hypergraph with exactly m distinct edges."""
    _check_budget(n, k)
    total = math.comb(n, k)
    if m > total:
        raise GeneratorError(f"only {total} k-subsets available, {m} requested")
    rng = np.random.default_rng(seed)
    pool = list(itertools.combinations(range(n), k))
    picks = rng.choice(total, size=m, replace=False)
    return Hypergraph(n, k, tuple(pool[i] for i in sorted(picks)))


def gen_bounded_dependency(n: int, k: int, m: int, max_dep: int, seed: int,
                           tries: int = 10_000) -> Hypergraph:
    """Random k-uniform hypergraph with up to m edges and dependency <= max_dep.

    Candidate edges are drawn uniformly and rejected when they would push
    any edge's neighbor count above ``max_dep``.
    """
    rng = np.random.default_rng(seed)
    edges: list[tuple[int, ...]] = []
    nbrs: list[int] = []
    seen = set()
    for _ in range(tries):
        if len(edges) == m:
            break
        e = tuple(sorted(int(v) for v in rng.choice(n, size=k, replace=False)))
        if e in seen:
            continue
        touching = [i for i, f in enumerate(edges) if set(e) & set(f)]
        if len(touching) > max_dep or any(nbrs[i] + 1 > max_dep for i in touching):
            continue
        for i in touching:
            nbrs[i] += 1
        edges.append(e)
        nbrs.append(len(touching))
        seen.add(e)
    G = Hypergraph(n, k, tuple(edges))
    assert dependency(G) <= max_dep
    return G


@dataclass
class CliqueGapReport:
    k: int
    t: int
    n: int
    seed: int
    edge_probability: float
    sampled_edges: int
    cliques_found: int
    deleted: list[int]
    kept: list[int]
    omega: int | None = None
    alpha: int | None = None
    alpha_exact: bool = False
    independent_set: tuple[int, ...] = ()
    clique: tuple[int, ...] = ()
    chi_c_upper: int | None = None
    expectations: dict = field(default_factory=dict)


def clique_gap_expectations(n: int, k: int, t: int) -> dict:
    """Closed-form quantities behind the clique-gap argument for edge
    probability p = n^(-k/(k+1)).

    p^(k+1) = n^(-k) is rational, so the expected number of complete
    (k+1)-sets, C(n, k+1) * n^(-k), is compared with n/(k+1)! exactly.
    """
    exp_cliques = Fraction(math.comb(n, k + 1), n**k)
    clique_bound = Fraction(n, math.factorial(k + 1))
    p = n ** (-k / (k + 1))
    size = math.ceil(k * n / ((k + 1) * 2**t))
    # natural log of 2^n * exp(-p (n / ((k+1) 2^t))^k)
    log_indep_bound = n * math.log(2) - p * (n / ((k + 1) * 2**t)) ** k
    n_threshold = ((k + 1) ** k * 2 ** (t * k + 1) * math.log(2)) ** ((k + 1) / k**2)
    n_direct = smallest_n_for_independent_bound(k, t)
    return {
        "p": p,
        "expected_cliques": str(exp_cliques),
        "expected_cliques_float": float(exp_cliques),
        "clique_bound": str(clique_bound),
        "expected_cliques_below_bound": exp_cliques < clique_bound,
        "independent_set_target": size,
        "log_expected_independent_bound": log_indep_bound,
        "independent_bound_below_half": log_indep_bound < math.log(0.5),
        "n_threshold": n_threshold,
        "n_above_threshold": n > n_threshold,
        "n_direct_threshold": n_direct,
        "n_above_direct_threshold": n >= n_direct,
    }


def _independent_bound_holds(n: int, k: int, t: int) -> bool:
    # (n+1) ln 2 < n^(-k/(k+1)) * (n / ((k+1) 2^t))^k, compared in logs
    lhs = math.log((n + 1) * math.log(2))
    rhs = -k / (k + 1) * math.log(n) + k * (math.log(n) - math.log(k + 1) - t * math.log(2))
    return lhs < rhs


def smallest_n_for_independent_bound(k: int, t: int) -> int:
    """Smallest n from which the expected-independent-set bound stays below 1/2.

    The right-hand side grows like n^((k^2-k-1)/(k+1)) against n on the
    left, so once the inequality holds it keeps holding.
    """
    hi = 2
    while not _independent_bound_holds(hi, k, t):
        hi *= 2
    lo = hi // 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if _independent_bound_holds(mid, k, t):
            hi = mid
        else:
            lo = mid
    return hi


def gen_clique_gap(k: int, t: int, n: int, seed: int, certify: bool = True,
                   alpha_budget: int = 200_000) -> tuple[Hypergraph, CliqueGapReport]:
    """Random hypergraph with p = n^(-k/(k+1)), then one vertex (the smallest
    still present) deleted from every complete (k+1)-set.

    The result has no complete (k+1)-set, so its clique number is k when it
    keeps an edge.  Vertices are relabelled 0..n'-1; ``report.kept`` maps back.
    With ``certify`` the report also carries the exact clique number, a
    budgeted maximum independent set and the size of the sweep cover.
    """
    p = n ** (-k / (k + 1))
    G = gen_random_kuniform(n, k, p, seed)
    edge_set = set(G.edges)
    deleted: set[int] = set()
    cliques = 0
    for S in _complete_sets(G, edge_set):
        cliques += 1
        if deleted.isdisjoint(S):
            deleted.add(S[0])
    kept = [v for v in range(n) if v not in deleted]
    H, _ = G.induced(kept)
    report = CliqueGapReport(
        k=k, t=t, n=n, seed=seed, edge_probability=p, sampled_edges=G.m,
        cliques_found=cliques, deleted=sorted(deleted), kept=kept,
        expectations=clique_gap_expectations(n, k, t),
    )
    if certify:
        from .approximation import cover_via_coloring_sweep
        from .oracles import exact_omega, max_independent_set

        report.omega, report.clique, _ = exact_omega(H)
        report.independent_set, report.alpha_exact = max_independent_set(H, alpha_budget)
        report.alpha = len(report.independent_set)
        report.chi_c_upper = cover_via_coloring_sweep(H).size
    return H, report


def _complete_sets(G: Hypergraph, edge_set: set) -> list[tuple[int, ...]]:
    """All (k+1)-vertex sets whose k-subsets are all edges, lexicographic."""
    k = G.k
    adj: dict[tuple[int, ...], set[int]] = {}
    for e in G.edges:
        for i in range(k):
            adj.setdefault(e[:i] + e[i + 1:], set()).add(e[i])
    out = []
    for e in G.edges:
        # extend e by a vertex larger than its maximum
        cands = adj.get(e[1:], set())
        for w in sorted(cands):
            if w <= e[-1]:
                continue
            S = e + (w,)
            if all(S[:i] + S[i + 1:] in edge_set for i in range(k + 1)):
                out.append(S)
    return out
