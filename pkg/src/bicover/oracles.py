"""Exhaustive ground truth: cover number, chromatic number, independence,
cover independence and clique numbers, and the small m(k, x) search.

Everything here is exponential in ``n`` and guarded by a vertex cap.  The
cover searches work on a table of uncovered-edge masks, one row of uint64
words per bicoloring.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import (
    Cover,
    Hypergraph,
    ProperColoring,
    ceil_log2,
    ceil_log2_ratio,
    is_proper,
    verify_cover,
)

DEFAULT_CAP = 14
DEFAULT_XCAP = 3
OMEGA_CAP = 64
M_SEARCH_BUDGET = 2_000_000

# rows * candidates * words per vectorized block in the two-level search
_BLOCK = 1 << 22


class CapExceeded(RuntimeError):
    """Refusal: the instance is larger than the configured resource cap."""

    def __init__(self, message: str, cap: int | None = None, report=None):
        super().__init__(message)
        self.cap = cap
        self.report = report


def _require_cap(G: Hypergraph, cap: int, what: str) -> None:
    if G.n > cap:
        raise CapExceeded(f"{what}: n={G.n} exceeds vertex cap {cap}", cap=cap)


def n_words(m: int) -> int:
    return max(1, (m + 63) // 64)


def mask_table(G: Hypergraph, colorings: np.ndarray) -> np.ndarray:
    """Uncovered-edge masks for an array of integer bicolorings.

    Row r, bit j (word j // 64, bit j % 64) is set iff edge j is
    monochromatic under ``colorings[r]``.
    """
    colorings = np.asarray(colorings, dtype=np.int64)
    out = np.zeros((colorings.shape[0], n_words(G.m)), dtype=np.uint64)
    for j, em in enumerate(G.edge_masks):
        t = colorings & np.int64(em)
        mono = (t == 0) | (t == em)
        out[:, j >> 6] |= mono.astype(np.uint64) << np.uint64(j & 63)
    return out


def full_edge_mask(m: int) -> np.ndarray:
    out = np.zeros(n_words(m), dtype=np.uint64)
    for j in range(m):
        out[j >> 6] |= np.uint64(1) << np.uint64(j & 63)
    return out


def _lowest_bit(row: np.ndarray) -> int:
    w = int(np.flatnonzero(row)[0])
    word = int(row[w])
    return (w << 6) + ((word & -word).bit_length() - 1)


class CoverSearch:
    """Depth-limited search for x rows of a mask table whose AND is zero.

    Branching is on the lowest still-uncovered edge: some chosen row must
    have that edge's bit clear, so only those rows are tried.  Residual
    masks proven infeasible at a depth are memoized.
    """

    def __init__(self, masks: np.ndarray, ids: Sequence[int]):
        self.masks = masks
        self.ids = np.asarray(ids, dtype=np.int64)
        self.nodes = 0
        self._dead: dict[int, set[bytes]] = {}

    def find(self, cur: np.ndarray, depth: int) -> list[int] | None:
        self.nodes += 1
        if not cur.any():
            return []
        if depth <= 0:
            return None
        masks = self.masks
        if depth == 1:
            ok = ~(masks & cur).any(axis=1)
            hit = np.flatnonzero(ok)
            return [int(self.ids[hit[0]])] if hit.size else None
        dead = self._dead.setdefault(depth, set())
        key = cur.tobytes()
        if key in dead:
            return None
        e = _lowest_bit(cur)
        cand = np.flatnonzero(((masks[:, e >> 6] >> np.uint64(e & 63)) & np.uint64(1)) == 0)
        if cand.size == 0:
            dead.add(key)
            return None
        rest = masks[cand] & cur
        rest, first = np.unique(rest, axis=0, return_index=True)
        cand = cand[first]
        order = np.argsort(np.bitwise_count(rest).sum(axis=1), kind="stable")
        rest, cand = rest[order], cand[order]
        if depth == 2:
            found = self._pair(rest, cand)
        else:
            found = None
            for r, c in zip(rest, cand):
                sub = self.find(r, depth - 1)
                if sub is not None:
                    found = [int(self.ids[c])] + sub
                    break
        if found is None:
            dead.add(key)
        return found

    def _pair(self, rest: np.ndarray, cand: np.ndarray) -> list[int] | None:
        masks = self.masks
        n_rows, words = masks.shape
        step = max(1, _BLOCK // max(1, n_rows * words))
        for lo in range(0, rest.shape[0], step):
            block = rest[lo : lo + step]
            ok = ~(block[:, None, :] & masks[None, :, :]).any(axis=2)
            hit = np.argwhere(ok)
            if hit.size:
                a, b = hit[0]
                return [int(self.ids[cand[lo + a]]), int(self.ids[b])]
        self.nodes += rest.shape[0]
        return None


def _all_bicolorings(n: int, normalize: bool) -> np.ndarray:
    """All integer bicolorings, or only those with vertex 0 colored 0.

    A bicoloring and its complement have the same uncovered mask, so the
    normalized half is enough for cover-existence questions.
    """
    values = np.arange(1 << n, dtype=np.int64)
    return values[values & 1 == 0] if normalize else values


def exact_chi_c(
    G: Hypergraph, limit: int | None = None, cap: int = DEFAULT_CAP
) -> tuple[int | None, Cover | None]:
    """Minimum cover size with a witness, or ``(None, None)`` if it exceeds ``limit``.

    ``limit`` defaults to the complete-hypergraph ceiling, which every
    k-uniform hypergraph on n vertices meets, so by default the result is
    never ``None``.
    """
    _require_cap(G, cap, "exact_chi_c")
    if G.m == 0:
        return 0, Cover(G.n, ())
    if limit is None:
        limit = ceil_log2_ratio(G.n, G.k - 1)
    base = _all_bicolorings(G.n, normalize=True)
    search = CoverSearch(mask_table(G, base), base)
    full = full_edge_mask(G.m)
    for x in range(1, limit + 1):
        found = search.find(full, x)
        if found is not None:
            return x, Cover.from_ints(G.n, found)
    return None, None


def has_cover_of_size(G: Hypergraph, x: int, cap: int = DEFAULT_CAP) -> Cover | None:
    _require_cap(G, cap, "has_cover_of_size")
    if G.m == 0:
        return Cover(G.n, ())
    base = _all_bicolorings(G.n, normalize=True)
    found = CoverSearch(mask_table(G, base), base).find(full_edge_mask(G.m), x)
    return None if found is None else Cover.from_ints(G.n, found)


def exact_chromatic(G: Hypergraph, cap: int = DEFAULT_CAP) -> tuple[int, ProperColoring]:
    """Weak chromatic number (no monochromatic edge) by backtracking.

    Vertices are colored in decreasing-degree order; a vertex may open at
    most one new color, which removes palette permutations.
    """
    _require_cap(G, cap, "exact_chromatic")
    n = G.n
    if G.m == 0:
        return 1, ProperColoring((0,) * n)
    order = sorted(range(n), key=lambda v: (-G.degree(v), v))
    pos = {v: i for i, v in enumerate(order)}
    # edges checked when their last vertex (in order) is colored
    closing: list[list[tuple[int, ...]]] = [[] for _ in range(n)]
    for e in G.edges:
        last = max(e, key=lambda v: pos[v])
        closing[pos[last]].append(tuple(u for u in e if u != last))

    colors = [-1] * n

    def extend(i: int, used: int, palette: int) -> bool:
        if i == n:
            return True
        v = order[i]
        for c in range(min(used + 1, palette)):
            if any(all(colors[u] == c for u in rest) for rest in closing[i]):
                continue
            colors[v] = c
            if extend(i + 1, max(used, c + 1), palette):
                return True
        colors[v] = -1
        return False

    for palette in range(2, n + 1):
        if extend(0, 0, palette):
            return palette, ProperColoring(tuple(colors))
    raise AssertionError("n colors always suffice")


def _independent_table(G: Hypergraph) -> np.ndarray:
    subsets = np.arange(1 << G.n, dtype=np.int64)
    indep = np.ones(subsets.shape[0], dtype=bool)
    for em in G.edge_masks:
        indep &= (subsets & np.int64(em)) != em
    return indep


def _mask_to_vertices(mask: int) -> tuple[int, ...]:
    return tuple(v for v in range(mask.bit_length()) if mask >> v & 1)


def exact_alpha(G: Hypergraph, cap: int = DEFAULT_CAP) -> tuple[int, tuple[int, ...]]:
    _require_cap(G, cap, "exact_alpha")
    indep = _independent_table(G)
    sizes = np.bitwise_count(np.arange(1 << G.n, dtype=np.uint64)).astype(np.int64)
    sizes[~indep] = -1
    best = int(np.argmax(sizes))
    return int(sizes[best]), _mask_to_vertices(best)


def max_independent_set(G: Hypergraph, node_budget: int = 200_000) -> tuple[tuple[int, ...], bool]:
    """Branch-and-bound maximum independent set for larger ``n``.

    Returns the best set found and whether the search finished within the
    node budget (in which case the set is maximum).
    """
    n = G.n
    # for each vertex, the other-vertex masks of its incident edges
    rests = [
        [G.edge_masks[j] & ~(1 << v) for j in G.incidence[v]] for v in range(n)
    ]
    order = sorted(range(n), key=lambda v: (G.degree(v), v))
    best = [0]
    nodes = [0]
    exhausted = [True]

    def can_add(S: int, v: int) -> bool:
        return all(r & ~S for r in rests[v])

    def grow(S: int, cands: list[int]) -> None:
        nodes[0] += 1
        if nodes[0] > node_budget:
            exhausted[0] = False
            return
        if S.bit_count() > best[0].bit_count():
            best[0] = S
        for i, v in enumerate(cands):
            if S.bit_count() + len(cands) - i <= best[0].bit_count():
                return
            S2 = S | (1 << v)
            grow(S2, [u for u in cands[i + 1 :] if can_add(S2, u)])
            if not exhausted[0]:
                return

    grow(0, order)
    return _mask_to_vertices(best[0]), exhausted[0]


def exact_omega(G: Hypergraph, cap: int = OMEGA_CAP) -> tuple[int, tuple[int, ...], bool]:
    """Clique number: largest vertex set all of whose k-subsets are edges.

    Returns ``(omega, witness, flagged)``.  With no edges the value is the
    conventional ``k - 1`` and ``flagged`` is True.
    """
    _require_cap(G, cap, "exact_omega")
    k = G.k
    edge_set = set(G.edge_masks)
    if not edge_set:
        return k - 1, tuple(range(k - 1)), True
    best: list[int] = []

    def extendable(S: list[int], v: int) -> bool:
        if len(S) < k - 1:
            return True
        return all(
            (sum(1 << u for u in T) | (1 << v)) in edge_set
            for T in itertools.combinations(S, k - 1)
        )

    def grow(S: list[int], cands: list[int]) -> None:
        nonlocal best
        if len(S) > len(best):
            best = list(S)
        for i, v in enumerate(cands):
            if len(S) + len(cands) - i <= len(best):
                return
            S.append(v)
            grow(S, [u for u in cands[i + 1 :] if extendable(S, u)])
            S.pop()

    grow([], list(range(G.n)))
    return len(best), tuple(best), False


def exact_gamma(
    G: Hypergraph, cap: int = DEFAULT_CAP, xcap: int = DEFAULT_XCAP
) -> tuple[int, Cover]:
    """Cover independence number: the largest set of vertices sharing one
    color bit vector in some minimum-size cover, with a witness cover.

    A set S can be a class of a minimum cover iff some minimum-size cover
    has every bicoloring constant on S.  Complementing single bicolorings
    keeps a cover valid and keeps its classes unchanged, so constant can be
    taken as all-zero.  Independent sets are tried from largest to
    smallest; the first feasible size is the answer.
    """
    _require_cap(G, cap, "exact_gamma")
    x, _ = exact_chi_c(G, cap=cap)
    if x > xcap:
        raise CapExceeded(f"exact_gamma: cover number {x} exceeds x-cap {xcap}", cap=xcap)
    if x == 0:
        return G.n, Cover(G.n, ())
    everything = _all_bicolorings(G.n, normalize=False)
    table = mask_table(G, everything)
    full = full_edge_mask(G.m)
    indep = _independent_table(G)
    ids = np.flatnonzero(indep)
    sizes = np.bitwise_count(ids.astype(np.uint64))
    for s in range(int(sizes.max()), 0, -1):
        for S in ids[sizes == s]:
            allowed = np.flatnonzero((everything & S) == 0)
            found = CoverSearch(table[allowed], allowed).find(full, x)
            if found is not None:
                return s, Cover.from_ints(G.n, found)
    raise AssertionError("a single vertex is always a feasible class")


def _class_sizes(tuples: np.ndarray, n: int) -> np.ndarray:
    """Largest shared-bit-vector class for each row of integer bicolorings."""
    full = np.int64((1 << n) - 1)
    x = tuples.shape[1]
    best = np.zeros(tuples.shape[0], dtype=np.int64)
    for vec in range(1 << x):
        acc = np.full(tuples.shape[0], full, dtype=np.int64)
        for j in range(x):
            col = tuples[:, j]
            acc &= col if vec >> j & 1 else ~col & full
        best = np.maximum(best, np.bitwise_count(acc.astype(np.uint64)).astype(np.int64))
    return best


def gamma_by_enumeration(
    G: Hypergraph, x: int | None = None, normalize: bool = True, cap: int = 12
) -> tuple[int, int]:
    """Cover independence number by listing every ordered optimal cover.

    Returns ``(gamma, covers_seen)``.  With ``normalize`` each bicoloring
    is restricted to vertex 0 colored 0; class sizes do not change under
    complementing a bicoloring.  Meant as an independent check of
    :func:`exact_gamma`.
    """
    _require_cap(G, cap, "gamma_by_enumeration")
    if x is None:
        x, _ = exact_chi_c(G, cap=cap)
    if x == 0:
        return G.n, 1
    base = _all_bicolorings(G.n, normalize)
    table = mask_table(G, base)
    full = full_edge_mask(G.m)
    best = 0
    count = 0

    def walk(prefix: list[int], cur: np.ndarray) -> None:
        nonlocal best, count
        if len(prefix) == x - 1:
            ok = ~(table & cur).any(axis=1)
            last = base[ok]
            if last.size == 0:
                return
            rows = np.empty((last.size, x), dtype=np.int64)
            rows[:, : x - 1] = prefix
            rows[:, x - 1] = last
            count += last.size
            best = max(best, int(_class_sizes(rows, G.n).max()))
            return
        for r in range(base.size):
            walk(prefix + [int(base[r])], cur & table[r])

    walk([], full)
    return best, count


@dataclass
class OracleReport:
    n: int
    k: int
    m: int
    chi_c: int
    chi: int
    alpha: int
    gamma: int | None
    omega: int
    omega_flagged: bool
    cover: Cover
    coloring: ProperColoring
    independent_set: tuple[int, ...]
    gamma_witness: Cover | None
    clique: tuple[int, ...]
    checks: dict[str, bool] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)


class OracleInvariantError(AssertionError):
    pass


def lower_bound_checks(n: int, k: int, m: int, chi_c: int, chi: int, alpha: int,
                       gamma: int | None) -> dict[str, bool]:
    checks = {
        "chi_c == ceil(log2 chi)": chi_c == ceil_log2(chi),
        "chi_c >= ceil(log2 ceil(n/alpha))": chi_c >= ceil_log2(-(-n // alpha)),
    }
    if gamma is not None:
        checks["alpha >= gamma"] = alpha >= gamma
        checks["chi_c >= ceil(log2 ceil(n/gamma))"] = chi_c >= ceil_log2(-(-n // gamma))
        checks["2*gamma*chi >= n"] = 2 * gamma * chi >= n
        if m > 0:
            checks["gamma >= k-1"] = gamma >= k - 1
    return checks


def oracle_report(G: Hypergraph, cap: int = DEFAULT_CAP, xcap: int = DEFAULT_XCAP) -> OracleReport:
    """All exact parameters of ``G`` with re-verified witnesses.

    Raises :class:`OracleInvariantError` if any relation between the
    parameters fails; that would mean a bug in one of the searches.
    """
    chi_c, cover = exact_chi_c(G, cap=cap)
    chi, coloring = exact_chromatic(G, cap=cap)
    alpha, iset = exact_alpha(G, cap=cap)
    notes = []
    try:
        gamma, gwit = exact_gamma(G, cap=cap, xcap=xcap)
    except CapExceeded as exc:
        gamma, gwit = None, None
        notes.append(str(exc))
    omega, clique, flagged = exact_omega(G, cap=max(cap, OMEGA_CAP))
    if flagged:
        notes.append("no edges: omega reported as k-1 by convention")
    checks = lower_bound_checks(G.n, G.k, G.m, chi_c, chi, alpha, gamma)
    checks["cover witness valid"] = verify_cover(G, cover).valid and len(cover) == chi_c
    checks["coloring witness proper"] = is_proper(G, coloring) and coloring.palette_size == chi
    iset_mask = sum(1 << v for v in iset)
    checks["independent set witness"] = len(iset) == alpha and not any(
        em & iset_mask == em for em in G.edge_masks
    )
    if gwit is not None:
        from .core import canonical_partition

        part = canonical_partition(G, gwit)
        checks["gamma witness"] = part.cover_valid and len(gwit) == chi_c and part.largest == gamma
    edge_set = set(G.edges)
    checks["clique witness"] = flagged or all(
        T in edge_set for T in itertools.combinations(clique, G.k)
    )
    report = OracleReport(G.n, G.k, G.m, chi_c, chi, alpha, gamma, omega, flagged, cover,
                          coloring, iset, gwit, clique, checks, notes)
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise OracleInvariantError(f"oracle invariants failed: {failed}")
    return report


# --- m(k, x) ----------------------------------------------------------------


def m_lower_bound(k: int, x: int) -> int:
    """Edge counts up to this value always admit an x-cover (strict lower bound on m)."""
    return 2 ** ((k - 1) * x - 1)


def m_general_upper_bound(k: int, x: int) -> int:
    return x * k * k * 2 ** ((k + 1) * x + 2)


def complete_witness_order(k: int, x: int) -> int:
    """Fewest vertices of a complete k-uniform hypergraph with no x-cover."""
    return (k - 1) * 2**x + 1


@dataclass
class MSearchReport:
    k: int
    x: int
    n: int | None
    value: int | None
    witness: Hypergraph | None
    exhaustive: bool
    lower_bound: int
    upper_bound: int
    upper_witness: str
    general_upper_bound: int
    graphs_checked: int = 0
    note: str = ""


def m_bracket(k: int, x: int) -> MSearchReport:
    order = complete_witness_order(k, x)
    return MSearchReport(
        k=k, x=x, n=None, value=None, witness=None, exhaustive=False,
        lower_bound=m_lower_bound(k, x),
        upper_bound=math.comb(order, k),
        upper_witness=f"K_{order}^{k}",
        general_upper_bound=m_general_upper_bound(k, x),
    )


def _small_cover_exists(masks: Sequence[int], target: int, x: int) -> bool:
    """Pure-integer version of the cover search over a handful of edges."""
    if target == 0:
        return True
    if x == 0:
        return False
    low = target & -target
    seen = set()
    for mk in masks:
        if mk & low:
            continue
        rest = mk & target
        if rest in seen:
            continue
        seen.add(rest)
        if _small_cover_exists(masks, rest, x - 1):
            return True
    return False


def m_search(k: int, x: int, n: int, budget: int = M_SEARCH_BUDGET) -> MSearchReport:
    """Smallest edge count of an n-vertex k-uniform hypergraph without an x-cover.

    Every edge subset is examined in increasing size, restricted to subsets
    containing the first k-subset (any nonempty hypergraph is isomorphic to
    one that does).  Raises :class:`CapExceeded` carrying the bracket
    report when the number of subsets exceeds ``budget``.
    """
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got k={k}, n={n}")
    report = m_bracket(k, x)
    report.n = n
    pool = list(itertools.combinations(range(n), k))
    N = len(pool)
    work = 2 ** (N - 1)
    if work > budget:
        report.note = f"search space 2^{N - 1} subsets exceeds budget {budget}"
        raise CapExceeded(f"m_search: {report.note}", cap=budget, report=report)
    # uncovered mask of each normalized bicoloring over the pool of k-subsets
    pool_masks = [sum(1 << v for v in e) for e in pool]
    masks = []
    for X in range(0, 1 << n, 2):
        mk = 0
        for j, em in enumerate(pool_masks):
            t = X & em
            if t == 0 or t == em:
                mk |= 1 << j
        masks.append(mk)
    checked = 0
    for m in range(1, N + 1):
        for rest in itertools.combinations(range(1, N), m - 1):
            g = 1 | sum(1 << j for j in rest)
            checked += 1
            if not _small_cover_exists(masks, g, x):
                report.value = m
                report.witness = Hypergraph(n, k, tuple(pool[j] for j in (0,) + rest))
                report.exhaustive = True
                report.graphs_checked = checked
                report.note = f"restricted to hypergraphs on exactly {n} vertices"
                return report
    report.exhaustive = True
    report.graphs_checked = checked
    report.note = f"every k-uniform hypergraph on {n} vertices has an x-cover"
    return report
