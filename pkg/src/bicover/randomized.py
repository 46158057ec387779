"""Randomized covers: independent random bicolorings for sparse hypergraphs,
and the local-lemma resampler with exact random-bit accounting."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .core import Cover, Hypergraph, dependency, verify_cover

SPARSE_RETRY_LIMIT = 64
MTC_SAFETY = 1000


class PreconditionError(ValueError):
    pass


class NonTermination(RuntimeError):
    def __init__(self, message: str, transcript: list[int]):
        super().__init__(message)
        self.transcript = transcript


class BitSource:
    """Counts every random bit it hands out.

    Backed by numpy's PCG64 generator seeded with the run seed, so a seed
    fixes the whole bit stream.
    """

    def __init__(self, seed: int):
        self.seed = seed
        self._rng = np.random.default_rng(seed)
        self.used = 0

    def bits(self, shape) -> np.ndarray:
        out = self._rng.integers(0, 2, size=shape, dtype=np.uint8)
        self.used += out.size
        return out


@dataclass
class RandomRun:
    algorithm: str
    seed: int
    x: int
    iterations: int
    bits_used: int
    cover: Cover
    transcript: list[int] = field(default_factory=list)

    def expected_bits(self, n: int, k: int) -> int:
        if self.algorithm == "sparse":
            return self.iterations * n * self.x
        return n * self.x + self.iterations * k * self.x


def _cover_from_array(colors: np.ndarray) -> Cover:
    x, n = colors.shape
    values = [int(sum(int(b) << v for v, b in enumerate(row))) for row in colors]
    return Cover.from_ints(n, values)


def _violated(colors: np.ndarray, edges: np.ndarray) -> np.ndarray:
    """Edges monochromatic in every bicoloring (rows of ``colors``)."""
    if edges.size == 0:
        return np.zeros(0, dtype=bool)
    sub = colors[:, edges]  # (x, m, k)
    mono = (sub == sub[:, :, :1]).all(axis=2)
    return mono.all(axis=0)


def sparse_bound(k: int, x: int) -> int:
    return 2 ** ((k - 1) * x - 1)


def sparse_random_cover(G: Hypergraph, x: int, seed: int, override: bool = False,
                        retry_limit: int = SPARSE_RETRY_LIMIT) -> RandomRun:
    """Draw x independent uniform bicolorings until they form a cover.

    With at most 2^((k-1)x - 1) edges each attempt succeeds with probability
    at least one half.  ``transcript`` records the number of uncovered edges
    of each failed attempt.
    """
    if x < 1:
        raise ValueError("x must be at least 1")
    bound = sparse_bound(G.k, x)
    if G.m > bound and not override:
        raise PreconditionError(f"|E| = {G.m} exceeds 2^((k-1)x-1) = {bound}")
    src = BitSource(seed)
    edges = np.asarray(G.edges, dtype=np.int64).reshape(G.m, G.k)
    transcript = []
    for attempt in range(1, retry_limit + 1):
        colors = src.bits((x, G.n))
        bad = int(_violated(colors, edges).sum())
        if bad == 0:
            run = RandomRun("sparse", seed, x, attempt, src.used, _cover_from_array(colors), transcript)
            assert run.bits_used == run.expected_bits(G.n, G.k)
            return run
        transcript.append(bad)
    raise NonTermination(f"no cover after {retry_limit} attempts (seed {seed})", transcript)


# Series bounds for e: S_N <= e < S_N + 1/(N! N).
@lru_cache(maxsize=None)
def _e_bounds(terms: int) -> tuple[Fraction, Fraction]:
    s, fact = Fraction(0), 1
    for i in range(terms + 1):
        if i:
            fact *= i
        s += Fraction(1, fact)
    return s, s + Fraction(1, fact * terms)


def _floor_pow2_over_e(s: int) -> int:
    """floor(2^s / e), exact.  2^s / e is never an integer."""
    terms = 20
    while True:
        lo, hi = _e_bounds(terms)
        a = math.floor(Fraction(2**s) / hi)
        b = math.floor(Fraction(2**s) / lo)
        if a == b:
            return a
        terms *= 2


def max_dependency_for(x: int, k: int) -> int:
    """Largest d with e(d+1) <= 2^(x(k-1)); -1 when even d = 0 fails."""
    if x < 1 or k < 2:
        raise ValueError("need x >= 1 and k >= 2")
    return _floor_pow2_over_e(x * (k - 1)) - 1


def min_cover_size_for_dependency(d: int, k: int) -> int:
    """Smallest x whose dependency budget admits d."""
    if d < 0 or k < 2:
        raise ValueError("need d >= 0 and k >= 2")
    x = 1
    while max_dependency_for(x, k) < d:
        x += 1
    return x


@dataclass(frozen=True)
class DependencyBudget:
    k: int
    x: int

    @property
    def max_dependency(self) -> int:
        return max_dependency_for(self.x, self.k)


def mtc(G: Hypergraph, x: int, seed: int, override: bool = False,
        max_resamples: int | None = None) -> RandomRun:
    """Moser-Tardos resampling for an x-cover.

    Each vertex gets x random bits.  While some edge is monochromatic in all
    x bicolorings, the smallest-index such edge has all x bits of its k
    vertices redrawn.  ``transcript`` lists the resampled edge indices.
    """
    if x < 1:
        raise ValueError("x must be at least 1")
    d = dependency(G)
    budget = max_dependency_for(x, G.k)
    if d > budget and not override:
        raise PreconditionError(f"dependency {d} exceeds budget {budget} for x={x}, k={G.k}")
    if max_resamples is None:
        max_resamples = MTC_SAFETY * (G.m // max(d, 1) + 1)
    src = BitSource(seed)
    edges = np.asarray(G.edges, dtype=np.int64).reshape(G.m, G.k)
    colors = src.bits((x, G.n))
    transcript: list[int] = []
    while True:
        bad = np.flatnonzero(_violated(colors, edges))
        if bad.size == 0:
            break
        if len(transcript) >= max_resamples:
            raise NonTermination(
                f"mtc exceeded {max_resamples} resamples (seed {seed}, d={d}, m={G.m})", transcript
            )
        j = int(bad[0])
        transcript.append(j)
        colors[:, edges[j]] = src.bits((x, G.k))
    run = RandomRun("mtc", seed, x, len(transcript), src.used, _cover_from_array(colors), transcript)
    assert run.bits_used == run.expected_bits(G.n, G.k)
    return run


def check_run(G: Hypergraph, run: RandomRun) -> bool:
    return verify_cover(G, run.cover).valid and run.bits_used == run.expected_bits(G.n, G.k)
