"""Bicoloring covers of k-uniform hypergraphs: exact oracles, constructions,
randomized schemes, an approximation sweep and instance generators."""
from .core import (
    Bicoloring,
    CanonicalPartition,
    Cover,
    CoverCertificate,
    Hypergraph,
    ProperColoring,
    canonical_partition,
    coloring_from_cover,
    cover_from_coloring,
    dependency,
    greedy_hitting_set,
    greedy_maximal_matching,
    uncovered_mask,
    verify_cover,
)

__version__ = "0.1.0"

__all__ = [
    "Bicoloring",
    "CanonicalPartition",
    "Cover",
    "CoverCertificate",
    "Hypergraph",
    "ProperColoring",
    "canonical_partition",
    "coloring_from_cover",
    "cover_from_coloring",
    "dependency",
    "greedy_hitting_set",
    "greedy_maximal_matching",
    "uncovered_mask",
    "verify_cover",
]
