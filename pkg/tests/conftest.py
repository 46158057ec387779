import itertools
from pathlib import Path

import pytest
from hypothesis import strategies as st

from bicover.core import Bicoloring, Cover, Hypergraph
from bicover.io import read_bhg

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def golden():
    return {p.stem: read_bhg(p) for p in sorted(GOLDEN.glob("*.bhg"))}


def c7_paper_cover() -> Cover:
    X1 = Bicoloring.from_classes(7, {1, 3, 5})
    X2 = Bicoloring.from_classes(7, {1, 3, 5, 6})
    return Cover(7, (X1, X2))


@st.composite
def hypergraphs(draw, max_n=8, ks=(2, 3, 4), allow_empty=True):
    k = draw(st.sampled_from(ks))
    n = draw(st.integers(min_value=k, max_value=max_n))
    pool = list(itertools.combinations(range(n), k))
    edges = draw(st.lists(st.sampled_from(pool), unique=True, min_size=0 if allow_empty else 1,
                          max_size=min(len(pool), 30)))
    return Hypergraph(n, k, tuple(edges))


@st.composite
def graph_and_cover(draw, max_n=8, max_x=3):
    G = draw(hypergraphs(max_n=max_n))
    x = draw(st.integers(min_value=0, max_value=max_x))
    vals = draw(st.lists(st.integers(min_value=0, max_value=(1 << G.n) - 1), min_size=x, max_size=x))
    return G, Cover.from_ints(G.n, vals)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for cid in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[cid])
