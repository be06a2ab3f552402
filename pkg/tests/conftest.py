from itertools import combinations

import pytest
from hypothesis import settings, strategies as st

from raagblowup.graph_core import SimplicialGraph, corpus, figure4_graph

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

NAMES = "abcdef"


@st.composite
def graphs(draw, min_n=1, max_n=5):
    n = draw(st.integers(min_n, max_n))
    names = NAMES[:n]
    pairs = list(combinations(names, 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return SimplicialGraph(names, [p for p, m in zip(pairs, mask) if m])


@st.composite
def words(draw, g, max_len=6):
    letters = [(v, e) for v in g.vertices for e in (1, -1)]
    return tuple(draw(st.lists(st.sampled_from(letters), max_size=max_len)))


@pytest.fixture(scope="session")
def fig4():
    return figure4_graph()


@pytest.fixture(scope="session")
def the_corpus():
    return corpus()
