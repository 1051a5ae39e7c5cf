import os

os.environ.setdefault("LOG_FILE", "")

import numpy as np
import pytest
from hypothesis import strategies as st

from src.app.models.graph_models import Graph, TargetSet, Thresholds
from src.app.services.graph_service import load_edge_list_file

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "tests", "fixtures")


def fixture_path(name):
    return os.path.join(FIXTURES, name)


def random_graph(rng, n, m, low=0.1, high=0.9):
    """Random simple digraph with m distinct arcs and p uniform in [low, high]."""
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    chosen = rng.choice(len(pairs), size=min(m, len(pairs)), replace=False)
    src = [pairs[i][0] for i in chosen]
    dst = [pairs[i][1] for i in chosen]
    return Graph.from_edges(n, src, dst, rng.uniform(low, high, size=len(src)))


@st.composite
def small_graphs(draw, min_nodes=2, max_nodes=6, max_edges=8, probabilities=None):
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    chosen = draw(st.lists(st.sampled_from(pairs), min_size=1, max_size=max_edges, unique=True))
    if probabilities is None:
        probabilities = st.floats(0.1, 0.9)
    prob = [draw(probabilities) for _ in chosen]
    return Graph.from_edges(n, [u for u, _ in chosen], [v for _, v in chosen], prob)


@st.composite
def threshold_vectors(draw, n):
    return Thresholds(np.array([draw(st.floats(0.05, 1.0)) for _ in range(n)]))


@pytest.fixture
def star():
    """a -> x, a -> y, b -> y, all p = 1. Ids: a=0, x=1, y=2, b=3."""
    return load_edge_list_file(fixture_path("star.txt"))


@pytest.fixture
def fanin3():
    """a, b, c -> u with p = 1/2. Ids: a=0, u=1, b=2, c=3."""
    return load_edge_list_file(fixture_path("fanin3.txt"))


@pytest.fixture
def chain2():
    """v -> u with p = 1. Ids: v=0, u=1."""
    return load_edge_list_file(fixture_path("chain2.txt"))


@pytest.fixture
def two_components():
    """p -> q, p -> r, s -> t, all p = 1. Ids: p=0, q=1, r=2, s=3, t=4."""
    return load_edge_list_file(fixture_path("two_components.txt"))


@pytest.fixture
def fanin3_example(fanin3):
    """FanIn3 with tau_u = 7/8, the sources at 1, and U = {u}."""
    tau = np.ones(fanin3.n)
    tau[fanin3.node("u")] = 7 / 8
    return fanin3, Thresholds(tau), TargetSet.from_nodes(fanin3.n, [fanin3.node("u")])
