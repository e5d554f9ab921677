import itertools
import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from pathfree.digraph import Digraph
from pathfree.patterns import PathPattern

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def digraphs(draw, max_n=8, acyclic=False):
    """Random simple digraph; with ``acyclic`` every arc follows a hidden vertex order."""
    n = draw(st.integers(0, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    order = draw(st.permutations(range(n)))
    arcs = []
    for a, b in chosen:
        u, v = order[a], order[b]
        if not acyclic and draw(st.booleans()):
            u, v = v, u
        arcs.append((u, v))
    return Digraph(n, tuple(arcs))


def path_words(min_n=1, max_n=5):
    return st.integers(min_n - 1, max_n - 1).flatmap(
        lambda length: st.text(alphabet="<>", min_size=length, max_size=length)
    ).map(PathPattern)


def random_digraph(rng: random.Random, n: int, density: float = 0.4, acyclic: bool = False) -> Digraph:
    order = list(range(n))
    rng.shuffle(order)
    arcs = []
    for a, b in itertools.combinations(range(n), 2):
        if rng.random() < density:
            u, v = order[a], order[b]
            if not acyclic and rng.random() < 0.5:
                u, v = v, u
            arcs.append((u, v))
    return Digraph(n, tuple(arcs))


def random_planar_acyclic(rng: random.Random, n: int) -> Digraph:
    """Acyclic orientation of a random planar graph (arcs added while planarity holds)."""
    import networkx as nx

    g = nx.Graph()
    g.add_nodes_from(range(n))
    pairs = list(itertools.combinations(range(n), 2))
    rng.shuffle(pairs)
    for u, v in pairs:
        if rng.random() < 0.5:
            g.add_edge(u, v)
            if not nx.check_planarity(g)[0]:
                g.remove_edge(u, v)
    order = list(range(n))
    rng.shuffle(order)
    pos = {v: i for i, v in enumerate(order)}
    return Digraph(n, tuple((u, v) if pos[u] < pos[v] else (v, u) for u, v in g.edges))


@pytest.fixture
def rng():
    return random.Random(20261018)
