import itertools

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pathfree.digraph import (
    Coloring,
    Digraph,
    DigraphBuilder,
    DigraphError,
    EmbeddingError,
    bipartition,
    count_faces,
    disjoint_union,
    from_dot,
    induced_subdigraph,
    is_acyclic,
    is_bipartite,
    planar_rotation,
    reverse,
    to_dot,
    topological_order,
    underlying_graph,
    verify_embedding,
)

from conftest import digraphs

CYCLE3 = Digraph(3, ((0, 1), (1, 2), (2, 0)))
TT3 = Digraph(3, ((0, 1), (0, 2), (1, 2)))


def _nx(d):
    g = nx.DiGraph()
    g.add_nodes_from(range(d.n))
    g.add_edges_from(d.arcs)
    return g


# invariants of the type


def test_loops_rejected():
    with pytest.raises(DigraphError):
        Digraph(2, ((1, 1),))


def test_antiparallel_rejected():
    with pytest.raises(DigraphError):
        Digraph(2, ((0, 1), (1, 0)))


def test_builder_rejects_antiparallel_instead_of_merging():
    b = DigraphBuilder()
    b.add_vertices(2)
    b.add_arc(0, 1)
    with pytest.raises(DigraphError):
        b.add_arc(1, 0)
    assert b.build().arcs == ((0, 1),)


def test_out_of_range_endpoint_rejected():
    with pytest.raises(DigraphError):
        Digraph(2, ((0, 2),))


def test_coloring_range_checked():
    with pytest.raises(ValueError):
        Coloring(2, (0, 2))


# acyclicity


def test_three_cycle_is_cyclic():
    assert not is_acyclic(CYCLE3)


def test_transitive_tournament_is_acyclic():
    assert is_acyclic(TT3)


def test_empty_digraph_is_acyclic_and_bipartite():
    empty = Digraph(0, ())
    assert is_acyclic(empty)
    assert is_bipartite(empty)


@given(digraphs())
def test_acyclic_matches_networkx(d):
    assert is_acyclic(d) == nx.is_directed_acyclic_graph(_nx(d))


@given(digraphs())
def test_acyclic_invariant_under_reversal(d):
    assert is_acyclic(d) == is_acyclic(reverse(d))


@given(digraphs(acyclic=True))
def test_topological_order_respects_arcs(d):
    order = topological_order(d)
    pos = {v: i for i, v in enumerate(order)}
    assert all(pos[u] < pos[v] for u, v in d.arcs)


# underlying graph and reversal


def test_underlying_single_arc():
    assert underlying_graph(Digraph(2, ((0, 1),))) == {frozenset({0, 1})}


def test_underlying_of_three_cycle_is_triangle():
    assert underlying_graph(CYCLE3) == {frozenset(e) for e in itertools.combinations(range(3), 2)}


def test_reverse_single_arc():
    assert reverse(Digraph(2, ((0, 1),))).arcs == ((1, 0),)


@given(digraphs(max_n=10))
def test_reverse_is_involution_and_keeps_adjacency(d):
    assert reverse(reverse(d)) == d
    assert underlying_graph(reverse(d)) == underlying_graph(d)


# induced subdigraphs and unions


def test_induced_whole_set_is_copy():
    sub, relabel = induced_subdigraph(TT3, range(3))
    assert sub == TT3 and relabel == {0: 0, 1: 1, 2: 2}


def test_induced_empty_set():
    sub, _ = induced_subdigraph(TT3, [])
    assert sub.n == 0 and sub.arcs == ()


def test_induced_on_directed_p4():
    p4 = Digraph(4, ((0, 1), (1, 2), (2, 3)))
    sub, relabel = induced_subdigraph(p4, {0, 1, 3})
    assert sub.n == 3
    assert sub.arcs == ((relabel[0], relabel[1]),)


def test_induced_rejects_out_of_range():
    with pytest.raises(DigraphError):
        induced_subdigraph(TT3, [5])


@given(digraphs(), st.data())
def test_induced_arcs_are_restriction(d, data):
    s = data.draw(st.sets(st.integers(0, max(d.n - 1, 0))) if d.n else st.just(set()))
    sub, relabel = induced_subdigraph(d, s)
    back = {i: v for v, i in relabel.items()}
    assert {(back[u], back[v]) for u, v in sub.arcs} == {(u, v) for u, v in d.arcs if u in s and v in s}


def test_union_of_two_arcs():
    a = Digraph(2, ((0, 1),))
    u, off = disjoint_union(a, a)
    assert (u.n, len(u.arcs), off) == (4, 2, 2)
    assert u.arcs == ((0, 1), (2, 3))


def test_union_with_empty():
    u, _ = disjoint_union(TT3, Digraph(0, ()))
    assert u == TT3


@given(digraphs(acyclic=True), digraphs(acyclic=True))
def test_union_preserves_acyclicity(d1, d2):
    assert is_acyclic(disjoint_union(d1, d2)[0])


# bipartiteness


def test_directed_four_cycle_bipartite():
    assert is_bipartite(Digraph(4, ((0, 1), (1, 2), (2, 3), (3, 0))))


def test_three_cycle_not_bipartite():
    assert not is_bipartite(CYCLE3)


@given(digraphs())
def test_bipartite_matches_networkx_and_witness_is_proper(d):
    side = bipartition(d)
    assert (side is not None) == nx.is_bipartite(nx.Graph(_nx(d)))
    if side is not None:
        assert all(side[u] != side[v] for u, v in d.arcs)


# embeddings

# K4 drawn with 0 on top, 1 and 2 at the bottom, 3 in the middle; counterclockwise orders
K4 = Digraph(4, tuple(itertools.combinations(range(4), 2)))
K4_ROTATION = ((1, 3, 2), (2, 3, 0), (0, 3, 1), (0, 1, 2))


def test_k4_hand_rotation_is_planar():
    assert count_faces(K4, K4_ROTATION) == [(4, 6, 4)]
    assert verify_embedding(K4, K4_ROTATION)


def test_single_edge_embedding():
    d = Digraph(2, ((0, 1),))
    assert count_faces(d, ((1,), (0,))) == [(2, 1, 1)]
    assert verify_embedding(d, ((1,), (0,)))


def test_k5_has_no_planar_rotation():
    k5 = Digraph(5, tuple(itertools.combinations(range(5), 2)))
    per_vertex = []
    for v in range(5):
        others = [w for w in range(5) if w != v]
        # cyclic orders with the first neighbour fixed
        per_vertex.append([(others[0],) + perm for perm in itertools.permutations(others[1:])])
    best = max(v - e + f for rot in itertools.product(*per_vertex) for v, e, f in count_faces(k5, rot))
    assert best < 2


def test_malformed_rotation_rejected():
    with pytest.raises(EmbeddingError):
        count_faces(K4, ((1, 3), (2, 3, 0), (0, 3, 1), (0, 1, 2)))
    with pytest.raises(EmbeddingError):
        count_faces(K4, ((1, 1, 2), (2, 3, 0), (0, 3, 1), (0, 1, 2)))


def test_verify_requires_rotation():
    with pytest.raises(EmbeddingError):
        verify_embedding(K4)


@given(digraphs(max_n=9))
def test_library_rotation_passes_euler_check(d):
    rot = planar_rotation(d)
    assert (rot is not None) == nx.check_planarity(nx.Graph(_nx(d)))[0]
    if rot is not None:
        assert verify_embedding(d, rot)


# serialization


@given(digraphs())
def test_json_round_trip(d):
    d = d.with_labels({f"v{i}": i for i in range(min(d.n, 3))})
    rot = planar_rotation(d)
    if rot is not None:
        d = d.with_rotation(rot)
    back = Digraph.loads(d.dumps())
    assert back == d and back.labels == d.labels and back.rotation == d.rotation
    assert back.dumps() == d.dumps()


@given(digraphs())
def test_dot_round_trip(d):
    d = d.with_labels({"t": 0} if d.n else {})
    back = from_dot(to_dot(d))
    assert back.arcs == d.arcs and back.labels == d.labels
