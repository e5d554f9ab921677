import itertools

import networkx as nx
import pytest
from hypothesis import given

from pathfree.digraph import Digraph
from pathfree.patterns import (
    DIRECTED_EDGE,
    L4,
    L4_REVERSED,
    N4,
    P3,
    P4,
    V3,
    V3_SOURCE,
    PathPattern,
    PatternError,
    TreePattern,
    Verdict,
    classify_problem,
    enumerate_orientations,
    lrem,
    pattern_to_digraph,
    reverse_pattern,
)

from conftest import path_words


def _iso_classes(n):
    """Orientation classes by digraph isomorphism, independent of the canonical form."""
    reps = []
    for word in itertools.product("><", repeat=n - 1):
        d = pattern_to_digraph(PathPattern("".join(word)))
        g = nx.DiGraph()
        g.add_nodes_from(range(d.n))
        g.add_edges_from(d.arcs)
        if not any(nx.is_isomorphic(g, r) for r in reps):
            reps.append(g)
    return reps


def test_three_orientations_of_p3():
    assert {p.word for p in enumerate_orientations(3)} == {P3.canonical().word, V3.canonical().word, V3_SOURCE.canonical().word}


def test_four_orientations_of_p4():
    got = enumerate_orientations(4)
    assert len(got) == 4
    for named in (P4, N4, L4, L4_REVERSED):
        assert sum(named.isomorphic(p) for p in got) == 1


def test_single_orientation_of_an_edge():
    assert enumerate_orientations(2) == [DIRECTED_EDGE]


def test_ten_orientations_on_five_vertices():
    # frozen from the isomorphism oracle below
    assert len(enumerate_orientations(5)) == 10


@pytest.mark.parametrize("n", range(1, 8))
def test_counts_match_isomorphism_oracle(n):
    assert len(enumerate_orientations(n)) == len(_iso_classes(n))


def test_enumeration_is_sorted_and_canonical():
    for n in range(1, 7):
        got = enumerate_orientations(n)
        assert got == sorted(got, key=PathPattern.sort_key)
        assert all(p == p.canonical() for p in got)


def test_zero_vertices_rejected():
    with pytest.raises(PatternError):
        enumerate_orientations(0)


def test_bad_letters_rejected():
    with pytest.raises(PatternError):
        PathPattern(">x")


@given(path_words(max_n=8))
def test_canonical_is_idempotent_and_traversal_blind(p):
    assert p.canonical().canonical() == p.canonical()
    assert p.traversed_backwards().canonical() == p.canonical()


@given(path_words(max_n=8))
def test_parse_print_round_trip(p):
    assert PathPattern.parse(str(p)) == p


# leaf removal


def test_lrem_l4_is_directed_edge():
    assert lrem(L4) == DIRECTED_EDGE


def test_lrem_p5_is_p3():
    assert lrem(PathPattern(">>>>")) == P3


def test_lrem_v3_is_single_vertex():
    assert lrem(V3).n == 1


def test_lrem_needs_three_vertices():
    with pytest.raises(PatternError):
        lrem(DIRECTED_EDGE)


@given(path_words(min_n=3, max_n=8))
def test_lrem_commutes_with_reversal(p):
    assert lrem(reverse_pattern(p)).canonical() == reverse_pattern(lrem(p)).canonical()


# reversal


def test_p3_is_self_reverse():
    assert reverse_pattern(P3).isomorphic(P3)


def test_v3_reverses_to_source_form():
    assert reverse_pattern(V3) == V3_SOURCE


def test_l4_reverses_to_mirror():
    assert reverse_pattern(L4).isomorphic(L4_REVERSED)
    assert not L4.isomorphic(L4_REVERSED)


# digraphs


def test_l4_digraph():
    assert pattern_to_digraph(L4).arcs == ((0, 1), (1, 2), (3, 2))


def test_p3_digraph():
    assert pattern_to_digraph(P3).arcs == ((0, 1), (1, 2))


def test_single_vertex_digraph():
    d = pattern_to_digraph(PathPattern(""))
    assert d.n == 1 and d.arcs == ()


def test_tree_pattern_validation():
    with pytest.raises(PatternError):
        TreePattern(Digraph(3, ((0, 1),)))
    star = TreePattern(Digraph(4, ((0, 1), (0, 2), (3, 0))))
    assert star.leaves == [1, 2, 3]
    assert star.as_path() is None
    assert star.lrem().digraph.n == 1


@given(path_words(max_n=7))
def test_tree_from_path_reads_back(p):
    assert TreePattern.from_path(p).as_path().isomorphic(p)


# classification


def test_p3_two_colors_is_hard():
    assert classify_problem(P3, 2) is Verdict.NP_HARD


def test_edge_three_colors_is_hard():
    assert classify_problem(DIRECTED_EDGE, 3) is Verdict.NP_HARD


def test_edge_two_colors_is_bipartiteness():
    assert classify_problem(DIRECTED_EDGE, 2) is Verdict.POLYNOMIAL_BIPARTITE


@pytest.mark.parametrize("p", [DIRECTED_EDGE, P3, V3, L4, PathPattern(">><<>")])
def test_four_colors_always_suffice(p):
    assert classify_problem(p, 4) is Verdict.ALWAYS_COLORABLE


def test_trivial_cases():
    assert classify_problem(PathPattern(""), 3) is Verdict.TRIVIAL_SINGLETON
    assert classify_problem(P4, 1) is Verdict.TRIVIAL_SINGLETON


def test_nonpositive_k_rejected():
    with pytest.raises(PatternError):
        classify_problem(P3, 0)
