import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pathfree.detect import BudgetExceeded
from pathfree.digraph import Coloring, Digraph, reverse
from pathfree.gadgets import CATALOG, build_gadget, build_tower, tower_special_3coloring
from pathfree.patterns import DIRECTED_EDGE, P3, V3, V3_SOURCE, PathPattern, enumerate_orientations, reverse_pattern
from pathfree.solve import (
    CnfFormula,
    decide,
    dpll_solve,
    encode_cnf,
    external_sat_available,
    solve_exact,
    solve_via_cnf,
    verify_coloring,
)

from conftest import digraphs, path_words, random_digraph, random_planar_acyclic


def _brute(d, p, k):
    return any(verify_coloring(d, Coloring(k, c), p) is None for c in itertools.product(range(k), repeat=d.n))


# verification


def test_tree_bipartition_is_edge_free():
    tree = Digraph(5, ((0, 1), (2, 1), (1, 3), (4, 3)))
    assert verify_coloring(tree, Coloring(2, (0, 1, 0, 0, 1)), DIRECTED_EDGE) is None


def test_constant_coloring_gives_witness():
    d = Digraph(3, ((0, 1), (1, 2)))
    assert verify_coloring(d, Coloring(2, (1, 1, 1)), P3) == (0, 1, 2)


def test_special_tower_coloring_verifies():
    c = tower_special_3coloring(V3_SOURCE)
    assert verify_coloring(build_tower(V3_SOURCE).digraph, c, V3_SOURCE) is None


# exact search


def test_odd_cycle_not_two_colorable_for_edges():
    c5 = Digraph(5, ((0, 1), (1, 2), (3, 2), (3, 4), (0, 4)))
    assert not solve_exact(c5, DIRECTED_EDGE, 2).satisfiable


@pytest.mark.parametrize("p", [V3, V3_SOURCE])
def test_v3_towers(p):
    d = build_tower(p).digraph
    assert d.n == 13
    assert not solve_exact(d, p, 2).satisfiable
    assert solve_exact(d, p, 3).satisfiable


@given(digraphs(max_n=4), path_words(min_n=5, max_n=6))
def test_pattern_longer_than_digraph_is_trivial(d, p):
    assert solve_exact(d, p, 1).satisfiable


def test_deterministic():
    d = build_gadget("negator_p3").digraph
    assert solve_exact(d, P3, 2).coloring == solve_exact(d, P3, 2).coloring


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        solve_exact(build_tower(PathPattern(">>>")).digraph, PathPattern(">>>"), 2, budget=5)


def test_pins_and_extra_tuples():
    d = Digraph(3, ())
    res = solve_exact(d, P3, 2, pinned={0: 1}, not_all_equal=[(0, 1), (1, 2)])
    assert res.coloring.colors == (1, 0, 1)
    assert not solve_exact(d, P3, 2, pinned={0: 0, 2: 0}, not_all_equal=[(0, 1), (1, 2), (0, 2)]).satisfiable


def test_bad_pin_rejected():
    with pytest.raises(ValueError):
        solve_exact(Digraph(1, ()), P3, 2, pinned={0: 5})


@pytest.mark.parametrize("seed", range(4))
def test_exact_matches_brute_force(seed):
    rng = random.Random(seed)
    pats = [p for n in (2, 3, 4) for p in enumerate_orientations(n)]
    for _ in range(60):
        d = random_digraph(rng, rng.randint(1, 8), 0.45)
        p, k = rng.choice(pats), rng.randint(1, 3)
        expected = _brute(d, p, k)
        for learn in (0, 6):
            assert solve_exact(d, p, k, learn=learn).satisfiable == expected


@given(digraphs(max_n=9), path_words(min_n=2, max_n=4), st.integers(1, 3))
def test_monotone_in_k(d, p, k):
    if solve_exact(d, p, k).satisfiable:
        assert solve_exact(d, p, k + 1).satisfiable


@given(digraphs(max_n=9), path_words(min_n=2, max_n=4), st.integers(1, 3))
def test_reversal_invariance(d, p, k):
    assert solve_exact(d, p, k).satisfiable == solve_exact(reverse(d), reverse_pattern(p), k).satisfiable


@given(digraphs(max_n=10), path_words(min_n=2, max_n=4), st.integers(1, 3))
def test_returned_colorings_verify(d, p, k):
    res = solve_exact(d, p, k)
    if res.satisfiable:
        assert verify_coloring(d, res.coloring, p) is None


def test_four_colors_suffice_on_planar_instances():
    rng = random.Random(7)
    for _ in range(30):
        d = random_planar_acyclic(rng, rng.randint(4, 10))
        for p in (DIRECTED_EDGE, P3, V3):
            assert solve_exact(d, p, 4).satisfiable
    for gid in CATALOG:
        g = build_gadget(gid)
        assert solve_exact(g.digraph, DIRECTED_EDGE, 4).satisfiable


# CNF route


def test_single_vertex_cnf():
    f, vm = encode_cnf(Digraph(1, ()), P3, 2)
    assert f.clauses == ((1, 2), (-1, -2))
    assert dpll_solve(f) is not None
    assert vm.var(0, 1) == 2


def test_p3_with_one_color_is_unsatisfiable():
    f, _ = encode_cnf(Digraph(3, ((0, 1), (1, 2))), P3, 1)
    assert (-1, -2, -3) in f.clauses
    assert dpll_solve(f) is None


def test_variable_numbering():
    _, vm = encode_cnf(Digraph(4, ()), P3, 3)
    assert [vm.var(v, c) for v in range(4) for c in range(3)] == list(range(1, 13))


def test_contradictory_units():
    assert dpll_solve(CnfFormula(1, ((1,), (-1,)))) is None


def test_empty_formula():
    assert dpll_solve(CnfFormula(3, ())) == {}


def test_dpll_budget():
    p = PathPattern(">>>")
    f, _ = encode_cnf(build_tower(p).digraph, p, 2)
    with pytest.raises(BudgetExceeded):
        dpll_solve(f, budget=2)


@pytest.mark.parametrize("p", enumerate_orientations(4), ids=str)
def test_depth_three_towers_refuted_by_dpll(p):
    f, _ = encode_cnf(build_tower(p).digraph, p, 2)
    assert dpll_solve(f) is None


@pytest.mark.parametrize("p", enumerate_orientations(2) + enumerate_orientations(3), ids=str)
def test_shallow_towers_agree_across_engines(p):
    d = build_tower(p).digraph
    assert solve_exact(d, p, 2).satisfiable == solve_via_cnf(d, p, 2).satisfiable == False


def test_clause_validation():
    with pytest.raises(ValueError):
        CnfFormula(2, ((3,),))
    with pytest.raises(ValueError):
        CnfFormula(2, ((),))


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.lists(st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v])), min_size=1, max_size=3), max_size=8))))
def test_dimacs_round_trip_and_dpll_matches_truth_table(data):
    n, clauses = data
    f = CnfFormula(n, tuple(tuple(c) for c in clauses))
    assert CnfFormula.from_dimacs(f.to_dimacs()) == f
    truth = any(all(any((lit > 0) == bits[abs(lit) - 1] for lit in cl) for cl in f.clauses) for bits in itertools.product((False, True), repeat=n))
    model = dpll_solve(f)
    assert (model is not None) == truth
    if model is not None:
        assert all(any(model.get(abs(lit)) == (lit > 0) for lit in cl) for cl in f.clauses)


def test_dimacs_errors_carry_line_numbers():
    with pytest.raises(ValueError, match="line 2"):
        CnfFormula.from_dimacs("p cnf 2 1\n1 x 0\n")
    with pytest.raises(ValueError, match="header"):
        CnfFormula.from_dimacs("1 2 0\n")


@given(digraphs(max_n=8), path_words(min_n=2, max_n=4), st.integers(1, 3))
def test_cnf_agrees_with_exact(d, p, k):
    via = solve_via_cnf(d, p, k)
    assert via.satisfiable == solve_exact(d, p, k).satisfiable
    if via.satisfiable:
        assert verify_coloring(d, via.coloring, p) is None


@pytest.mark.skipif(not external_sat_available(), reason="python-sat not installed")
def test_external_engine_agrees():
    rng = random.Random(3)
    for _ in range(40):
        d = random_digraph(rng, rng.randint(1, 10))
        p = rng.choice(enumerate_orientations(3))
        assert decide(d, p, 2, engine="external").satisfiable == solve_exact(d, p, 2).satisfiable


def test_unknown_engine():
    with pytest.raises(ValueError):
        decide(Digraph(1, ()), P3, 2, engine="magic")
