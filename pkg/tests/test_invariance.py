import pytest
from hypothesis import given, strategies as st

from raagblowup.graph_core import SimplicialGraph, complete, components, discrete
from raagblowup.invariance import (chain_length, fold_class_check, is_u0_invariant, minimal_invariant_subgraphs,
                                   neighborhood, poset_dot, product_of, restrict_by_search, restrict_generator,
                                   u0_invariant_subgraphs, whitehead_factors)
from raagblowup.partitions import all_partitions
from raagblowup.raag_algebra import (compose, fold, fmt_word, inversion, outer_equal_bounded, partial_conjugation,
                                     whitehead_automorphism)

from conftest import graphs
from oracles import closure_counterexamples, subsets


def elementary_generators(g):
    out = [inversion(g, v) for v in g.vertices]
    for x in g.vertices:
        for y in g.vertices:
            if x != y and g.link(x) <= g.link(y):
                out += [fold(g, x, y, True), fold(g, x, y, False)]
        rest = frozenset(g.vertices) - g.star(x)
        for c in components(g, rest):
            out.append(partial_conjugation(g, x, c))
    return out


def semantic_invariant(g, d, gens):
    """Every elementary generator carries A_Δ into a conjugate of A_Δ (bounded search)."""
    return all(restrict_by_search(g, a, d, 2) is not None for a in gens)


@given(graphs(max_n=4))
def test_criterion_matches_semantics(g):
    gens = elementary_generators(g)
    for d in subsets(g):
        assert is_u0_invariant(g, d).invariant == semantic_invariant(g, d, gens), sorted(d)


def test_figure4_examples(fig4):
    assert is_u0_invariant(fig4, "abcd").invariant
    rep = is_u0_invariant(fig4, "e")
    assert not rep.invariant and ("i", "e", "c") in rep.violations
    assert rep.to_json()["violations"][0]["condition"] == "i"
    inv = u0_invariant_subgraphs(fig4)
    for s in ["a", "b", "cd", "abcd", "acd", "abcdef", ""]:
        assert frozenset(s) in inv
    assert sorted(map(sorted, minimal_invariant_subgraphs(fig4))) == [["a"], ["b"], ["c", "d"]]
    assert chain_length(fig4, set(fig4.vertices)) == 4
    assert chain_length(fig4, "cd") == 0
    assert neighborhood(fig4, "cd") == set("abcd")
    assert neighborhood(fig4, "") == frozenset()
    with pytest.raises(ValueError):
        chain_length(fig4, "e")
    assert poset_dot(fig4).startswith("digraph {")


def test_free_and_complete():
    g = discrete("xyz")
    assert u0_invariant_subgraphs(g) == [frozenset(), frozenset("xyz")]
    assert chain_length(g, "xyz") == 0
    assert sorted(map(sorted, minimal_invariant_subgraphs(complete("abc")))) == [["a"], ["b"], ["c"]]
    two = SimplicialGraph("abcdef", [("a", "b"), ("b", "c"), ("a", "c"), ("d", "e"), ("e", "f"), ("d", "f")])
    inv = u0_invariant_subgraphs(two)
    assert frozenset("abc") in inv and frozenset("def") in inv
    assert all(frozenset(v) in inv for v in "abcdef")


def test_budget():
    g = discrete([f"v{i}" for i in range(5)])
    with pytest.raises(ValueError):
        u0_invariant_subgraphs(g, budget=4)


@given(graphs(max_n=5))
def test_closure_clauses(g):
    assert closure_counterexamples(g) == []


@given(graphs(max_n=6))
def test_minimal_equals_maximal_fold_classes(g):
    mins, folds = fold_class_check(g)
    assert mins == folds


def test_restriction_examples(fig4):
    d = set("abcd")
    f = fold(fig4, "c", "d")
    r = restrict_generator(fig4, f, d)
    assert fmt_word(r.images["c"]) == "c d^-1" and set(r.graph.vertices) == d
    pc = partial_conjugation(fig4, "c", {"e"})
    assert restrict_generator(fig4, pc, d).is_identity()
    assert restrict_generator(fig4, inversion(fig4, "f"), d).is_identity()
    with pytest.raises(ValueError):
        restrict_generator(fig4, f, "e")


def test_whitehead_factorization(fig4):
    for p in all_partitions(fig4):
        for b in p.bases():
            for e in (1, -1):
                a = whitehead_automorphism(fig4, p, (b, e))
                prod = product_of(*whitehead_factors(fig4, p, (b, e)))
                assert prod.images == a.images


@pytest.mark.parametrize("d", ["abcd", "acd", "cd"])
def test_restriction_routes_agree(fig4, d):
    for p in all_partitions(fig4)[::7]:
        b = sorted(p.bases())[0]
        a = whitehead_automorphism(fig4, p, b)
        r1 = restrict_generator(fig4, a, set(d))
        r2 = restrict_by_search(fig4, a, set(d), 3)
        assert r2 is not None
        assert outer_equal_bounded(r1.graph, r1, r2, 3) is not None


@given(st.data())
def test_restriction_respects_composition(data):
    g = data.draw(graphs(max_n=4))
    inv = [d for d in u0_invariant_subgraphs(g) if d]
    d = data.draw(st.sampled_from(inv))
    gens = elementary_generators(g)
    a1, a2 = data.draw(st.sampled_from(gens)), data.draw(st.sampled_from(gens))
    lhs = compose(restrict_generator(g, a1, d), restrict_generator(g, a2, d))
    rhs = restrict_generator(g, product_of(a1, a2), d)
    assert outer_equal_bounded(lhs.graph, lhs, rhs, 2) is not None
