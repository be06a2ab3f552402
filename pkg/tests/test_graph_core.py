import pytest
from hypothesis import given

from raagblowup.graph_core import (SimplicialGraph, complete, components, components_double, corpus, discrete,
                                   double, fold_classes, graph_from_dot, graph_from_json, graph_to_dot,
                                   graph_to_json, load_graph, parse_signed)

from conftest import graphs


def test_figure4_links(fig4):
    assert fig4.link("a") == {"e", "c", "d"}
    assert fig4.link_of_set({"c", "d"}) == {"a", "b"}
    assert fig4.link_of_set({"a", "b", "c", "d"}) == frozenset()


def test_components_outside_star(fig4):
    comps = components(fig4, frozenset(fig4.vertices) - fig4.star("c"))
    assert sorted(map(sorted, comps)) == [["d"], ["e"], ["f"]]


def test_doubled_components_are_singletons(fig4):
    comps = components_double(double(fig4), fig4.signed(fig4.link("c")))
    assert len(comps) == 8 and all(len(c) == 1 for c in comps)


def test_fold_classes(fig4):
    classes, _, maximal = fold_classes(fig4)
    assert sorted(map(sorted, classes)) == [["a"], ["b"], ["c", "d"], ["e"], ["f"]]
    assert sorted(map(sorted, maximal)) == [["a"], ["b"], ["c", "d"]]


def test_bad_input():
    with pytest.raises(ValueError):
        SimplicialGraph("ab", [("a", "z")])
    with pytest.raises(ValueError):
        SimplicialGraph("aa")
    with pytest.raises(ValueError):
        load_graph('{"vertices": ["a"')
    with pytest.raises(ValueError):
        graph_from_json({"edges": []})
    with pytest.raises(ValueError):
        parse_signed("a^2")


def test_dot_roundtrip(fig4):
    assert graph_from_dot(graph_to_dot(fig4)) == fig4
    assert load_graph("graph { x -- y; z }") == SimplicialGraph("xyz", [("x", "y")])


@given(graphs())
def test_json_roundtrip(g):
    assert graph_from_json(graph_to_json(g)) == g


@given(graphs())
def test_link_star(g):
    for v in g.vertices:
        assert v not in g.link(v)
        assert g.star(v) == g.link(v) | {v}
        for w in g.link(v):
            assert v in g.link(w)


def test_corpus_shape():
    c = corpus()
    assert len(c) == 50
    assert c[0][0] == "figure4"
    assert len({n for n, _ in c}) == 50
    assert all(len(g) <= 6 for _, g in c)


def test_named_graphs():
    assert complete("abc").link("a") == {"b", "c"}
    assert discrete("xy").link("x") == frozenset()
