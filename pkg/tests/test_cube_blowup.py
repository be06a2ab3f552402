from collections import Counter

import pytest
from hypothesis import given, strategies as st

from raagblowup.cube_blowup import (BlowupStructure, build_blowup, characteristic_cycle, collapse_partition,
                                    duplicate_hyperplane, induced_outer_automorphism, is_treelike,
                                    natural_structure, recover_partitions, salvetti, structures, treelike_sets)
from raagblowup.cubes import CubeComplex, CubicalMap, compose_maps, identity_map, inverse_map, product as cube_product
from raagblowup.graph_core import SimplicialGraph, complete, discrete
from raagblowup.partitions import (apply_signed, enumerate_compatible_collections, partition, signed_automorphism_generators,
                                   singleton_partition)
from raagblowup.raag_algebra import fmt_word

from conftest import graphs
from oracles import brute_automorphism_count

F2 = discrete("xy")
P = partition(F2, "", "x y", "x^-1 y^-1")


def theta():
    return build_blowup(F2, [P])


def collapse_all_partitions(x):
    hyps = {x.edge_hyperplane[e] for e, lab in enumerate(x.edge_labels) if lab[0] == "P"}
    return x.collapse(hyps)[0]


def test_salvetti_shapes():
    r = salvetti(F2)
    assert (r.n_vertices, len(r.edges), len(r.squares)) == (1, 2, 0)
    t = salvetti(SimplicialGraph("ab", [("a", "b")]))
    assert (t.n_vertices, len(t.edges), len(t.squares)) == (1, 2, 1)
    k3 = salvetti(complete("abc"))
    assert (k3.n_vertices, len(k3.edges), len(k3.squares)) == (1, 3, 3)


def test_theta_shape():
    x = theta()
    assert (x.n_vertices, len(x.edges), len(x.squares)) == (2, 3, 0)
    side1, side2 = x.region_index[(0,)], x.region_index[(1,)]
    for v in "xy":
        (e,) = x.edges_labeled(("V", v))
        assert x.edges[e] == (side2, side1)
    assert collapse_all_partitions(x).isomorphism(salvetti(F2)) is not None


def test_mixed_example():
    g = SimplicialGraph("xyab", [("a", "b")])
    p = partition(g, "", "x a a^-1 b b^-1", "x^-1 y y^-1")
    x = build_blowup(g, [p])
    r1 = x.region_index[(0,)]
    for v in "ab":
        (e,) = x.edges_labeled(("V", v))
        assert x.edges[e] == (r1, r1)
    assert len(x.squares) == 1
    (e,) = x.edges_labeled(("V", "x"))
    assert x.edges[e][0] != x.edges[e][1]


def test_empty_collection_is_salvetti(fig4):
    assert build_blowup(fig4, []).isomorphism(salvetti(fig4)) is not None


def test_incompatible_rejected():
    q = partition(F2, "", "x y^-1", "x^-1 y")
    with pytest.raises(ValueError):
        build_blowup(F2, [P, q])


@given(st.data())
def test_collapse_gives_salvetti(data):
    g = data.draw(graphs(max_n=4))
    cols = enumerate_compatible_collections(g, 3)
    pi = data.draw(st.sampled_from(cols))
    x = build_blowup(g, pi)
    assert x.is_connected()
    assert len(x.hyperplanes) == len(pi) + len(g)
    assert x.separating_hyperplanes() == []
    assert collapse_all_partitions(x).isomorphism(salvetti(g)) is not None
    assert Counter(recover_partitions(x, natural_structure(x), g)) == Counter(pi)


@given(st.data())
def test_blowup_equivariant_under_signed_symmetries(data):
    g = data.draw(graphs(max_n=4))
    pi = data.draw(st.sampled_from(enumerate_compatible_collections(g, 2)))
    gens = signed_automorphism_generators(g)
    perm, signs = data.draw(st.sampled_from(gens))
    moved = [apply_signed(p, perm, signs) for p in pi]
    assert build_blowup(g, pi).isomorphism(build_blowup(g, moved)) is not None


def test_collapse_and_duplicate():
    x = theta()
    y, vmap = collapse_partition(x, 0)
    assert y.isomorphism(salvetti(F2)) is not None
    d = duplicate_hyperplane(x, ("P", 0))
    assert d.n_vertices == 3 and len(d.edges_labeled(("P", 0))) == 1 and len(d.edges_labeled(("P", 1))) == 1
    for i in (0, 1):
        assert collapse_partition(d, i)[0].isomorphism(x) is not None
    r = duplicate_hyperplane(salvetti(F2), ("V", "x"))
    assert r.isomorphism(build_blowup(F2, [singleton_partition(F2, "x")], check=False)) is not None


def test_characteristic_cycles():
    x = theta()
    cyc = characteristic_cycle(x, "x")
    labs = [x.edge_labels[e] for e, _ in cyc.steps]
    assert labs == [("V", "x"), ("P", 0)]
    assert cyc.vertices(x)[0] == cyc.vertices(x)[-1]
    r = salvetti(F2)
    assert [r.edge_labels[e] for e, _ in characteristic_cycle(r, "y").steps] == [("V", "y")]


def test_treelike_sets():
    x = theta()
    assert treelike_sets(x) == [frozenset({0}), frozenset({1}), frozenset({2})]
    assert treelike_sets(salvetti(F2)) == [frozenset()]
    d = duplicate_hyperplane(x, ("P", 0))
    assert natural_structure(d).treelike == {0, 1}
    # other treelike sets need not contain both duplicates
    assert frozenset({0, 2}) in treelike_sets(d)
    assert all(is_treelike(d, t, F2) for t in treelike_sets(d))


def test_recover_other_structure():
    x = theta()
    others = [s for s in structures(x) if s.treelike == {1}]
    assert others
    for s in others:
        (q,) = recover_partitions(x, s, F2)
        assert q.is_valid()
        assert build_blowup(F2, [q]).isomorphism(x) is not None
    assert recover_partitions(salvetti(F2), BlowupStructure([], {0: ("x", 1), 1: ("y", 1)}), F2) == []


@pytest.mark.parametrize("x,order", [(theta(), 12), (salvetti(F2), 8),
                                     (salvetti(SimplicialGraph("ab", [("a", "b")])), 8)])
def test_automorphism_orders(x, order):
    auts = x.automorphisms()
    assert len(auts) == order == brute_automorphism_count(x)
    ident = identity_map(x)
    for f in auts:
        assert not f.problems()
        assert compose_maps(f, inverse_map(f)) == ident


def test_induced_outer_examples():
    x = theta()
    st_ = natural_structure(x)
    ex, ey = x.edges_labeled(("V", "x"))[0], x.edges_labeled(("V", "y"))[0]
    swap = next(f for f in x.automorphisms()
                if f.emap[ex] == (ey, 1) and f.emap[ey] == (ex, 1) and f.vmap == (0, 1))
    a = induced_outer_automorphism(x, swap, st_)
    assert {v: fmt_word(w) for v, w in a.images.items()} == {"x": "y", "y": "x"}
    assert induced_outer_automorphism(x, identity_map(x), st_).is_identity()
    r = salvetti(F2)
    flip = CubicalMap(r, r, [0], [(0, -1), (1, 1)])
    a = induced_outer_automorphism(r, flip)
    assert {v: fmt_word(w) for v, w in a.images.items()} == {"x": "x^-1", "y": "y"}


def test_cube_product_and_json():
    a = salvetti(F2)
    p = cube_product(a, a)
    assert (p.n_vertices, len(p.edges), len(p.squares)) == (1, 4, 4)
    j = theta().to_json()
    assert len(j["regions"]) == 2 and len(j["hyperplanes"]) == 3
    with pytest.raises(ValueError):
        CubeComplex(1, [(0, 1)], [])
