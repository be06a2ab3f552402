
import pytest
from hypothesis import given, strategies as st

from raagblowup.graph_core import SimplicialGraph, discrete, inv
from raagblowup.partitions import partition
from raagblowup.raag_algebra import (RaagAutomorphism, abelianization, apply, compose, conjugators, fmt_word,
                                     fold, from_images, identity, inner, inverse, inversion, is_inner_bounded,
                                     normalize, outer_equal_bounded, parse_word, partial_conjugation,
                                     whitehead_automorphism, word_inverse)

from conftest import graphs, words


def shuffle_oracle(g, w):
    """Lex-least shortest word reachable by commuting swaps and cancellations."""
    key = lambda u: [g.signed_key(s) for s in u]
    seen = {tuple(w)}
    todo = [tuple(w)]
    while todo:
        u = todo.pop()
        for i in range(len(u) - 1):
            a, b = u[i], u[i + 1]
            nxt = []
            if a == inv(b):
                nxt.append(u[:i] + u[i + 2:])
            if a[0] != b[0] and g.adjacent(a[0], b[0]):
                nxt.append(u[:i] + (b, a) + u[i + 2:])
            for v in nxt:
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
    m = min(map(len, seen))
    return min((u for u in seen if len(u) == m), key=key)


@given(st.data())
def test_normal_form_matches_shuffle_oracle(data):
    g = data.draw(graphs(max_n=4))
    w = data.draw(words(g, max_len=6))
    assert normalize(g, w) == shuffle_oracle(g, w)


@given(st.data())
def test_normal_form_is_idempotent_and_multiplicative(data):
    g = data.draw(graphs(max_n=4))
    w1, w2 = data.draw(words(g)), data.draw(words(g))
    n1 = normalize(g, w1)
    assert normalize(g, n1) == n1
    assert normalize(g, w1 + w2) == normalize(g, n1 + normalize(g, w2))
    assert normalize(g, w1 + word_inverse(w1)) == ()


def test_examples(fig4):
    g = discrete("xy")
    assert fmt_word(normalize(g, parse_word("x y y^-1 x"))) == "x x"
    assert normalize(fig4, parse_word("c d c^-1")) == parse_word("c d c^-1")
    ab = SimplicialGraph("ab", [("a", "b")])
    assert fmt_word(normalize(ab, parse_word("b a"))) == "a b"


def test_whitehead_example(fig4):
    p = partition(fig4, "a a^-1 b b^-1", "c d", "c^-1 d^-1 e e^-1 f f^-1")
    a = whitehead_automorphism(fig4, p, "c")
    assert {v: fmt_word(w) for v, w in a.images.items() if w != ((v, 1),)} == {"d": "d c^-1"}
    assert compose(a, inverse(a)).is_identity()


def test_elementary(fig4):
    f = fold(fig4, "c", "d")
    assert fmt_word(f.images["c"]) == "c d^-1"
    assert fmt_word(fold(fig4, "c", "d", right=False).images["c"]) == "d c"
    pc = partial_conjugation(fig4, "c", {"e"})
    assert fmt_word(pc.images["e"]) == "c e c^-1"
    with pytest.raises(ValueError):
        fold(fig4, "a", "c")
    with pytest.raises(ValueError):
        partial_conjugation(fig4, "c", {"a"})
    with pytest.raises(ValueError):
        from_images(fig4, {"a": parse_word("a")})


def test_bad_inverse_rejected():
    g = discrete("xy")
    with pytest.raises(ValueError):
        RaagAutomorphism(g, {"x": parse_word("x y")}, {"x": parse_word("x y")})


def test_inner_and_outer():
    g = discrete("xy")
    u = parse_word("x y")
    assert is_inner_bounded(g, inner(g, u), 2).verify(identity(g), inner(g, u))
    assert is_inner_bounded(g, inversion(g, "x"), 3) is None
    a = inversion(g, "x")
    b = compose(inner(g, parse_word("y")), a)
    w = outer_equal_bounded(g, a, b, 2)
    assert w is not None and w.verify(a, b)


@given(st.data())
def test_composition_and_apply(data):
    g = data.draw(graphs(max_n=4))
    v = data.draw(st.sampled_from(g.vertices))
    a = inversion(g, v)
    w = data.draw(words(g))
    assert apply(compose(a, a), w) == normalize(g, w)
    assert abelianization(a)[v][v] == -1


def test_conjugators_are_normal_and_distinct():
    g = SimplicialGraph("ab", [("a", "b")])
    cs = list(conjugators(g, 2))
    assert len(cs) == len(set(cs))
    assert all(normalize(g, c) == c for c in cs)
    # Z^2 ball of radius 2 has 13 points
    assert len(cs) == 13
