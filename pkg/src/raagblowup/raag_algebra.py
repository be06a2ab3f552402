"""Words, normal forms and automorphisms of right-angled Artin groups.

A word is a tuple of signed vertices. ``normalize`` returns the canonical
representative: a reduced word that is lexicographically least (letters
ordered by vertex order, then ``v`` before ``v^-1``) among all words obtained
from it by swapping adjacent commuting letters.
"""

from __future__ import annotations

from .graph_core import fmt_signed, inv, parse_signed


def parse_word(text):
    return tuple(parse_signed(t) for t in text.split())


def fmt_word(w):
    return " ".join(fmt_signed(s) for s in w)


def word_inverse(w):
    return tuple(inv(s) for s in reversed(w))


def _check_word(g, w):
    for s in w:
        g.check(s[0])
        if s[1] not in (1, -1):
            raise ValueError(f"bad sign in {s!r}")


def normalize(g, w):
    """Canonical normal form of ``w`` in A_Γ.

    >>> from .graph_core import SimplicialGraph
    >>> g = SimplicialGraph("ab", [("a", "b")])
    >>> fmt_word(normalize(g, parse_word("b a b^-1")))
    'a'
    """
    _check_word(g, w)
    rest = _reduce(g, w)
    out = []
    key = g.signed_key
    while rest:
        best = None
        for i, s in enumerate(rest):
            # s can move to the front iff every earlier letter commutes with it
            if all(g.adjacent(t[0], s[0]) for t in rest[:i]):
                if best is None or key(s) < key(rest[best]):
                    best = i
        out.append(rest.pop(best))
    return tuple(out)


def _reduce(g, w):
    out = []
    for s in w:
        j = len(out) - 1
        cancel = -1
        while j >= 0:
            t = out[j]
            if t[0] == s[0]:
                if t[1] == -s[1]:
                    cancel = j
                break
            if not g.adjacent(t[0], s[0]):
                break
            j -= 1
        if cancel >= 0:
            del out[cancel]
        else:
            out.append(s)
    return out


def equal(g, w1, w2):
    return normalize(g, w1) == normalize(g, w2)


def word_length(g, w):
    return len(normalize(g, w))


class RaagAutomorphism:
    """An automorphism of A_Γ given by generator images and a stored inverse.

    ``tag`` optionally records how the automorphism was built, e.g.
    ``("fold", x, y, "right")``; it is used by restriction to subgraphs.
    """

    def __init__(self, g, images, inverse_images, tag=None, check=True):
        self.graph = g
        self.images = {v: normalize(g, tuple(images.get(v, ((v, 1),)))) for v in g.vertices}
        self.inverse_images = {v: normalize(g, tuple(inverse_images.get(v, ((v, 1),)))) for v in g.vertices}
        self.tag = tag
        if check:
            self.validate()

    def validate(self):
        g = self.graph
        for v in g.vertices:
            if _subst(g, self.images, _subst(g, self.inverse_images, ((v, 1),))) != ((v, 1),):
                raise ValueError(f"stored inverse fails on generator {v}")
            if _subst(g, self.inverse_images, _subst(g, self.images, ((v, 1),))) != ((v, 1),):
                raise ValueError(f"stored inverse fails on generator {v}")
        for a, b in g.edges():
            for imgs in (self.images, self.inverse_images):
                x, y = imgs[a], imgs[b]
                if normalize(g, x + y) != normalize(g, y + x):
                    raise ValueError(f"images of adjacent {a},{b} do not commute")

    def __call__(self, w):
        return apply(self, w)

    def __eq__(self, other):
        return (isinstance(other, RaagAutomorphism) and self.graph == other.graph
                and self.images == other.images)

    def __hash__(self):
        return hash(tuple(sorted(self.images.items())))

    def __repr__(self):
        body = ", ".join(f"{v}->{fmt_word(self.images[v]) or '1'}" for v in self.graph.vertices)
        return f"RaagAutomorphism({body})"

    def is_identity(self):
        return all(self.images[v] == ((v, 1),) for v in self.graph.vertices)

    def to_json(self):
        return {v: fmt_word(self.images[v]) for v in self.graph.vertices}


def _subst(g, images, w):
    out = []
    for v, e in w:
        img = images[v]
        out.extend(img if e == 1 else word_inverse(img))
    return normalize(g, out)


def from_images(g, images, inverse_images=None, tag=None):
    """Build an automorphism; the inverse is required (or solved for small cases)."""
    images = {v: tuple(w) for v, w in images.items()}
    if inverse_images is None:
        raise ValueError("an inverse must be supplied for externally given automorphisms")
    return RaagAutomorphism(g, images, inverse_images, tag=tag)


def identity(g):
    return RaagAutomorphism(g, {}, {}, tag=("identity",), check=False)


def apply(a, w):
    return _subst(a.graph, a.images, tuple(w))


def compose(a, b):
    """a after b."""
    g = a.graph
    if b.graph != g:
        raise ValueError("automorphisms over different graphs")
    imgs = {v: _subst(g, a.images, b.images[v]) for v in g.vertices}
    invs = {v: _subst(g, b.inverse_images, a.inverse_images[v]) for v in g.vertices}
    return RaagAutomorphism(g, imgs, invs, check=False)


def inverse(a):
    return RaagAutomorphism(a.graph, a.inverse_images, a.images, check=False)


def inner(g, u):
    """w -> u w u^-1."""
    u = normalize(g, u)
    ui = word_inverse(u)
    imgs = {v: u + ((v, 1),) + ui for v in g.vertices}
    invs = {v: ui + ((v, 1),) + u for v in g.vertices}
    return RaagAutomorphism(g, imgs, invs, tag=("inner", u), check=False)


def inversion(g, v):
    g.check(v)
    return RaagAutomorphism(g, {v: ((v, -1),)}, {v: ((v, -1),)}, tag=("inversion", v))


def fold(g, x, y, right=True):
    """Fold moving ``x`` by ``y``: x -> x y^-1 (``right``) or x -> y x.

    Requires lk(x) ⊆ lk(y).
    """
    g.check(x), g.check(y)
    if x == y or not g.link(x) <= g.link(y):
        raise ValueError(f"fold needs lk({x}) ⊆ lk({y})")
    if right:
        img, back = ((x, 1), (y, -1)), ((x, 1), (y, 1))
    else:
        img, back = ((y, 1), (x, 1)), ((y, -1), (x, 1))
    return RaagAutomorphism(g, {x: img}, {x: back}, tag=("fold", x, y, right))


def partial_conjugation(g, x, c):
    """y -> x y x^-1 for y in ``c``, a union of components of Γ minus st(x)."""
    from .graph_core import components

    g.check(x)
    c = g.check_set(c)
    rest = frozenset(g.vertices) - g.star(x)
    if not c <= rest:
        raise ValueError(f"partial conjugation set meets st({x})")
    for comp in components(g, rest):
        if comp & c and not comp <= c:
            raise ValueError(f"set is not a union of components of Γ∖st({x})")
    xs, xi = (x, 1), (x, -1)
    imgs = {y: (xs, (y, 1), xi) for y in c}
    invs = {y: (xi, (y, 1), xs) for y in c}
    return RaagAutomorphism(g, imgs, invs, tag=("partial_conjugation", x, frozenset(c)))


def whitehead_images(p, base):
    """Generator images of the Whitehead automorphism for partition ``p`` and signed base."""
    side = p.side_of(base)
    other = p.side2 if side is p.side1 else p.side1
    b = base
    bi = inv(base)
    imgs, invs = {}, {}
    for y in p.graph.vertices:
        if y == base[0]:
            continue
        pos, neg = (y, 1) in side, (y, -1) in side
        ys = (y, 1)
        if pos and neg:
            imgs[y], invs[y] = (b, ys, bi), (bi, ys, b)
        elif pos and (y, -1) in other:
            imgs[y], invs[y] = (ys, bi), (ys, b)
        elif neg and ys in other:
            imgs[y], invs[y] = (b, ys), (bi, ys)
    return imgs, invs


def whitehead_automorphism(g, p, x):
    """The Whitehead automorphism of partition ``p`` with base letter ``x``.

    ``x`` may be a vertex name (meaning the positive letter) or a signed vertex.
    """
    if isinstance(x, str):
        x = (x, 1)
    if x[0] not in p.bases():
        raise ValueError(f"{x[0]} is not a base of the partition")
    imgs, invs = whitehead_images(p, x)
    return RaagAutomorphism(g, imgs, invs, tag=("whitehead", p, x))


def abelianization(a):
    """Integer matrix as dict: column v holds exponent sums of the image of v."""
    g = a.graph
    out = {}
    for v in g.vertices:
        col = {w: 0 for w in g.vertices}
        for w, e in a.images[v]:
            col[w] += e
        out[v] = col
    return out


def conjugators(g, radius):
    """Normal forms of length <= radius, by length then lexicographically."""
    letters = [(v, e) for v in g.vertices for e in (1, -1)]
    layer = [()]
    seen = {()}
    yield ()
    for _ in range(radius):
        nxt = set()
        for w in layer:
            for s in letters:
                u = normalize(g, w + (s,))
                if len(u) == len(w) + 1 and u not in seen:
                    nxt.add(u)
        layer = sorted(nxt, key=lambda u: [g.signed_key(s) for s in u])
        seen.update(layer)
        yield from layer


class OuterWitness:
    """Conjugator u with compose(inner(u), a) == b."""

    def __init__(self, conjugator):
        self.conjugator = tuple(conjugator)

    def __repr__(self):
        return f"OuterWitness({fmt_word(self.conjugator)!r})"

    def verify(self, a, b):
        return compose(inner(a.graph, self.conjugator), a).images == b.images


def is_inner_bounded(g, a, radius):
    """Search for u of length <= radius with a(v) = u v u^-1 for all v."""
    ab = abelianization(a)
    for v in g.vertices:
        for w in g.vertices:
            if ab[v][w] != (1 if v == w else 0):
                return None
    gens = g.vertices
    for u in conjugators(g, radius):
        ui = word_inverse(u)
        if all(normalize(g, u + ((v, 1),) + ui) == a.images[v] for v in gens):
            return OuterWitness(u)
    return None


def outer_equal_bounded(g, a, b, radius):
    """Witness u with inner(u)∘a == b, searched up to ``radius``."""
    return is_inner_bounded(g, compose(b, inverse(a)), radius)


def default_radius(*autos):
    m = 0
    for a in autos:
        for w in a.images.values():
            m = max(m, len(w))
    return 2 * m
