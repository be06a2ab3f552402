"""U⁰-invariant subgraphs: the link/star criterion, the invariant lattice,
minimal invariants, chain lengths and restriction of generators."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from .graph_core import components, fold_classes
from .raag_algebra import (RaagAutomorphism, compose, conjugators, fold, identity, inversion,
                           normalize, partial_conjugation, word_inverse)

DEFAULT_BUDGET = 16


class InvariantSubgraphReport:
    def __init__(self, subgraph, violations):
        self.subgraph = frozenset(subgraph)
        self.violations = list(violations)

    @property
    def invariant(self):
        return not self.violations

    def __bool__(self):
        return self.invariant

    def __repr__(self):
        return f"InvariantSubgraphReport({sorted(self.subgraph)}, invariant={self.invariant})"

    def to_json(self):
        return {"subgraph": sorted(self.subgraph), "invariant": self.invariant,
                "violations": [{"condition": c, "x": x, "y": y} for c, x, y in self.violations]}


def is_u0_invariant(g, d):
    """Check both conditions for every pair of vertices and report all violations.

    (i)  x in Δ and lk(x) ⊆ lk(y) force y in Δ;
    (ii) Δ meeting two components of Γ∖st(y) forces y in Δ.
    """
    d = g.check_set(d)
    out = []
    for y in g.vertices:
        if y in d:
            continue
        for x in g.sort(d):
            if g.link(x) <= g.link(y):
                out.append(("i", x, y))
        hit = [c for c in components(g, frozenset(g.vertices) - g.star(y)) if c & d]
        if len(hit) > 1:
            # witness: a vertex of Δ in the second component met
            out.append(("ii", g.sort(hit[1] & d)[0], y))
    return InvariantSubgraphReport(d, out)


def _subset_order(g, s):
    return (len(s), sorted(g.index[v] for v in s))


@lru_cache(maxsize=256)
def _invariant_poset(g):
    found = []
    n = len(g)
    for k in range(n + 1):
        for c in combinations(g.vertices, k):
            if is_u0_invariant(g, c).invariant:
                found.append(frozenset(c))
    return tuple(found)


def u0_invariant_subgraphs(g, budget=DEFAULT_BUDGET):
    """All invariant vertex sets, by size then vertex order (∅ included)."""
    if len(g) > budget:
        raise ValueError(f"{len(g)} vertices exceed the enumeration budget {budget}; "
                         "test explicit subsets with is_u0_invariant instead")
    return list(_invariant_poset(g))


def minimal_invariant_subgraphs(g, budget=DEFAULT_BUDGET):
    inv = [s for s in u0_invariant_subgraphs(g, budget) if s]
    return [s for s in inv if not any(t < s for t in inv)]


def chain_length(g, d, budget=DEFAULT_BUDGET):
    """Largest l with ∅ = Γ0 ⊊ Γ1 ⊊ ... ⊊ Γl ⊊ Δ, all invariant in Γ (0 for ∅)."""
    d = g.check_set(d)
    if not is_u0_invariant(g, d).invariant:
        raise ValueError(f"{sorted(d)} is not U⁰-invariant")
    if not d:
        return 0
    inv = u0_invariant_subgraphs(g, budget)
    # longest chain of strictly increasing sets ending at each invariant subset
    depth = {}
    for s in inv:  # sorted by size, so proper subsets come first
        depth[s] = max((depth[t] + 1 for t in depth if t < s), default=0)
    return max(depth[t] for t in inv if t < d)


def neighborhood(g, d):
    d = g.check_set(d)
    return d | frozenset(v for v in g.vertices if g.link(v) & d)


def poset_dot(g, budget=DEFAULT_BUDGET):
    """Hasse diagram of the invariant lattice as a DOT digraph."""
    inv = u0_invariant_subgraphs(g, budget)
    name = lambda s: '"{' + ",".join(g.sort(s)) + '}"'
    lines = ["digraph {"]
    lines += [f"  {name(s)};" for s in inv]
    for s in inv:
        for t in inv:
            if s < t and not any(s < u < t for u in inv):
                lines.append(f"  {name(s)} -> {name(t)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---- restriction ----

def whitehead_factors(g, p, base):
    """Folds and partial conjugations whose product is the Whitehead automorphism (p, base).

    The factors all multiply by the base letter, so they commute.
    """
    x, e = base
    side = p.side_of(base)
    other = p.side2 if side is p.side1 else p.side1
    out = []
    conj = set()
    for y in g.vertices:
        if y == x:
            continue
        pos, neg = (y, 1) in side, (y, -1) in side
        if pos and neg:
            conj.add(y)
        elif pos and (y, -1) in other:
            # y -> y base^-1
            out.append(fold(g, y, x, right=True) if e == 1 else _fold_inverse(g, y, x, True))
        elif neg and (y, 1) in other:
            # y -> base y
            out.append(fold(g, y, x, right=False) if e == 1 else _fold_inverse(g, y, x, False))
    if conj:
        pc = partial_conjugation(g, x, conj)
        out.append(pc if e == 1 else _invert(pc))
    return out


def _invert(a):
    return RaagAutomorphism(a.graph, a.inverse_images, a.images, tag=("inverse", a.tag), check=False)


def _fold_inverse(g, y, x, right):
    return _invert(fold(g, y, x, right))


def _factor(a):
    tag = a.tag
    if tag is None:
        raise ValueError("restriction needs a tagged generator")
    kind = tag[0]
    if kind == "whitehead":
        return whitehead_factors(a.graph, tag[1], tag[2])
    if kind == "product":
        return [f for b in tag[1] for f in _factor(b)]
    return [a]


def _restrict_one(a, d, sub):
    kind = a.tag[0]
    if kind == "identity":
        return identity(sub)
    if kind == "inverse":
        inner_gen = RaagAutomorphism(a.graph, a.inverse_images, a.images, tag=a.tag[1], check=False)
        return _invert(_restrict_one(inner_gen, d, sub))
    if kind == "inversion":
        v = a.tag[1]
        return inversion(sub, v) if v in d else identity(sub)
    if kind == "fold":
        _, x, y, right = a.tag
        if x not in d:
            return identity(sub)
        return fold(sub, x, y, right)
    if kind == "partial_conjugation":
        _, x, c = a.tag
        if x not in d:
            return identity(sub)
        moved = c & d
        if not moved:
            return identity(sub)
        return partial_conjugation(sub, x, moved)
    if kind == "inner":
        return identity(sub)
    raise ValueError(f"cannot restrict generator of kind {kind!r}")


def restrict_generator(g, gen, d):
    """r_Δ of a tagged generator (or a tagged product of generators) as an automorphism of A_Δ."""
    d = g.check_set(d)
    if not is_u0_invariant(g, d).invariant:
        raise ValueError(f"{sorted(d)} is not U⁰-invariant")
    sub = g.induced(d)
    out = identity(sub)
    for f in _factor(gen):
        out = compose(out, _restrict_one(f, d, sub))
    return out


def product_of(*gens):
    """Tagged composite gens[0] ∘ gens[1] ∘ ... usable by restrict_generator."""
    g = gens[0].graph
    out = identity(g)
    for a in gens:
        out = compose(out, a)
    return RaagAutomorphism(g, out.images, out.inverse_images, tag=("product", tuple(gens)), check=False)


def restrict_by_search(g, a, d, radius):
    """Restriction found directly: u with u^-1 a(v) u in A_Δ for all v in Δ.

    Returns the automorphism of A_Δ, or None if no conjugator of length
    <= radius works. Independent of generator tags.
    """
    d = g.check_set(d)
    sub = g.induced(d)
    for u in conjugators(g, radius):
        ui = word_inverse(u)
        imgs = {}
        for v in sub.vertices:
            w = normalize(g, ui + a.images[v] + u)
            if any(s[0] not in d for s in w):
                break
            imgs[v] = w
        else:
            invs = {}
            for v in sub.vertices:
                w = normalize(g, a.inverse_images[v])
                # inverse of the restriction: conjugate back by a^-1(u)
                au = normalize(g, _apply_inverse(a, u))
                w = normalize(g, au + w + word_inverse(au))
                if any(s[0] not in d for s in w):
                    break
                invs[v] = w
            else:
                try:
                    return RaagAutomorphism(sub, imgs, invs)
                except ValueError:
                    continue
    return None


def _apply_inverse(a, w):
    out = []
    for v, e in w:
        img = a.inverse_images[v]
        out.extend(img if e == 1 else word_inverse(img))
    return tuple(out)


def fold_class_check(g):
    """Minimal invariant subgraphs compared with maximal fold classes (both sorted)."""
    key = lambda s: sorted(g.index[v] for v in s)
    return (sorted(minimal_invariant_subgraphs(g), key=key),
            sorted(fold_classes(g)[2], key=key))
