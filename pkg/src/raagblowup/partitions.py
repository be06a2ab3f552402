"""Γ-Whitehead partitions, compatibility, singletons and restriction."""

from __future__ import annotations

from itertools import product

from .graph_core import components_double, double, fmt_signed, inv, parse_signed


class WhiteheadPartition:
    """A triple (link | side1 | side2) of sets of signed vertices.

    Equality ignores the order of the two sides. The stored order matters
    only for bookkeeping (region choices in a blowup refer to it).
    Instances built by restriction or as singletons need not be genuine
    Γ-partitions; use :meth:`problems` to check.
    """

    __slots__ = ("graph", "link", "side1", "side2", "_key", "_split", "_bases")

    def __init__(self, graph, link, side1, side2):
        self.graph = graph
        self.link = frozenset(link)
        self.side1 = frozenset(side1)
        self.side2 = frozenset(side2)
        self._key = (self.link, frozenset((self.side1, self.side2)))
        self._split = None
        self._bases = None

    def __eq__(self, other):
        return isinstance(other, WhiteheadPartition) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        f = lambda s: ",".join(fmt_signed(x) for x in self.graph.sort_signed(s))
        return f"({f(self.side1)}|{f(self.side2)}; lk={f(self.link)})"

    @property
    def sides(self):
        return (self.side1, self.side2)

    def link_vertices(self):
        return frozenset(v for v, _ in self.link)

    def side_of(self, s):
        if s in self.side1:
            return self.side1
        if s in self.side2:
            return self.side2
        raise ValueError(f"{fmt_signed(s)} lies in the link")

    def side_index(self, s):
        if s in self.side1:
            return 0
        if s in self.side2:
            return 1
        return None

    def split(self):
        if self._split is None:
            self._split = frozenset(v for v in self.graph.vertices
                                    if (v, 1) in self.side1 and (v, -1) in self.side2
                                    or (v, 1) in self.side2 and (v, -1) in self.side1)
        return self._split

    def bases(self):
        if self._bases is None:
            lk = self.link_vertices()
            self._bases = frozenset(v for v in self.split() if self.graph.link(v) == lk)
        return self._bases

    def is_trivial(self):
        """A side holds nothing beyond a single base letter."""
        return len(self.side1) <= 1 or len(self.side2) <= 1

    def swapped(self):
        return WhiteheadPartition(self.graph, self.link, self.side2, self.side1)

    def canonical(self):
        """Same partition with side1 holding the least split vertex positively."""
        g = self.graph
        sp = g.sort(self.split())
        if sp and (sp[0], 1) in self.side2:
            return self.swapped()
        if not sp and self.side1 and self.side2:
            a = min(self.side1, key=g.signed_key)
            b = min(self.side2, key=g.signed_key)
            if g.signed_key(b) < g.signed_key(a):
                return self.swapped()
        return self

    def sort_key(self):
        c = self.canonical()
        g = self.graph
        return (sorted(map(g.signed_key, c.link)), sorted(map(g.signed_key, c.side1)),
                sorted(map(g.signed_key, c.side2)))

    def problems(self):
        """Reasons this is not a valid Γ-Whitehead partition (empty if valid)."""
        g = self.graph
        out = []
        allv = g.signed()
        if self.link & self.side1 or self.link & self.side2 or self.side1 & self.side2:
            out.append("parts overlap")
        if self.link | self.side1 | self.side2 != allv:
            out.append("parts do not cover V±")
        if any(inv(s) not in self.link for s in self.link):
            out.append("link not closed under inversion")
        bases = self.bases()
        if not bases:
            out.append("no base")
            return out
        x = g.sort(bases)[0]
        if self.link != g.signed(g.link(x)):
            out.append("link is not lk±(base)")
        for side in self.sides:
            if len(side) < 2:
                out.append("a side has no element besides its base")
        for comp in components_double(double(g), self.link):
            if comp & self.side1 and comp & self.side2:
                out.append("a side is not a union of components")
                break
        for y in self.split():
            if not g.link(y) <= g.link(x):
                out.append(f"split vertex {y} has lk({y}) ⊄ lk({x})")
        return out

    def is_valid(self):
        return not self.problems()

    def to_json(self):
        g = self.graph
        f = lambda s: [fmt_signed(x) for x in g.sort_signed(s)]
        return {"link": f(self.link), "side1": f(self.side1), "side2": f(self.side2)}


def partition(g, link, side1, side2):
    """Convenience constructor from token strings, e.g. ``partition(g, "", "x y", "x^-1 y^-1")``."""
    toks = lambda s: [parse_signed(t) for t in s.split()] if isinstance(s, str) else list(s)
    return WhiteheadPartition(g, toks(link), toks(side1), toks(side2))


def partition_from_json(g, obj):
    try:
        parts = [frozenset(parse_signed(t) for t in obj[k]) for k in ("link", "side1", "side2")]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"bad partition JSON: {exc}") from None
    for part in parts:
        for v, _ in part:
            g.check(v)
    return WhiteheadPartition(g, *parts)


def partitions_based_at(g, x):
    """All Γ-partitions having ``x`` as a base, canonical and sorted."""
    g.check(x)
    link = g.signed(g.link(x))
    comps = components_double(double(g), link)
    free = [c for c in comps if c != {(x, 1)} and c != {(x, -1)}]
    found = set()
    for bits in product((0, 1), repeat=len(free)):
        s1, s2 = {(x, 1)}, {(x, -1)}
        for b, c in zip(bits, free):
            (s1 if b == 0 else s2).update(c)
        if len(s1) < 2 or len(s2) < 2:
            continue
        p = WhiteheadPartition(g, link, s1, s2)
        for y in p.split():
            assert g.link(y) <= g.link(x)
        found.add(p.canonical())
    return sorted(found, key=WhiteheadPartition.sort_key)


def all_partitions(g):
    found = set()
    for v in g.vertices:
        found.update(partitions_based_at(g, v))
    return sorted(found, key=WhiteheadPartition.sort_key)


def adjacent(p, q):
    g = p.graph
    return any(g.adjacent(a, b) for a in p.bases() for b in q.bases())


def compatible(p, q):
    if adjacent(p, q):
        return True
    return any(not (s & t) for s in p.sides for t in q.sides)


def singleton_partition(g, v, degenerate_ok=False):
    """(lk±(v) | {v^-1} | (V∖lk(v))± ∖ {v^-1}).

    When v is adjacent to everything the big side is just {v}; that entry
    still describes a subdivision of the v-carrier, but it is refused unless
    ``degenerate_ok`` is set.
    """
    g.check(v)
    link = g.signed(g.link(v))
    big = g.signed(frozenset(g.vertices) - g.link(v)) - {(v, -1)}
    if len(big) < 2 and not degenerate_ok:
        raise ValueError(f"{v} is central: no room for a singleton partition")
    return WhiteheadPartition(g, link, {(v, -1)}, big)


def is_singleton(p):
    return len(p.side1) == 1 or len(p.side2) == 1


def restrict(p, d):
    """Intersect every part of ``p`` with Δ±; the result lives over the induced graph."""
    g = p.graph
    d = g.check_set(d)
    if not p.bases() <= d:
        raise ValueError("partition has bases outside the subgraph")
    sub = g.induced(d)
    ds = g.signed(d)
    return WhiteheadPartition(sub, p.link & ds, p.side1 & ds, p.side2 & ds)


def check_multiset(pi):
    """Raise on the first incompatible pair of a partition multiset."""
    for i in range(len(pi)):
        for j in range(i + 1, len(pi)):
            if not compatible(pi[i], pi[j]):
                raise ValueError(f"entries {i} and {j} are incompatible: {pi[i]!r} vs {pi[j]!r}")


def compatibility_graph(parts):
    n = len(parts)
    return {i: frozenset(j for j in range(n) if j != i and compatible(parts[i], parts[j])) for i in range(n)}


def enumerate_compatible_collections(g, max_size=None, parts=None):
    """All cliques of size <= max_size in the compatibility graph, including the empty one."""
    parts = all_partitions(g) if parts is None else parts
    if max_size is None:
        max_size = len(parts)
    nbrs = compatibility_graph(parts)
    out = []

    def grow(clique, cand):
        out.append([parts[i] for i in clique])
        if len(clique) == max_size:
            return
        for j in sorted(cand):
            grow(clique + [j], frozenset(k for k in cand if k > j) & nbrs[j])

    grow([], frozenset(range(len(parts))))
    return out


# ---- symmetry ----

def signed_automorphism_generators(g, permutations=True):
    """Generators of Aut(Γ) extended by inversions, as (perm dict, sign dict) pairs.

    With ``permutations=False`` only the inversions are returned.
    """
    from networkx.algorithms.isomorphism import GraphMatcher

    h = g.to_networkx()
    ident = tuple(g.vertices)
    group = {ident}
    gens = []
    for m in GraphMatcher(h, h).isomorphisms_iter() if permutations else ():
        img = tuple(m[v] for v in g.vertices)
        if img in group:
            continue
        gens.append((dict(m), {}))
        # close the permutation group under the new generator
        frontier = list(group)
        while frontier:
            nxt = []
            for p in frontier:
                pd = dict(zip(g.vertices, p))
                for q, _ in gens:
                    r = tuple(q[pd[v]] for v in g.vertices)
                    if r not in group:
                        group.add(r)
                        nxt.append(r)
            frontier = nxt
    ident_map = {v: v for v in g.vertices}
    gens += [(ident_map, {v: -1}) for v in g.vertices]
    return gens


def apply_signed(p, perm, signs):
    f = lambda s: (perm[s[0]], s[1] * signs.get(s[0], 1))
    return WhiteheadPartition(p.graph, map(f, p.link), map(f, p.side1), map(f, p.side2))


def collection_orbit_representatives(g, collections, parts=None, permutations=True):
    """One collection per orbit of signed graph automorphisms, with orbit sizes."""
    parts = all_partitions(g) if parts is None else parts
    index = {p: i for i, p in enumerate(parts)}
    perms = [[index[apply_signed(p, pm, sg)] for p in parts]
             for pm, sg in signed_automorphism_generators(g, permutations)]
    seen = set()
    reps = []
    for c in collections:
        key = tuple(sorted(index[p] for p in c))
        if key in seen:
            continue
        seen.add(key)
        frontier = [key]
        size = 1
        while frontier:
            nxt = []
            for k in frontier:
                for pm in perms:
                    img = tuple(sorted(pm[i] for i in k))
                    if img not in seen:
                        seen.add(img)
                        nxt.append(img)
            size += len(nxt)
            frontier = nxt
        reps.append((c, size))
    return reps
