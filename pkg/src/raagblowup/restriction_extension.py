"""Invariant subcomplexes of blowups, extendability of Δ-partitions,
reduced group actions and collapse of separating hyperplanes."""

from __future__ import annotations

from itertools import product

from .cube_blowup import (build_blowup, isomorphism, natural_structure,
                          recover_partitions, treelike_cut, treelike_sets)
from .cubes import CubicalMap, compose_maps, identity_map
from .graph_core import components
from .invariance import is_u0_invariant
from .partitions import WhiteheadPartition, restrict


def _check_delta(g, d):
    d = g.check_set(d)
    rep = is_u0_invariant(g, d)
    if not rep.invariant:
        raise ValueError(f"{sorted(d)} is not U⁰-invariant: {rep.violations[0]}")
    if g.link_of_set(d):
        raise ValueError(f"lk({sorted(d)}) = {sorted(g.link_of_set(d))} is not empty")
    return d


class DeltaSide:
    def __init__(self, partition, index):
        self.partition = partition
        self.index = index

    @property
    def side(self):
        return self.partition.sides[self.index]

    def __repr__(self):
        return f"DeltaSide(side{self.index + 1} of {self.partition!r})"


def delta_side(p, d):
    """The unique side containing Δ± up to the link and meeting Δ±."""
    g = p.graph
    d = _check_delta(g, d)
    if p.bases() & d:
        raise ValueError("partition is based inside Δ")
    ds = g.signed(d)
    hits = [i for i, s in enumerate(p.sides) if ds <= s | p.link and ds & s]
    if len(hits) != 1:
        raise ValueError(f"{len(hits)} sides qualify as the Δ-side")
    return DeltaSide(p, hits[0])


def _based_inside(p, d):
    b = p.bases()
    if b <= d:
        return True
    if not b & d:
        return False
    raise ValueError(f"{p!r} has bases on both sides of Δ")


class InvariantSubcomplex:
    """K_Δ as a subcomplex of a blowup with its restricted multiset and the check."""

    def __init__(self, ambient, complex, vertices, edges, omega, inside, iso):
        self.ambient = ambient
        self.complex = complex
        self.vertices = vertices
        self.edges = edges
        self.omega = omega
        self.inside = inside
        self.isomorphism = iso

    def to_json(self):
        out = self.complex.to_json()
        out["ambient_vertices"] = list(self.vertices)
        out["ambient_edges"] = list(self.edges)
        out["omega"] = [q.to_json() for q in self.omega]
        return out


def invariant_subcomplex(x, d, check=True):
    """K_Δ inside the blowup ``x`` (read with its own partitions).

    With ``check`` the isomorphism with the blowup of Δ along Ω is
    constructed and verified.
    """
    g = x.graph
    d = _check_delta(g, d)
    inside = [i for i, p in enumerate(x.pi) if _based_inside(p, d)]
    fixed = {i: delta_side(p, d).index for i, p in enumerate(x.pi) if i not in inside}
    verts = [r for r, reg in enumerate(x.regions) if all(reg[i] == c for i, c in fixed.items())]

    def ok(e):
        lab = x.edge_labels[e]
        return lab[1] in inside if lab[0] == "P" else lab[1] in d

    sub, vs, es = x.subcomplex(verts, ok)
    sd = g.induced(d)
    omega = [restrict(x.pi[i], d) for i in inside]
    omega = [WhiteheadPartition(sd, q.link, q.side1, q.side2) for q in omega]
    # carry ambient labels onto K_Δ, renumbering inside entries to match omega
    pos = {i: k for k, i in enumerate(inside)}
    labels = [("P", pos[l[1]]) if l[0] == "P" else l for l in (x.edge_labels[e] for e in es)]
    sub = sub.relabeled(labels)
    if not check:
        return InvariantSubcomplex(x, sub, vs, es, omega, inside, None)
    model = build_blowup(sd, omega, check=False)
    iso = isomorphism(sub, model, labeled=True)
    if iso is None:
        raise ValueError("K_Δ is not isomorphic to the blowup of Δ along Ω")
    return InvariantSubcomplex(x, sub, vs, es, omega, inside, iso)


def invariant_subcomplex_via(x, structure, d, g=None):
    """Vertex and edge sets of K_Δ computed from an arbitrary blowup structure."""
    g = x.graph if g is None else g
    d = _check_delta(g, d)
    t = structure.treelike
    pis = recover_partitions(x, structure, g)
    keep = None
    inside = set()
    for H, p in zip(sorted(t), pis):
        if _based_inside(p, d):
            inside.add(H)
            continue
        comp, a, b = treelike_cut(x, t, H)
        want = (a, b)[delta_side(p, d).index]
        here = {v for v in range(x.n_vertices) if comp[v] == want}
        keep = here if keep is None else keep & here
    keep = set(range(x.n_vertices)) if keep is None else keep
    eh = x.edge_hyperplane
    edges = set()
    for e, (u, w) in enumerate(x.edges):
        if u not in keep or w not in keep:
            continue
        h = eh[e]
        if h in inside or (h not in t and structure.labeling[h][0] in d):
            edges.add(e)
    return frozenset(keep), frozenset(edges)


def u0_compatible(x, structure, base_structure=None, g=None):
    """Whether the marking change between two structures is untwisted of U⁰ type.

    Reads each based v-loop of ``structure`` with ``base_structure`` and
    checks that its exponent sums only involve letters u with lk(v) ⊆ lk(u).
    """
    from .cube_blowup import based_loop, read_word

    g = x.graph if g is None else g
    base_structure = natural_structure(x) if base_structure is None else base_structure
    for v in g.vertices:
        w = read_word(x, based_loop(x, v, structure).steps, base_structure)
        ab = {}
        for u, e in w:
            ab[u] = ab.get(u, 0) + e
        for u, n in ab.items():
            if n and not g.link(v) <= g.link(u):
                return False
    return True


# ---- extendability ----

class ExtendabilityReport:
    def __init__(self, extendable, base=None, violations=()):
        self.extendable = extendable
        self.base = base
        self.violations = list(violations)

    def __bool__(self):
        return self.extendable

    def __repr__(self):
        return f"ExtendabilityReport({self.extendable}, base={self.base}, violations={self.violations})"

    def to_json(self):
        return {"extendable": self.extendable, "base": self.base,
                "violations": [list(v) for v in self.violations]}


def _conditions(g, d, q, m):
    """Violations of the two extendability conditions for base m."""
    out = []
    for v in q.graph.sort(q.split()):
        if not g.link(v) <= g.link(m):
            out.append(("1", m, v))
    comps = components(g, frozenset(g.vertices) - g.star(m))
    for c in comps:
        vs = g.sort(c & d)
        for i, v1 in enumerate(vs):
            for v2 in vs[i + 1:]:
                sides = {q.side_index((v, e)) for v in (v1, v2) for e in (1, -1)}
                if len(sides) != 1:
                    out.append(("2", m, v1, v2))
    return out


def verify_violation(g, d, q, w):
    """Independent re-check of a violation witness."""
    if w[0] == "1":
        _, m, v = w
        split = q.side_index((v, 1)) != q.side_index((v, -1)) and q.side_index((v, 1)) is not None
        return m in q.bases() and split and not g.link(v) <= g.link(m)
    _, m, v1, v2 = w
    rest = frozenset(g.vertices) - g.star(m)
    same = any(v1 in c and v2 in c for c in components(g, rest))
    sides = {q.side_index((v, e)) for v in (v1, v2) for e in (1, -1)}
    return m in q.bases() and v1 != v2 and same and len(sides) > 1


def is_extendable_partition(g, d, q):
    d = g.check_set(d)
    if not is_u0_invariant(g, d).invariant:
        raise ValueError(f"{sorted(d)} is not U⁰-invariant")
    if q.problems():
        raise ValueError(f"not a valid Δ-partition: {q.problems()}")
    viol = []
    for m in q.graph.sort(q.bases()):
        bad = _conditions(g, d, q, m)
        if not bad:
            return ExtendabilityReport(True, m)
        viol += bad
    return ExtendabilityReport(False, None, viol)


def extend_partition(g, d, q, policy="side2"):
    """A Γ-partition restricting to q; ``policy`` places components missing Δ.

    ``policy`` is "side1", "side2" or "all" (returns every placement).
    """
    rep = is_extendable_partition(g, d, q)
    if not rep:
        raise ValueError(f"not extendable: {rep.violations}")
    d = g.check_set(d)
    m = rep.base
    link = g.signed(g.link(m))
    s1, s2 = set(q.side1), set(q.side2)
    free = []
    for c in components(g, frozenset(g.vertices) - g.star(m)):
        meet = c & d
        if not meet:
            free.append(c)
            continue
        w = g.sort(meet)[0]
        target = s1 if (w, 1) in q.side1 else s2
        target |= g.signed(c - d)
    outs = []
    choices = [(0,) * len(free)] if policy == "side1" else [(1,) * len(free)] if policy == "side2" \
        else list(product((0, 1), repeat=len(free)))
    for ch in choices:
        a, b = set(s1), set(s2)
        for c, k in zip(free, ch):
            (a if k == 0 else b).update(g.signed(c))
        p = WhiteheadPartition(g, link, a, b)
        if p.problems() or restrict(p, d)._key != q._key:
            raise AssertionError(f"extension failed for {q!r}: {p.problems()}")
        outs.append(p)
    return outs if policy == "all" else outs[0]


def extendable_by_search(g, d, q, parts=None):
    """Brute-force oracle: some Γ-partition based in Δ restricts to q."""
    from .partitions import all_partitions

    d = g.check_set(d)
    for p in all_partitions(g) if parts is None else parts:
        if p.bases() <= d and restrict(p, d)._key == q._key:
            return True
    return False


# ---- actions ----

def group_closure(generators, x):
    ident = identity_map(x)
    seen = {ident: None}
    order = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for f in frontier:
            for gen in generators:
                h = compose_maps(gen, f)
                if h not in seen:
                    seen[h] = None
                    order.append(h)
                    nxt.append(h)
        frontier = nxt
    return order


class ActionOnComplex:
    """A finite group acting on a Γ-complex through named cubical automorphisms."""

    def __init__(self, complex, generators, graph=None):
        self.complex = complex
        self.graph = complex.graph if graph is None else graph
        self.generators = list(generators)
        for name, f in self.generators:
            if f.source is not complex or f.problems():
                raise ValueError(f"generator {name} is not an automorphism of the complex")
        self.closure = group_closure([f for _, f in self.generators], complex)

    def __repr__(self):
        return f"ActionOnComplex(|G|={len(self.closure)}, {self.complex!r})"

    def hyperplane_orbits(self):
        x = self.complex
        maps = [f.hyperplane_map() for f in self.closure]
        seen = set()
        out = []
        for h in range(len(x.hyperplanes)):
            if h in seen:
                continue
            orb = frozenset(m[h] for m in maps)
            seen |= orb
            out.append(orb)
        return out


def is_reduced_action(a):
    """(reduced?, witness orbit or None, witness treelike set or None)."""
    ts = treelike_sets(a.complex, a.graph)
    for orb in a.hyperplane_orbits():
        for t in ts:
            if orb <= t:
                return False, orb, t
    return True, None, None


def _push_map(f, y, vmap, emap):
    """The map induced on the collapse y by an automorphism f preserving the collapsed set."""
    nv = [None] * y.n_vertices
    for v in range(len(vmap)):
        nv[vmap[v]] = vmap[f.vmap[v]]
    ne = [None] * len(y.edges)
    for e, img in enumerate(emap):
        if img is None:
            continue
        e2, s = img
        fe, fs = f.emap[e]
        fe2, s2 = emap[fe]
        ne[e2] = (fe2, s * fs * s2)
    return CubicalMap(y, y, nv, ne)


def collapse_action(a, hyps):
    x = a.complex
    y, vmap, emap = x.collapse(hyps)
    y.graph = a.graph
    gens = [(name, _push_map(f, y, vmap, emap)) for name, f in a.generators]
    return ActionOnComplex(y, gens, a.graph), (vmap, emap)


def reduce_action(a, trace=None):
    """Collapse the least collapsible orbit until the action is reduced."""
    while True:
        ok, orb, _ = is_reduced_action(a)
        if ok:
            return a
        a, maps = collapse_action(a, orb)
        if trace is not None:
            trace.append((orb, maps))


def separating_hyperplanes(x):
    return x.separating_hyperplanes()


def collapse_separating(x):
    """Collapse every separating hyperplane (repeating until none remain)."""
    while True:
        sep = x.separating_hyperplanes()
        if not sep:
            return x
        g = getattr(x, "graph", None)
        x = x.collapse(sep)[0]
        if g is not None:
            x.graph = g

