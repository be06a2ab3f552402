"""Blowups for joins (products) and disjoint unions (Γ-amalgams)."""

from __future__ import annotations

from itertools import permutations

from .cube_blowup import (build_blowup, labelings, multiset_is_legal, recover_partitions,
                          salvetti_bijections)
from .cubes import CubeComplex, disjoint_union, product
from .graph_core import components
from .partitions import WhiteheadPartition, singleton_partition


# ---- joins ----

class JoinDecomposition:
    def __init__(self, g, part1, part2):
        p1, p2 = g.check_set(part1), g.check_set(part2)
        if p1 & p2 or p1 | p2 != frozenset(g.vertices) or not p1 or not p2:
            raise ValueError("the two parts must partition the vertex set")
        for a in p1:
            for b in p2:
                if not g.adjacent(a, b):
                    raise ValueError(f"{a} and {b} are not adjacent, so this is not a join")
        self.graph = g
        self.parts = (p1, p2)
        self.graphs = (g.induced(p1), g.induced(p2))


def lift_partition(p, g, other):
    """A partition of a join factor seen in the whole join: the other factor joins the link."""
    return WhiteheadPartition(g, p.link | g.signed(other), p.side1, p.side2)


def product_blowup(x1, x2, j):
    if x1.graph != j.graphs[0] or x2.graph != j.graphs[1]:
        raise ValueError("factor complexes do not match the join decomposition")
    g = j.graph
    pi = [lift_partition(p, g, j.parts[1]) for p in x1.pi] + [lift_partition(p, g, j.parts[0]) for p in x2.pi]
    x = build_blowup(g, pi)
    k1 = len(x1.pi)
    expect = {r1 + r2 for r1 in x1.regions for r2 in x2.regions}
    if set(x.regions) != expect:
        raise AssertionError("product regions are not pairs of factor regions")
    if x.isomorphism(product(x1, x2)) is None:
        raise AssertionError("blowup of the join is not the product of the factors")
    x.factor_split = k1
    return x


def join_decompositions(g):
    """All unordered splittings of g as a join of two nonempty parts."""
    out = []
    vs = g.vertices
    n = len(vs)
    for mask in range(1, 2 ** (n - 1)):
        p1 = frozenset(vs[i] for i in range(n) if mask >> i & 1)
        p2 = frozenset(vs) - p1
        if all(g.adjacent(a, b) for a in p1 for b in p2):
            out.append(JoinDecomposition(g, p1, p2))
    return out


# ---- amalgams ----

class AmalgamSpec:
    """Γ = Γ1 ⊔ ... ⊔ Γk ⊔ Λ with a skeleton multigraph Z on ``z_vertices`` vertices.

    ``z_edges`` are pairs of Z-vertices (loops and repeats allowed);
    ``labels[i]`` is the Z-vertex carrying component i. ``attach`` maps
    (edge index, end 0 or 1) to a point of the component complex at that
    end: ``("vertex", r)`` or ``("cube", r, labels)``, the centre of the
    cube at vertex r spanned by the outgoing edges with the given labels.
    Unlisted ends attach at vertex 0.
    """

    def __init__(self, g, parts, z_vertices, z_edges, labels, attach=None):
        self.graph = g
        self.parts = [g.check_set(p) for p in parts]
        used = frozenset().union(*self.parts) if self.parts else frozenset()
        self.lam = frozenset(g.vertices) - used
        self.z_vertices = z_vertices
        self.z_edges = [tuple(e) for e in z_edges]
        self.labels = list(labels)
        self.attach = dict(attach or {})

    def problems(self):
        g = self.graph
        out = []
        seen = set()
        for p in self.parts:
            if p & seen:
                out.append("parts overlap")
            seen |= p
            if any(g.link(v) - p for v in p):
                out.append("a part is not a union of components")
        for v in self.lam:
            if g.link(v):
                out.append(f"{v} is in Λ but not isolated")
        rank = len(self.z_edges) - self.z_vertices + 1
        if rank != len(self.lam):
            out.append(f"rank of Z is {rank}, but |Λ| = {len(self.lam)}")
        if len(self.labels) != len(self.parts) or len(set(self.labels)) != len(self.labels):
            out.append("need one distinct labeled Z-vertex per part")
        val = [0] * self.z_vertices
        for a, b in self.z_edges:
            val[a] += 1
            val[b] += 1
        for v in range(self.z_vertices):
            if v not in self.labels and val[v] < 3:
                out.append(f"unlabeled Z-vertex {v} has valence {val[v]}")
        if not _z_connected(self.z_vertices, self.z_edges):
            out.append("Z is not connected")
            return out
        # an interior end must sit on a cycle of Z, and the two ends of one
        # edge may not share an interior point, or a singleton survives
        for (i, end), pt in sorted(self.attach.items()):
            if pt[0] != "cube":
                continue
            rest = self.z_edges[:i] + self.z_edges[i + 1:]
            if not _z_connected(self.z_vertices, rest):
                out.append(f"edge {i} is separating in Z but has an interior end")
            if end == 0 and self.attach.get((i, 1)) == pt and self.z_edges[i][0] == self.z_edges[i][1]:
                out.append(f"both ends of edge {i} attach at the same interior point")
        return out

    def to_json(self):
        return {"parts": [sorted(p) for p in self.parts], "z_vertices": self.z_vertices,
                "z_edges": [list(e) for e in self.z_edges], "labels": self.labels,
                "attach": [[k[0], k[1], list(v[:2]) + ([sorted(v[2])] if len(v) > 2 else [])]
                           for k, v in sorted(self.attach.items())]}


def _z_connected(n, edges):
    if n == 0:
        return False
    adj = {v: set() for v in range(n)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def _subdivide(x, points):
    """Duplicate hyperplanes so every requested cube centre becomes a vertex.

    Returns the new blowup and the new vertex index of each point.
    """
    pi = list(x.pi)
    mods = {}  # (kind, key) -> index of the added entry
    for pt in points:
        if pt[0] != "cube":
            continue
        for lab in pt[2]:
            if lab in mods:
                continue
            mods[lab] = len(pi)
            if lab[0] == "P":
                pi.append(pi[lab[1]])
            else:
                pi.append(singleton_partition(x.graph, lab[1], degenerate_ok=True))
    y = build_blowup(x.graph, pi, check=False)
    k = len(x.pi)

    def extend(reg, centre=()):
        out = list(reg) + [None] * (len(pi) - k)
        for lab, idx in mods.items():
            if lab[0] == "P":
                i = lab[1]
                p = pi[i]
                s1 = p.sides.index(p.canonical().side1)
                if lab in centre:
                    out[i], out[idx] = 1 - s1, s1
                else:
                    out[idx] = out[i]
            else:
                out[idx] = 0 if lab in centre else 1
        return tuple(out)

    where = []
    for pt in points:
        if pt[0] == "vertex":
            where.append(y.region_index[extend(x.regions[pt[1]])])
            continue
        r, labs = pt[1], tuple(pt[2])
        reg = x.regions[r]
        for lab in labs:
            if lab[0] == "P" and reg[lab[1]] != 0:
                raise ValueError(f"no {lab} edge leaves vertex {r}")
        new = extend(reg, labs)
        if new not in y.region_index:
            raise ValueError(f"cube centre {pt} is not a vertex after subdivision")
        where.append(y.region_index[new])
    return y, where


class AmalgamResult:
    def __init__(self, complex, assembled, structure, pi, iso):
        self.complex = complex
        self.assembled = assembled
        self.structure = structure
        self.pi = pi
        self.isomorphism = iso


def gamma_amalgam(spec, parts):
    """Assemble, subdivide, collapse separating hyperplanes and validate."""
    bad = spec.problems()
    if bad:
        raise ValueError("; ".join(bad))
    g = spec.graph
    if len(parts) != len(spec.parts):
        raise ValueError("one complex per part is required")
    for x, p in zip(parts, spec.parts):
        if x.graph != g.induced(p):
            raise ValueError("component complex over the wrong graph")
    # subdivide each part at its attachment points
    pts = {i: [] for i in range(len(parts))}
    for key in spec.attach:
        if spec.z_edges[key[0]][key[1]] not in spec.labels:
            raise ValueError(f"edge {key[0]} end {key[1]} is at an unlabeled Z-vertex")
    for ei, ends in enumerate(spec.z_edges):
        for end, zv in enumerate(ends):
            if zv in spec.labels:
                pt = spec.attach.get((ei, end), ("vertex", 0))
                pts[spec.labels.index(zv)].append(((ei, end), pt))
    subdiv = []
    at = {}
    for i, x in enumerate(parts):
        y, where = _subdivide(x, [pt for _, pt in pts[i]])
        subdiv.append(y)
        for (key, _), w in zip(pts[i], where):
            at[key] = w
    # disjoint union: parts first, then one point per unlabeled Z-vertex
    relabeled = []
    for i, y in enumerate(subdiv):
        labs = [("P", (i, l[1])) if l[0] == "P" else l for l in y.edge_labels]
        relabeled.append(y.relabeled(labs))
    unl = [v for v in range(spec.z_vertices) if v not in spec.labels]
    points = [CubeComplex(1, [], []) for _ in unl]
    base, offs = disjoint_union(relabeled + points)
    home = {}
    for i, zv in enumerate(spec.labels):
        home[zv] = offs[i][0]
    for j, zv in enumerate(unl):
        home[zv] = offs[len(relabeled) + j][0]
    new_edges, new_labels = [], []
    for ei, (a, b) in enumerate(spec.z_edges):
        ends = []
        for end, zv in ((0, a), (1, b)):
            if zv in spec.labels:
                ends.append(home[zv] + at[(ei, end)])
            else:
                ends.append(home[zv])
        new_edges.append(tuple(ends))
        new_labels.append(("Z", ei))
    y = CubeComplex(base.n_vertices, list(base.edges) + new_edges, base.squares,
                    list(base.edge_labels) + new_labels)
    # collapse separating hyperplanes (only Z-edges can separate)
    while True:
        sep = y.separating_hyperplanes()
        if not sep:
            break
        y = y.collapse(sep)[0]
    y.graph = g
    return _validate(y, g)


def _validate(y, g):
    eh = y.edge_hyperplane
    treelike = {eh[e] for e, l in enumerate(y.edge_labels) if l[0] == "P"}
    # a maximal tree of the surviving Z-edges once the parts are shrunk to points
    zedges = [e for e, l in enumerate(y.edge_labels) if l[0] == "Z"]
    shrink = y.components(lambda e: y.edge_labels[e][0] != "Z")[0]
    parent = {c: c for c in set(shrink)}

    def find(c):
        while parent[c] != c:
            c = parent[c]
        return c

    for e in zedges:
        a, b = find(shrink[y.edges[e][0]]), find(shrink[y.edges[e][1]])
        if a != b:
            parent[max(a, b)] = min(a, b)
            treelike.add(eh[e])
    c, _, emap = y.collapse(treelike)
    if not salvetti_bijections(c, g, first_only=True):
        raise ValueError("collapsing partitions and a maximal tree of Z does not give the Salvetti complex")
    for st in labelings(y, treelike, g, signed=False):
        try:
            pis = recover_partitions(y, st, g)
        except ValueError:
            continue
        if not multiset_is_legal(pis):
            continue
        x = build_blowup(g, pis)
        iso = y.isomorphism(x, _structure_labels(y, st, pis)) or y.isomorphism(x)
        if iso is None:
            raise AssertionError("amalgam is not isomorphic to the blowup of its recovered partitions")
        if y.separating_hyperplanes():
            raise AssertionError("separating hyperplanes survived")
        return AmalgamResult(x, y, st, pis, iso)
    raise ValueError("no labeling recovers a legal compatible collection")


def _structure_labels(y, st, pis):
    # label edges by vertex or recovered partition so VF2 has less to try
    entry = dict(zip(sorted(st.treelike), pis))

    def label(c, e):
        if c is y:
            h = y.edge_hyperplane[e]
            return (("P", entry[h]._key) if h in entry else ("V", st.labeling[h][0])), False
        kind, i = c.edge_labels[e]
        return ((kind, pis[i]._key) if kind == "P" else (kind, i)), False
    return label


def enumerate_z_graphs(rank, k, max_unlabeled=None):
    """Connected multigraphs of the given rank with k labeled vertices and
    unlabeled valence >= 3, up to relabeling the unlabeled vertices.

    Returns (n_vertices, edges) with labeled vertices 0..k-1.
    """
    if max_unlabeled is None:
        max_unlabeled = max(0, 2 * (rank - 1) + k)
    out = []
    for u in range(max_unlabeled + 1):
        n = k + u
        m = rank + n - 1
        if n == 0 or m < 0:
            continue
        seen = set()
        for es in _edge_multisets(n, k, m):
            if not _z_connected(n, es):
                continue
            key = min(tuple(sorted(tuple(sorted((pm[a], pm[b]))) for a, b in es))
                      for pm in (tuple(range(k)) + p for p in permutations(range(k, n))))
            if key not in seen:
                seen.add(key)
                out.append((n, list(key)))
    return out


def _edge_multisets(n, k, m):
    # pairs in lexicographic order, so vertex a is finished once its block
    # (a, a..n-1) is done; unlabeled valences are forced non-increasing
    pairs = [(a, b) for a in range(n) for b in range(a, n)]
    val = [0] * n
    chosen = []

    def deficit():
        return sum(max(0, 3 - val[v]) for v in range(k, n))

    def rec(i, left):
        if 2 * left < deficit():
            return
        if i == len(pairs):
            if left == 0:
                yield list(chosen)
            return
        a, b = pairs[i]
        for mult in range(left + 1):
            if mult:
                chosen.append((a, b))
                val[a] += 1
                val[b] += 1
            if b < n - 1 or a < k or (val[a] >= 3 and (a == k or val[a] <= val[a - 1])):
                yield from rec(i + 1, left - mult)
        for _ in range(left):
            chosen.pop()
            val[a] -= 1
            val[b] -= 1

    yield from rec(0, m)


def disjoint_decomposition(g):
    """Non-singleton components (as parts) and the isolated vertices Λ."""
    parts = [c for c in components(g, g.vertices) if len(c) > 1]
    lam = frozenset(v for v in g.vertices if not g.link(v))
    return parts, lam


def cube_centres(x, max_dim=2):
    """Attachment points at edge midpoints and square centres of x."""
    out = []
    for r in range(x.n_vertices):
        first = {}
        for e, (t, _) in enumerate(x.edges):
            if t == r:
                first.setdefault(x.edge_labels[e], e)
        labs = sorted(first, key=repr)
        for lab in labs:
            out.append(("cube", r, (lab,)))
        if max_dim >= 2:
            for i, a in enumerate(labs):
                for b in labs[i + 1:]:
                    ea, eb = first[a], first[b]
                    if any({ea, eb} <= {e for e, _ in s} for s in x.squares):
                        out.append(("cube", r, (a, b)))
    return out

