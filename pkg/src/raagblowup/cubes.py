"""Finite cube complexes presented by their 2-skeleton.

Vertices are ``0..n-1``; edges are ``(tail, head)`` pairs (loops allowed);
a square is a closed path of four oriented steps ``(edge, ±1)``. Higher cubes
are not stored: the complexes we build are special, so cubes are determined
by their 2-skeleton. Hyperplanes are parallelism classes of edges.
"""

from __future__ import annotations

from collections import deque
from functools import cached_property

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher


def _step_ends(edges, step):
    e, d = step
    t, h = edges[e]
    return (t, h) if d == 1 else (h, t)


def canonical_square(steps):
    steps = list(steps)
    rev = [(e, -d) for e, d in reversed(steps)]
    variants = []
    for seq in (steps, rev):
        for k in range(4):
            variants.append(tuple(seq[k:] + seq[:k]))
    return min(variants)


class _ParityUF:
    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.par = {x: 0 for x in items}

    def find(self, x):
        p = 0
        while self.parent[x] != x:
            p ^= self.par[x]
            x = self.parent[x]
        return x, p

    def union(self, a, b, parity):
        """Record parity(a) xor parity(b) == parity; return False on conflict."""
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return (pa ^ pb) == parity
        if rb < ra:
            ra, rb, pa, pb = rb, ra, pb, pa
        self.parent[rb] = ra
        self.par[rb] = pa ^ pb ^ parity
        return True


class CubeComplex:
    def __init__(self, n_vertices, edges, squares, edge_labels=None):
        self.n_vertices = n_vertices
        self.edges = tuple((int(t), int(h)) for t, h in edges)
        for t, h in self.edges:
            if not (0 <= t < n_vertices and 0 <= h < n_vertices):
                raise ValueError("edge endpoint out of range")
        sq = set()
        for s in squares:
            s = tuple((int(e), int(d)) for e, d in s)
            if len(s) != 4:
                raise ValueError("a square needs four steps")
            for i in range(4):
                if _step_ends(self.edges, s[i])[1] != _step_ends(self.edges, s[(i + 1) % 4])[0]:
                    raise ValueError(f"square {s} is not a closed path")
            sq.add(canonical_square(s))
        self.squares = tuple(sorted(sq))
        self.edge_labels = tuple(edge_labels) if edge_labels is not None else (None,) * len(self.edges)

    def __repr__(self):
        return f"CubeComplex(V={self.n_vertices}, E={len(self.edges)}, S={len(self.squares)})"

    # ---- hyperplanes ----

    @cached_property
    def _hyp(self):
        uf = _ParityUF(range(len(self.edges)))
        ok = True
        for s in self.squares:
            for i in (0, 1):
                (a, da), (b, db) = s[i], s[i + 2]
                ok &= uf.union(a, b, 0 if da == -db else 1)
        roots = {}
        hyps = []
        edge_h = [0] * len(self.edges)
        orient = [1] * len(self.edges)
        for e in range(len(self.edges)):
            r, p = uf.find(e)
            if r not in roots:
                roots[r] = len(hyps)
                hyps.append([])
            edge_h[e] = roots[r]
            hyps[roots[r]].append(e)
        for e in range(len(self.edges)):
            r, p = uf.find(e)
            orient[e] = 1 if p == 0 else -1
        return tuple(tuple(h) for h in hyps), tuple(edge_h), tuple(orient), ok

    @property
    def hyperplanes(self):
        """Tuple of dual-edge tuples, ordered by least dual edge."""
        return self._hyp[0]

    @property
    def edge_hyperplane(self):
        return self._hyp[1]

    @property
    def edge_orientation(self):
        """Orientation of each edge relative to its hyperplane's reference direction."""
        return self._hyp[2]

    @property
    def two_sided(self):
        return self._hyp[3]

    @cached_property
    def crossings(self):
        out = set()
        eh = self.edge_hyperplane
        for s in self.squares:
            a, b = eh[s[0][0]], eh[s[1][0]]
            out.add((a, b))
            out.add((b, a))
        return frozenset(out)

    def crosses(self, h1, h2):
        return (h1, h2) in self.crossings

    def self_intersecting(self):
        return [h for h, k in self.crossings if h == k]

    # ---- incidence and connectivity ----

    @cached_property
    def incidence(self):
        inc = [[] for _ in range(self.n_vertices)]
        for e, (t, h) in enumerate(self.edges):
            inc[t].append((e, 1))
            inc[h].append((e, -1))
        return tuple(tuple(x) for x in inc)

    def step_end(self, v, step):
        t, h = _step_ends(self.edges, step)
        if t != v:
            raise ValueError("step does not start at vertex")
        return h

    def components(self, edge_ok=None):
        """Vertex components of the 1-skeleton using edges with ``edge_ok(e)``."""
        comp = [-1] * self.n_vertices
        k = 0
        for s in range(self.n_vertices):
            if comp[s] >= 0:
                continue
            comp[s] = k
            stack = [s]
            while stack:
                u = stack.pop()
                for e, d in self.incidence[u]:
                    if edge_ok is not None and not edge_ok(e):
                        continue
                    w = _step_ends(self.edges, (e, d))[1]
                    if comp[w] < 0:
                        comp[w] = k
                        stack.append(w)
            k += 1
        return comp, k

    def is_connected(self):
        return self.n_vertices > 0 and self.components()[1] == 1

    def shortest_path(self, a, b, edge_ok=None):
        """Steps of a shortest edge path from a to b (BFS, deterministic)."""
        prev = {a: None}
        q = deque([a])
        while q:
            u = q.popleft()
            if u == b:
                break
            for e, d in self.incidence[u]:
                if edge_ok is not None and not edge_ok(e):
                    continue
                w = _step_ends(self.edges, (e, d))[1]
                if w not in prev:
                    prev[w] = (u, (e, d))
                    q.append(w)
        if b not in prev:
            raise ValueError("no path")
        steps = []
        while prev[b] is not None:
            u, st = prev[b]
            steps.append(st)
            b = u
        return list(reversed(steps))

    def separating_hyperplanes(self):
        out = []
        for h, dual in enumerate(self.hyperplanes):
            ds = set(dual)
            if self.components(lambda e: e not in ds)[1] > self.components()[1]:
                out.append(h)
        return out

    # ---- constructions ----

    def collapse(self, hyps):
        """Collapse the hyperplanes in ``hyps``.

        Returns ``(complex, vertex_map, edge_map)`` where ``edge_map[e]`` is
        ``(new_edge, sign)`` or ``None`` for collapsed edges.
        """
        hyps = set(hyps)
        dead = {e for h in hyps for e in self.hyperplanes[h]}
        vuf = _ParityUF(range(self.n_vertices))
        for e in dead:
            vuf.union(*self.edges[e], 0)
        live = [e for e in range(len(self.edges)) if e not in dead]
        euf = _ParityUF(live)
        for s in self.squares:
            kinds = [st[0] in dead for st in s]
            for i in (0, 1):
                j = 1 - i
                if kinds[i] and kinds[i + 2] and not kinds[j] and not kinds[j + 2]:
                    (a, da), (b, db) = s[j], s[j + 2]
                    euf.union(a, b, 0 if da == -db else 1)
        vroots = sorted({vuf.find(v)[0] for v in range(self.n_vertices)})
        vnew = {r: i for i, r in enumerate(vroots)}
        vmap = tuple(vnew[vuf.find(v)[0]] for v in range(self.n_vertices))
        eroots = []
        for e in live:
            r = euf.find(e)[0]
            if r not in eroots:
                eroots.append(r)
        enew = {r: i for i, r in enumerate(eroots)}
        emap = [None] * len(self.edges)
        for e in live:
            r, p = euf.find(e)
            emap[e] = (enew[r], -1 if p else 1)
        new_edges = [(vmap[self.edges[r][0]], vmap[self.edges[r][1]]) for r in eroots]
        labels = [self.edge_labels[r] for r in eroots]
        new_sq = []
        for s in self.squares:
            if any(st[0] in dead for st in s):
                continue
            new_sq.append([(emap[e][0], d * emap[e][1]) for e, d in s])
        return CubeComplex(len(vroots), new_edges, new_sq, labels), vmap, tuple(emap)

    def subcomplex(self, vertices, edge_ok=None):
        """Full subcomplex on a vertex subset (edges filtered by ``edge_ok``)."""
        vs = sorted(vertices)
        vi = {v: i for i, v in enumerate(vs)}
        es = [e for e, (t, h) in enumerate(self.edges) if t in vi and h in vi and (edge_ok is None or edge_ok(e))]
        ei = {e: i for i, e in enumerate(es)}
        sq = [[(ei[e], d) for e, d in s] for s in self.squares if all(e in ei for e, _ in s)]
        sub = CubeComplex(len(vs), [(vi[self.edges[e][0]], vi[self.edges[e][1]]) for e in es], sq,
                          [self.edge_labels[e] for e in es])
        return sub, tuple(vs), tuple(es)

    def relabeled(self, labels):
        return CubeComplex(self.n_vertices, self.edges, self.squares, labels)

    # ---- isomorphism ----

    def encoding(self, edge_label=None):
        """Simple graph whose automorphisms are the cubical automorphisms.

        ``edge_label(x, e)`` may return ``(label, oriented)``; oriented labels
        must be carried to the same label with the same direction.
        """
        G = nx.Graph()
        for v in range(self.n_vertices):
            G.add_node(("v", v), kind="v")
        for e, (t, h) in enumerate(self.edges):
            lab, oriented = (None, False) if edge_label is None else edge_label(self, e)
            G.add_node(("e", e), kind="e", label=lab)
            G.add_node(("t", e), kind="t" if oriented else "half")
            G.add_node(("h", e), kind="h" if oriented else "half")
            G.add_edge(("e", e), ("t", e))
            G.add_edge(("e", e), ("h", e))
            G.add_edge(("t", e), ("v", t))
            G.add_edge(("h", e), ("v", h))
        for q, s in enumerate(self.squares):
            G.add_node(("s", q), kind="s")
            for i in range(4):
                (e0, d0), (e1, d1) = s[i - 1], s[i]
                arrive = ("h", e0) if d0 == 1 else ("t", e0)
                leave = ("t", e1) if d1 == 1 else ("h", e1)
                c = ("c", q, i)
                G.add_node(c, kind="c")
                G.add_edge(c, ("s", q))
                G.add_edge(c, arrive)
                G.add_edge(c, leave)
        return G

    def invariant(self, edge_label=None):
        G = self.encoding(edge_label)
        for n, d in G.nodes(data=True):
            d["wl"] = f"{d['kind']}:{d.get('label')}"
        return (self.n_vertices, len(self.edges), len(self.squares),
                nx.weisfeiler_lehman_graph_hash(G, node_attr="wl", iterations=4))

    def _map_from_match(self, other, m):
        vmap = tuple(m[("v", v)][1] for v in range(self.n_vertices))
        emap = []
        for e in range(len(self.edges)):
            img = m[("t", e)]
            emap.append((img[1], 1 if img[0] == "t" else -1))
        return CubicalMap(self, other, vmap, tuple(emap))

    def _matcher(self, other, edge_label):
        G1 = self.encoding(edge_label)
        G2 = other.encoding(edge_label)
        nm = lambda a, b: a["kind"] == b["kind"] and a.get("label") == b.get("label")
        return GraphMatcher(G2, G1, node_match=nm), G1, G2

    def isomorphism(self, other, edge_label=None):
        """A cubical isomorphism self -> other, or None."""
        if (self.n_vertices, len(self.edges), len(self.squares)) != (other.n_vertices, len(other.edges), len(other.squares)):
            return None
        gm, G1, G2 = self._matcher(other, edge_label)
        for m in gm.isomorphisms_iter():
            inv = {b: a for a, b in m.items()}
            return self._map_from_match(other, inv)
        return None

    def automorphisms(self, edge_label=None):
        gm, G1, _ = self._matcher(self, edge_label)
        out = []
        for m in gm.isomorphisms_iter():
            inv = {b: a for a, b in m.items()}
            out.append(self._map_from_match(self, inv))
        out.sort(key=lambda f: (f.vmap, f.emap))
        return out

    def to_json(self):
        return {
            "vertices": self.n_vertices,
            "edges": [list(e) for e in self.edges],
            "squares": [[list(st) for st in s] for s in self.squares],
        }


def product(x, y):
    """Cartesian product; vertex (a, b) gets index a * |V(y)| + b."""
    ny = y.n_vertices
    vid = lambda a, b: a * ny + b
    edges, labels, index = [], [], {}
    for e, (t, h) in enumerate(x.edges):
        for b in range(ny):
            index[("x", e, b)] = len(edges)
            edges.append((vid(t, b), vid(h, b)))
            labels.append(x.edge_labels[e])
    for f, (t, h) in enumerate(y.edges):
        for a in range(x.n_vertices):
            index[("y", a, f)] = len(edges)
            edges.append((vid(a, t), vid(a, h)))
            labels.append(y.edge_labels[f])
    squares = []
    for s in x.squares:
        for b in range(ny):
            squares.append([(index[("x", e, b)], d) for e, d in s])
    for s in y.squares:
        for a in range(x.n_vertices):
            squares.append([(index[("y", a, f)], d) for f, d in s])
    for e, (t, h) in enumerate(x.edges):
        for f, (t2, h2) in enumerate(y.edges):
            squares.append([(index[("x", e, t2)], 1), (index[("y", h, f)], 1),
                            (index[("x", e, h2)], -1), (index[("y", t, f)], -1)])
    return CubeComplex(x.n_vertices * ny, edges, squares, labels)


class CubicalMap:
    """Vertex map plus edge map; ``emap[e] = (edge, sign)`` with sign -1 reversing."""

    __slots__ = ("source", "target", "vmap", "emap")

    def __init__(self, source, target, vmap, emap):
        self.source = source
        self.target = target
        self.vmap = tuple(vmap)
        self.emap = tuple((int(a), int(b)) for a, b in emap)

    def __eq__(self, other):
        return isinstance(other, CubicalMap) and self.vmap == other.vmap and self.emap == other.emap

    def __hash__(self):
        return hash((self.vmap, self.emap))

    def __repr__(self):
        return f"CubicalMap(vmap={self.vmap}, emap={self.emap})"

    def __call__(self, steps):
        return [(self.emap[e][0], d * self.emap[e][1]) for e, d in steps]

    def hyperplane_map(self):
        s, t = self.source, self.target
        out = {}
        for e in range(len(s.edges)):
            out[s.edge_hyperplane[e]] = t.edge_hyperplane[self.emap[e][0]]
        return out

    def problems(self):
        """Reasons this fails to be a cubical isomorphism."""
        s, t = self.source, self.target
        out = []
        if sorted(self.vmap) != list(range(t.n_vertices)) or s.n_vertices != t.n_vertices:
            out.append("vertex map not bijective")
        if sorted(e for e, _ in self.emap) != list(range(len(t.edges))) or len(s.edges) != len(t.edges):
            out.append("edge map not bijective")
            return out
        for e, (a, b) in enumerate(s.edges):
            f, sg = self.emap[e]
            ta, tb = t.edges[f] if sg == 1 else t.edges[f][::-1]
            if (self.vmap[a], self.vmap[b]) != (ta, tb):
                out.append(f"edge {e} incidence not preserved")
                break
        tsq = set(t.squares)
        for q in s.squares:
            if canonical_square(self(q)) not in tsq:
                out.append("a square is not mapped to a square")
                break
        if len(s.squares) != len(t.squares):
            out.append("square counts differ")
        return out

    def is_isomorphism(self):
        return not self.problems()


def compose_maps(f, g):
    """f after g."""
    vmap = tuple(f.vmap[v] for v in g.vmap)
    emap = tuple((f.emap[e][0], s * f.emap[e][1]) for e, s in g.emap)
    return CubicalMap(g.source, f.target, vmap, emap)


def inverse_map(f):
    vmap = [0] * len(f.vmap)
    for a, b in enumerate(f.vmap):
        vmap[b] = a
    emap = [None] * len(f.emap)
    for e, (g, s) in enumerate(f.emap):
        emap[g] = (e, s)
    return CubicalMap(f.target, f.source, vmap, emap)


def identity_map(x):
    return CubicalMap(x, x, range(x.n_vertices), [(e, 1) for e in range(len(x.edges))])


def map_order(f):
    ident = identity_map(f.source)
    g = f
    k = 1
    while g != ident:
        g = compose_maps(f, g)
        k += 1
    return k


def disjoint_union(parts):
    """Disjoint union; returns the complex and per-part vertex/edge offsets."""
    edges, squares, labels, offs = [], [], [], []
    nv = 0
    for x in parts:
        ne = len(edges)
        offs.append((nv, ne))
        edges += [(t + nv, h + nv) for t, h in x.edges]
        labels += list(x.edge_labels)
        squares += [[(e + ne, d) for e, d in s] for s in x.squares]
        nv += x.n_vertices
    return CubeComplex(nv, edges, squares, labels), offs


def with_extra_edges(x, new_edges, labels=None):
    labels = list(labels) if labels is not None else [None] * len(new_edges)
    return CubeComplex(x.n_vertices, list(x.edges) + list(new_edges), x.squares, list(x.edge_labels) + labels)


def with_extra_vertices(x, k):
    return CubeComplex(x.n_vertices + k, x.edges, x.squares, x.edge_labels)
