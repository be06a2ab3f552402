"""Finite simplicial graphs, links and stars, the doubled graph, fold classes.

Signed vertices are pairs ``(name, sign)`` with ``sign`` in ``{+1, -1}``.
Vertex names are strings; the order given at construction is used for every
enumeration so that outputs are deterministic.
"""

from __future__ import annotations

import json
import re
from itertools import combinations

import networkx as nx


def sv(v, sign=1):
    return (v, sign)


def inv(s):
    return (s[0], -s[1])


def fmt_signed(s):
    return s[0] if s[1] == 1 else s[0] + "^-1"


def parse_signed(tok):
    tok = tok.strip()
    if tok.endswith("^-1"):
        return (tok[:-3], -1)
    if tok.endswith("^1"):
        tok = tok[:-2]
    if not tok or "^" in tok:
        raise ValueError(f"bad signed vertex {tok!r}")
    return (tok, 1)


class SimplicialGraph:
    """A finite simplicial graph with a fixed vertex order.

    >>> g = SimplicialGraph(["a", "b", "c"], [("a", "b")])
    >>> sorted(g.link("a"))
    ['b']
    >>> g.adjacent("b", "a"), g.adjacent("a", "c")
    (True, False)
    """

    def __init__(self, vertices, edges=()):
        verts = tuple(str(v) for v in vertices)
        if len(set(verts)) != len(verts):
            raise ValueError("repeated vertex")
        self.vertices = verts
        self.index = {v: i for i, v in enumerate(verts)}
        nbrs = {v: set() for v in verts}
        for e in edges:
            a, b = (str(x) for x in e)
            if a not in nbrs or b not in nbrs:
                raise ValueError(f"edge {a}-{b} uses an unknown vertex")
            if a == b:
                raise ValueError(f"loop at {a}")
            nbrs[a].add(b)
            nbrs[b].add(a)
        self._nbrs = {v: frozenset(s) for v, s in nbrs.items()}

    def __repr__(self):
        return f"SimplicialGraph({list(self.vertices)!r}, {self.edges()!r})"

    def __eq__(self, other):
        return (isinstance(other, SimplicialGraph) and self.vertices == other.vertices
                and self._nbrs == other._nbrs)

    def __hash__(self):
        return hash((self.vertices, frozenset(map(frozenset, self.edges()))))

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, v):
        return v in self.index

    def check(self, v):
        if v not in self.index:
            raise ValueError(f"unknown vertex {v!r}")
        return v

    def check_set(self, s):
        for v in s:
            self.check(v)
        return frozenset(s)

    def edges(self):
        out = []
        for a, b in combinations(self.vertices, 2):
            if b in self._nbrs[a]:
                out.append((a, b))
        return out

    def adjacent(self, a, b):
        return b in self._nbrs[self.check(a)]

    def link(self, v):
        return self._nbrs[self.check(v)]

    def star(self, v):
        return self.link(v) | {v}

    def link_of_set(self, s):
        s = self.check_set(s)
        out = frozenset(self.vertices)
        for v in s:
            out &= self._nbrs[v]
        return out

    def sort(self, vs):
        return sorted(vs, key=self.index.__getitem__)

    def signed_key(self, s):
        return (self.index[s[0]], -s[1])

    def sort_signed(self, ss):
        return sorted(ss, key=self.signed_key)

    def signed(self, vs=None):
        """All signed copies of ``vs`` (default: every vertex)."""
        vs = self.vertices if vs is None else vs
        return frozenset((v, e) for v in vs for e in (1, -1))

    def induced(self, vs):
        vs = self.check_set(vs)
        order = [v for v in self.vertices if v in vs]
        return SimplicialGraph(order, [(a, b) for a, b in self.edges() if a in vs and b in vs])

    def to_networkx(self):
        h = nx.Graph()
        h.add_nodes_from(self.vertices)
        h.add_edges_from(self.edges())
        return h


def link(g, v):
    return g.link(v)


def link_of_set(g, s):
    return g.link_of_set(s)


def star(g, v):
    return g.star(v)


def components(g, s):
    """Connected components of the subgraph induced on ``s``, in vertex order."""
    s = g.check_set(s)
    seen = set()
    out = []
    for v in g.vertices:
        if v not in s or v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in g.link(u):
                if w in s and w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        out.append(frozenset(comp))
    return out


class DoubledGraph:
    """The graph on signed vertices where v^e ~ w^d iff v != w and v ~ w."""

    def __init__(self, g):
        self.graph = g
        self.vertices = tuple((v, e) for v in g.vertices for e in (1, -1))

    def adjacent(self, s, t):
        return s[0] != t[0] and self.graph.adjacent(s[0], t[0])

    def neighbors(self, s):
        return frozenset((w, e) for w in self.graph.link(s[0]) for e in (1, -1))


def double(g):
    return DoubledGraph(g)


def components_double(d, removed=frozenset()):
    """Components of the doubled graph after deleting ``removed``."""
    removed = frozenset(removed)
    seen = set()
    out = []
    for s in d.vertices:
        if s in removed or s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for t in d.neighbors(u):
                if t not in removed and t not in comp:
                    comp.add(t)
                    stack.append(t)
        seen |= comp
        out.append(frozenset(comp))
    return out


def signed_link(g, v):
    return g.signed(g.link(v))


def fold_classes(g):
    """Fold classes (equal links), their order by link inclusion, and the maximal ones.

    Returns ``(classes, leq, maximal)`` where ``leq[i]`` is the set of class
    indices ``j`` with ``classes[i] <= classes[j]``.
    """
    classes = []
    by_link = {}
    for v in g.vertices:
        lk = g.link(v)
        if lk not in by_link:
            by_link[lk] = len(classes)
            classes.append([])
        classes[by_link[lk]].append(v)
    classes = [frozenset(c) for c in classes]
    links = [g.link(next(iter(c))) for c in classes]
    leq = [frozenset(j for j in range(len(classes)) if links[i] <= links[j]) for i in range(len(classes))]
    maximal = [c for i, c in enumerate(classes) if leq[i] == {i}]
    return classes, leq, maximal


def maximal_fold_classes(g):
    return fold_classes(g)[2]


# ---- ingestion / emission ----

def graph_from_json(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "vertices" not in obj:
        raise ValueError("graph JSON needs a 'vertices' list")
    edges = obj.get("edges", [])
    for e in edges:
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise ValueError(f"bad edge {e!r}")
    return SimplicialGraph(obj["vertices"], edges)


def graph_to_json(g):
    return {"vertices": list(g.vertices), "edges": [list(e) for e in g.edges()]}


_DOT_HEAD = re.compile(r"^\s*(strict\s+)?graph\s*(\w+)?\s*\{(.*)\}\s*$", re.S)
_ID = r'(?:"[^"]*"|[A-Za-z_][\w]*|\d+)'


def _unquote(tok):
    return tok[1:-1] if tok.startswith('"') else tok


def graph_from_dot(text):
    """Parse undirected DOT without attributes: ``graph { a; b; a -- b; }``."""
    m = _DOT_HEAD.match(text)
    if not m:
        raise ValueError("not an undirected DOT graph")
    body = re.sub(r"//[^\n]*", "", m.group(3))
    verts, edges = [], []

    def add(v):
        if v not in verts:
            verts.append(v)

    for stmt in re.split(r"[;\n]", body):
        stmt = stmt.strip()
        if not stmt:
            continue
        if "[" in stmt or "=" in stmt or "->" in stmt:
            raise ValueError(f"unsupported DOT statement {stmt!r}")
        parts = [p.strip() for p in stmt.split("--")]
        if not all(re.fullmatch(_ID, p) for p in parts):
            raise ValueError(f"bad DOT statement {stmt!r}")
        names = [_unquote(p) for p in parts]
        for v in names:
            add(v)
        edges.extend(zip(names, names[1:]))
    return SimplicialGraph(verts, edges)


def graph_to_dot(g):
    lines = ["graph {"]
    lines += [f'  "{v}";' for v in g.vertices]
    lines += [f'  "{a}" -- "{b}";' for a, b in g.edges()]
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_graph(text):
    """Read a graph from JSON or DOT text."""
    s = text.lstrip()
    if s.startswith("{"):
        try:
            obj = json.loads(s)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed graph JSON: {exc}") from None
        return graph_from_json(obj)
    return graph_from_dot(text)


# ---- a few named graphs used throughout ----

def discrete(names):
    return SimplicialGraph(names, [])


def complete(names):
    return SimplicialGraph(names, list(combinations(names, 2)))


def figure4_graph():
    return SimplicialGraph("abcdef", [("e", "a"), ("a", "c"), ("a", "d"), ("c", "b"), ("d", "b"), ("b", "f")])


def from_networkx(h):
    names = [str(v) for v in h.nodes()]
    return SimplicialGraph(names, [(str(a), str(b)) for a, b in h.edges()])


def corpus():
    """A fixed list of 50 small graphs: the Figure-4 graph, every graph on
    at most 4 vertices, 20 five-vertex and 11 six-vertex graphs spread
    evenly through the graph atlas."""
    atlas = nx.graph_atlas_g()
    small = list(range(1, 19))
    five = [19 + round(k * 33 / 19) for k in range(20)]
    six = [53 + round(k * 155 / 10) for k in range(11)]
    out = [("figure4", figure4_graph())]
    for i in small + five + six:
        out.append((f"atlas{i}", from_networkx(atlas[i])))
    return out
