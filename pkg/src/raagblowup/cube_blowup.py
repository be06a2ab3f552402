"""Blowups of Salvetti complexes along compatible partition multisets.

A region is a tuple of side indices (0 = stored side1, 1 = stored side2),
one per entry of the multiset. Edge labels are ``("P", i)`` for the i-th
entry and ``("V", v)`` for generator ``v``; partition edges run from choice
0 to choice 1 and v-edges run in the direction of ``v``.
"""

from __future__ import annotations

from itertools import combinations, product

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from .cubes import CubeComplex, inverse_map
from .graph_core import fmt_signed
from .partitions import adjacent, check_multiset, singleton_partition
from .raag_algebra import RaagAutomorphism, word_inverse


class BlowupComplex(CubeComplex):
    def __init__(self, graph, pi, regions, edges, squares, labels):
        super().__init__(len(regions), edges, squares, labels)
        self.graph = graph
        self.pi = tuple(pi)
        self.regions = tuple(regions)
        self.region_index = {r: i for i, r in enumerate(self.regions)}

    def __repr__(self):
        return f"BlowupComplex(|Π|={len(self.pi)}, regions={len(self.regions)}, edges={len(self.edges)}, squares={len(self.squares)})"

    def label_hyperplane(self, label):
        for e, lab in enumerate(self.edge_labels):
            if lab == label:
                return self.edge_hyperplane[e]
        raise ValueError(f"no hyperplane labeled {label!r}")

    def edges_labeled(self, label):
        return [e for e, lab in enumerate(self.edge_labels) if lab == label]

    def to_json(self):
        g = self.graph

        def lab(l):
            return {"partition": l[1]} if l[0] == "P" else {"vertex": l[1]}

        return {
            "graph": {"vertices": list(g.vertices), "edges": [list(e) for e in g.edges()]},
            "pi": [p.to_json() for p in self.pi],
            "regions": [list(r) for r in self.regions],
            "edges": [{"label": lab(l), "tail": t, "head": h} for l, (t, h) in zip(self.edge_labels, self.edges)],
            "squares": [[list(st) for st in s] for s in self.squares],
            "hyperplanes": [list(h) for h in self.hyperplanes],
        }


def _consistency(pi):
    """allowed[(i, j)] = set of permitted (ci, cj) for i < j."""
    k = len(pi)
    allowed = {}
    for i, j in combinations(range(k), 2):
        p, q = pi[i], pi[j]
        ok = set()
        if p == q:
            # nested copies: forbid (canonical side1 for i, other side for j)
            c = p.canonical().side1
            for ci, cj in product((0, 1), repeat=2):
                if not (p.sides[ci] == c and q.sides[cj] != c):
                    ok.add((ci, cj))
        elif adjacent(p, q):
            ok = {(0, 0), (0, 1), (1, 0), (1, 1)}
        else:
            for ci, cj in product((0, 1), repeat=2):
                if p.sides[ci] & q.sides[cj]:
                    ok.add((ci, cj))
        allowed[(i, j)] = ok
    return allowed


def _regions(k, allowed):
    out = []
    cur = []

    def grow(i):
        if i == k:
            out.append(tuple(cur))
            return
        for c in (0, 1):
            if all((cur[j], c) in allowed[(j, i)] for j in range(i)):
                cur.append(c)
                grow(i + 1)
                cur.pop()

    grow(0)
    return out


def build_blowup(g, pi, check=True):
    """The blowup of the Salvetti complex of ``g`` along the multiset ``pi``."""
    pi = list(pi)
    for p in pi:
        if p.graph != g:
            raise ValueError("partition over a different graph")
    if check:
        check_multiset(pi)
    k = len(pi)
    allowed = _consistency(pi)
    regions = _regions(k, allowed)
    rindex = {r: i for i, r in enumerate(regions)}
    links = [p.link_vertices() for p in pi]
    adj = {(i, j): adjacent(pi[i], pi[j]) for i, j in combinations(range(k), 2)}

    edges, labels = [], []
    out = [dict() for _ in regions]
    for r, reg in enumerate(regions):
        for i in range(k):
            if reg[i] == 0:
                other = reg[:i] + (1,) + reg[i + 1:]
                if other in rindex:
                    out[r][("P", i)] = len(edges)
                    edges.append((r, rindex[other]))
                    labels.append(("P", i))
    for v in g.vertices:
        nonlink = [i for i in range(k) if v not in links[i]]
        t = {i: pi[i].side_index((v, 1)) for i in nonlink}
        o = {i: pi[i].side_index((v, -1)) for i in nonlink}
        for r, reg in enumerate(regions):
            if all(reg[i] == o[i] for i in nonlink):
                head = list(reg)
                for i in nonlink:
                    head[i] = t[i]
                head = tuple(head)
                if head not in rindex:
                    raise ValueError(f"{v}-edge from region {reg} has no consistent terminal region")
                out[r][("V", v)] = len(edges)
                edges.append((r, rindex[head]))
                labels.append(("V", v))

    def commute(a, b):
        if a[0] == "P" and b[0] == "P":
            i, j = sorted((a[1], b[1]))
            return i != j and adj[(i, j)]
        if a[0] == "V" and b[0] == "V":
            return g.adjacent(a[1], b[1])
        i, v = (a[1], b[1]) if a[0] == "P" else (b[1], a[1])
        return v in links[i]

    squares = []
    for r in range(len(regions)):
        labs = list(out[r])
        for a, b in combinations(labs, 2):
            if not commute(a, b):
                continue
            e1, e2 = out[r][a], out[r][b]
            r1, r2 = edges[e1][1], edges[e2][1]
            f2, f1 = out[r1].get(b), out[r2].get(a)
            if f1 is None or f2 is None or edges[f1][1] != edges[f2][1]:
                continue
            squares.append([(e1, 1), (f2, 1), (f1, -1), (e2, -1)])
    return BlowupComplex(g, pi, regions, edges, squares, labels)


def salvetti(g):
    return build_blowup(g, [])


def collapse_partition(x, i):
    """Remove entry ``i``; returns the smaller blowup and the region map."""
    if not 0 <= i < len(x.pi):
        raise ValueError(f"no entry {i}")
    y = build_blowup(x.graph, x.pi[:i] + x.pi[i + 1:], check=False)
    vmap = tuple(y.region_index[r[:i] + r[i + 1:]] for r in x.regions)
    return y, vmap


def duplicate_hyperplane(x, label):
    """Duplicate the hyperplane with the given label (``("P", i)`` or ``("V", v)``)."""
    if label[0] == "P":
        return build_blowup(x.graph, list(x.pi) + [x.pi[label[1]]], check=False)
    return build_blowup(x.graph, list(x.pi) + [singleton_partition(x.graph, label[1], degenerate_ok=True)], check=False)


# ---- blowup structures ----

class BlowupStructure:
    """A treelike hyperplane set and signed vertex labels for the other hyperplanes.

    ``labeling[h] = (v, s)``: crossing a dual edge ``e`` of ``h`` forwards
    reads ``v`` to the power ``s * edge_orientation[e]``.
    """

    def __init__(self, treelike, labeling):
        self.treelike = frozenset(treelike)
        self.labeling = dict(labeling)

    def __repr__(self):
        return f"BlowupStructure(T={sorted(self.treelike)}, labels={dict(sorted(self.labeling.items()))})"

    def __eq__(self, other):
        return (isinstance(other, BlowupStructure) and self.treelike == other.treelike
                and self.labeling == other.labeling)

    def __hash__(self):
        return hash((self.treelike, tuple(sorted(self.labeling.items()))))

    def hyperplane_of(self, v):
        for h, (w, _) in self.labeling.items():
            if w == v:
                return h
        raise ValueError(f"no hyperplane labeled {v}")


def natural_structure(x):
    """Partition hyperplanes as the treelike set, v-hyperplanes labeled by v."""
    t = set()
    lab = {}
    for e, l in enumerate(x.edge_labels):
        h = x.edge_hyperplane[e]
        if l[0] == "P":
            t.add(h)
        elif h not in lab:
            lab[h] = (l[1], x.edge_orientation[e])
    return BlowupStructure(t, lab)


def salvetti_bijections(c, g, first_only=False):
    """Hyperplane -> vertex bijections identifying ``c`` with the Salvetti complex of ``g``."""
    if c.n_vertices != 1 or not c.two_sided:
        return []
    hyps = c.hyperplanes
    if len(hyps) != len(g) or any(len(h) != 1 for h in hyps):
        return []
    pairs = set()
    for s in c.squares:
        a, b = c.edge_hyperplane[s[0][0]], c.edge_hyperplane[s[1][0]]
        if a == b:
            return []
        pairs.add(frozenset((a, b)))
    if len(pairs) != len(c.squares) or len(pairs) != len(g.edges()):
        return []
    H = nx.Graph()
    H.add_nodes_from(range(len(hyps)))
    H.add_edges_from(tuple(p) for p in pairs)
    gm = GraphMatcher(H, g.to_networkx())
    out = []
    for m in gm.isomorphisms_iter():
        out.append(dict(m))
        if first_only:
            break
    return out


def _lift_labeling(x, c, emap, t, bij, signs):
    lab = {}
    for h, dual in enumerate(x.hyperplanes):
        if h in t:
            continue
        e = dual[0]
        ce, s = emap[e]
        ch = c.edge_hyperplane[ce]
        v = bij[ch]
        sigma = signs.get(v, 1)
        lab[h] = (v, sigma * c.edge_orientation[ce] * s * x.edge_orientation[e])
    return lab


def is_treelike(x, t, g=None):
    g = x.graph if g is None else g
    c, _, _ = x.collapse(t)
    return bool(salvetti_bijections(c, g, first_only=True))


def labelings(x, t, g=None, signed=True):
    """All labelings of the hyperplanes outside ``t`` coming from identifications with Salvetti."""
    g = x.graph if g is None else g
    c, _, emap = x.collapse(t)
    out = []
    for bij in salvetti_bijections(c, g):
        sign_sets = product((1, -1), repeat=len(g)) if signed else [(1,) * len(g)]
        for sg in sign_sets:
            out.append(BlowupStructure(t, _lift_labeling(x, c, emap, set(t), bij, dict(zip(g.vertices, sg)))))
    return out


def treelike_sets(x, g=None):
    g = x.graph if g is None else g
    n = len(x.hyperplanes)
    k = n - len(g)
    if k < 0:
        return []
    return [frozenset(t) for t in combinations(range(n), k) if is_treelike(x, t, g)]


def structures(x, g=None, signed=True, valid_only=True, allow_subdivided=False):
    """All blowup structures, optionally keeping only those recovering valid partitions."""
    g = x.graph if g is None else g
    out = []
    for t in treelike_sets(x, g):
        for s in labelings(x, t, g, signed=signed):
            if valid_only:
                try:
                    pis = recover_partitions(x, s, g)
                except ValueError:
                    continue
                if not multiset_is_legal(pis, allow_subdivided):
                    continue
            out.append(s)
    return out


def multiset_is_legal(pis, allow_subdivided=False):
    from .partitions import compatible, is_singleton

    for p in pis:
        if is_singleton(p):
            if not allow_subdivided:
                return False
        elif not p.is_valid():
            return False
    if not allow_subdivided and len(set(pis)) != len(pis):
        return False
    return all(compatible(p, q) for p, q in combinations(pis, 2))


def treelike_cut(x, t, H):
    """Halves of the treelike subcomplex cut along H: (component list, tail half, head half).

    Halves are found in the 1-skeleton spanned by edges dual to ``t``,
    with H's own dual edges removed; the head half is where H's reference
    direction points.
    """
    eh, ho = x.edge_hyperplane, x.edge_orientation
    dual = set(x.hyperplanes[H])
    comp, k = x.components(lambda e: eh[e] in t and e not in dual)
    e0 = x.hyperplanes[H][0]
    tail, head = x.edges[e0] if ho[e0] == 1 else x.edges[e0][::-1]
    a, b = comp[tail], comp[head]
    if a == b or k != 2:
        raise ValueError(f"hyperplane {H} does not cut the treelike subcomplex in two")
    return comp, a, b


def recover_partitions(x, structure, g=None):
    """The partition (lk(H) | U1 | U2) of every treelike hyperplane H."""
    from .partitions import WhiteheadPartition

    g = x.graph if g is None else g
    t = structure.treelike
    lab = structure.labeling
    if len(lab) != len(g) or set(lab) & t:
        raise ValueError("labeling does not cover the non-treelike hyperplanes")
    ho = x.edge_orientation
    out = []
    for H in sorted(t):
        comp, a, b = treelike_cut(x, t, H)
        side = {a: set(), b: set()}
        link = set()
        for h, (v, s) in lab.items():
            if x.crosses(h, H):
                link |= {(v, 1), (v, -1)}
                continue
            seen = set()
            for e in x.hyperplanes[h]:
                d = s * ho[e]
                term, init = (x.edges[e][1], x.edges[e][0]) if d == 1 else x.edges[e]
                seen.add((comp[term], comp[init]))
            if len(seen) != 1:
                raise ValueError(f"generator {v} sits on both sides of hyperplane {H}")
            ct, ci = seen.pop()
            side[ct].add((v, 1))
            side[ci].add((v, -1))
        out.append(WhiteheadPartition(g, link, side[a], side[b]))
    return out


# ---- paths, characteristic cycles and induced automorphisms ----

class EdgePath:
    def __init__(self, start, steps):
        self.start = start
        self.steps = list(steps)

    def __repr__(self):
        return f"EdgePath({self.start}, {self.steps})"

    def vertices(self, x):
        vs = [self.start]
        for st in self.steps:
            vs.append(x.step_end(vs[-1], st))
        return vs


def _in_tree(x, structure):
    t = structure.treelike
    eh = x.edge_hyperplane
    return lambda e: eh[e] in t


def characteristic_cycle(x, v, structure=None, base=0):
    """The v-edge (at the base vertex when possible) closed up inside the treelike subcomplex."""
    structure = natural_structure(x) if structure is None else structure
    h = structure.hyperplane_of(v)
    s = structure.labeling[h][1]
    dual = x.hyperplanes[h]
    e = next((e for e in dual if base in x.edges[e]), dual[0])
    d = s * x.edge_orientation[e]
    start, end = x.edges[e] if d == 1 else x.edges[e][::-1]
    back = x.shortest_path(end, start, _in_tree(x, structure))
    return EdgePath(start, [(e, d)] + back)


def based_loop(x, v, structure, base=0):
    cyc = characteristic_cycle(x, v, structure, base)
    inside = _in_tree(x, structure)
    there = x.shortest_path(base, cyc.start, inside)
    back = x.shortest_path(cyc.start, base, inside)
    return EdgePath(base, there + cyc.steps + back)


def read_word(x, steps, structure):
    """Letters read along a path, ignoring treelike hyperplanes."""
    out = []
    eh, ho = x.edge_hyperplane, x.edge_orientation
    for e, d in steps:
        h = eh[e]
        if h in structure.treelike:
            continue
        v, s = structure.labeling[h]
        out.append((v, s * ho[e] * d))
    return tuple(out)


def induced_outer_automorphism(x, f, structure=None, target=None, g=None):
    """The automorphism of A_Γ induced by the cubical automorphism ``f``.

    Loops representing generators are read with ``structure`` and their
    images with ``target`` (default: the same structure). The result is a
    genuine automorphism representing the outer class.
    """
    g = x.graph if g is None else g
    structure = natural_structure(x) if structure is None else structure
    target = structure if target is None else target
    imgs = {v: read_word(x, f(based_loop(x, v, structure).steps), target) for v in g.vertices}
    finv = inverse_map(f)
    back = {v: read_word(x, finv(based_loop(x, v, target).steps), structure) for v in g.vertices}
    delta = x.shortest_path(0, f.vmap[0], _in_tree(x, target))
    u = read_word(x, finv(delta), structure)
    ui = word_inverse(u)
    invs = {v: ui + back[v] + u for v in g.vertices}
    return RaagAutomorphism(g, imgs, invs)


def automorphism_group(x):
    return x.automorphisms()


def _vertex_label(x, e):
    lab = x.edge_labels[e]
    if lab is not None and lab[0] == "V":
        return (lab, True)
    return (("P",), False)


def isomorphism(x, y, labeled=False):
    """Cubical isomorphism x -> y; ``labeled`` also matches oriented vertex labels."""
    return x.isomorphism(y, _vertex_label if labeled else None)


def certificate(x):
    """Isomorphism invariant used to bucket complexes before exact comparison."""
    return x.invariant()


def hyperplane_summary(x, structure=None):
    structure = natural_structure(x) if structure is None else structure
    out = []
    for h in range(len(x.hyperplanes)):
        if h in structure.treelike:
            out.append("T")
        else:
            v, s = structure.labeling[h]
            out.append(fmt_signed((v, s)))
    return out
