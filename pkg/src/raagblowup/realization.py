"""Search for realizations of finite subgroups of U⁰(A_Γ) by cubical
automorphisms of Γ-complexes, and the finite catalog of Γ-complex types."""

from __future__ import annotations

import time

from .cube_blowup import (BlowupStructure, based_loop, build_blowup, duplicate_hyperplane,
                          induced_outer_automorphism, multiset_is_legal, read_word, recover_partitions, structures)
from .cubes import CubicalMap, compose_maps, identity_map, inverse_map
from .graph_core import graph_from_json, graph_to_json
from .partitions import (all_partitions, collection_orbit_representatives, enumerate_compatible_collections,
                         partition_from_json)
from .raag_algebra import (OuterWitness, RaagAutomorphism, compose, default_radius, fmt_word, inverse,
                           outer_equal_bounded, parse_word)


# ---- catalog of types ----

class CatalogEntry:
    def __init__(self, complex, collection, aut_order):
        self.complex = complex
        self.collection = list(collection)
        self.aut_order = aut_order

    def __repr__(self):
        return f"CatalogEntry(|Π|={len(self.collection)}, {self.complex!r}, |Aut|={self.aut_order})"

    def to_json(self):
        return {"pi": [p.to_json() for p in self.collection], "vertices": self.complex.n_vertices,
                "edges": len(self.complex.edges), "squares": len(self.complex.squares),
                "aut_order": self.aut_order}


class TypeCatalog:
    def __init__(self, graph, entries, complete, max_entries):
        self.graph = graph
        self.entries = entries
        self.complete = complete
        self.max_entries = max_entries

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def to_json(self):
        return {"graph": graph_to_json(self.graph), "max_entries": self.max_entries,
                "complete": self.complete, "types": [e.to_json() for e in self.entries]}


def _iter_types(g, max_entries, deadline=None, with_aut=True):
    """Yield catalog entries one by one; stops quietly at the deadline."""
    parts = all_partitions(g)
    max_entries = len(parts) if max_entries is None else max_entries
    if max_entries < 0:
        raise ValueError("max_entries must be nonnegative")
    cols = enumerate_compatible_collections(g, max_entries, parts)
    # signed graph automorphisms carry blowups to isomorphic blowups
    reps = [c for c, _ in collection_orbit_representatives(g, cols, parts)]
    buckets = {}
    for c in reps:
        if deadline is not None and time.monotonic() > deadline:
            return
        x = build_blowup(g, c, check=False)
        key = x.invariant()
        if any(x.isomorphism(e.complex) is not None for e in buckets.get(key, [])):
            continue
        e = CatalogEntry(x, c, len(x.automorphisms()) if with_aut else None)
        buckets.setdefault(key, []).append(e)
        yield e


def enumerate_complex_types(g, max_entries=None, time_limit=None, with_aut=True):
    """Every blowup from a compatible collection of at most ``max_entries``
    partitions, up to isomorphism (labels forgotten)."""
    parts = all_partitions(g)
    max_entries = len(parts) if max_entries is None else max_entries
    deadline = None if time_limit is None else time.monotonic() + time_limit
    entries = list(_iter_types(g, max_entries, deadline, with_aut))
    complete = deadline is None or time.monotonic() <= deadline
    return TypeCatalog(g, entries, complete, max_entries)


def enumerate_types_brute(g, max_entries=None):
    """Oracle: no symmetry reduction, pairwise isomorphism tests only."""
    parts = all_partitions(g)
    max_entries = len(parts) if max_entries is None else max_entries
    found = []
    for c in enumerate_compatible_collections(g, max_entries, parts):
        x = build_blowup(g, c, check=False)
        if not any(x.isomorphism(y) is not None for y in found):
            found.append(x)
    return found


# ---- problems and certificates ----

def _parse_relation(rel):
    """'s t s^-1' or a list of names -> list of (name, ±1)."""
    toks = rel.split() if isinstance(rel, str) else list(rel)
    out = []
    for t in toks:
        if t.endswith("^-1"):
            out.append((t[:-3], -1))
        else:
            out.append((t, 1))
    return out


class RealizationProblem:
    def __init__(self, g, targets, relations=(), max_entries=None, radius=None, time_limit=60.0,
                 subdivide=True):
        self.graph = g
        self.targets = dict(targets)
        if not self.targets:
            raise ValueError("no targets")
        for name, a in self.targets.items():
            if not isinstance(a, RaagAutomorphism) or a.graph != g:
                raise ValueError(f"target {name} is not an automorphism of A_Γ")
            a.validate()
        self.relations = [_parse_relation(r) for r in relations]
        for rel in self.relations:
            for name, _ in rel:
                if name not in self.targets:
                    raise ValueError(f"relation uses unknown generator {name}")
        self.max_entries = max_entries
        self.radius = default_radius(*self.targets.values()) if radius is None else radius
        self.time_limit = time_limit
        self.subdivide = subdivide

    def to_json(self):
        return {"graph": graph_to_json(self.graph),
                "targets": {n: a.to_json() for n, a in sorted(self.targets.items())},
                "relations": [" ".join(n + ("^-1" if e == -1 else "") for n, e in r) for r in self.relations],
                "max_entries": self.max_entries, "radius": self.radius, "time_limit": self.time_limit,
                "subdivide": self.subdivide}


def _images_from_json(g, obj):
    return {v: parse_word(obj[v]) if obj.get(v, v) else () for v in g.vertices}


def target_from_images(g, images):
    """Build an automorphism from images, finding the inverse by search over short words."""
    from .raag_algebra import conjugators, normalize, _subst

    imgs = {v: normalize(g, images.get(v, ((v, 1),))) for v in g.vertices}
    radius = max([len(w) for w in imgs.values()] + [1]) + 1
    words = list(conjugators(g, radius))
    invs = {}
    for v in g.vertices:
        for w in words:
            if _subst(g, imgs, w) == ((v, 1),):
                invs[v] = w
                break
        else:
            raise ValueError(f"could not invert the map near {v}; supply inverse images")
    return RaagAutomorphism(g, imgs, invs)


def problem_from_json(obj):
    try:
        g = graph_from_json(obj["graph"])
        targets = {}
        for name, t in obj["targets"].items():
            imgs = _images_from_json(g, t if "images" not in t else t["images"])
            if isinstance(t, dict) and "inverse" in t:
                targets[name] = RaagAutomorphism(g, imgs, _images_from_json(g, t["inverse"]))
            else:
                targets[name] = target_from_images(g, imgs)
        return RealizationProblem(g, targets, obj.get("relations", []), obj.get("max_entries"),
                                  obj.get("radius"), obj.get("time_limit", 60.0), obj.get("subdivide", True))
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValueError(f"bad problem JSON: {exc}") from None


class RealizationCertificate:
    def __init__(self, graph, complex, structure, assignment, witnesses, targets, relations, radius,
                 marking=None):
        self.graph = graph
        self.complex = complex
        self.structure = structure
        self.assignment = dict(assignment)
        self.witnesses = dict(witnesses)
        self.targets = dict(targets)
        self.relations = list(relations)
        self.radius = radius
        self.marking = marking

    def __repr__(self):
        return f"RealizationCertificate({self.complex!r}, {sorted(self.assignment)})"

    def to_json(self):
        x = self.complex
        st = self.structure
        return {
            "graph": graph_to_json(self.graph),
            "complex": {"vertices": x.n_vertices, "edges": [list(e) for e in x.edges],
                        "squares": [[list(s) for s in q] for q in x.squares]},
            "pi": [p.to_json() for p in getattr(x, "pi", ())] if hasattr(x, "pi") else None,
            "structure": {"treelike": sorted(st.treelike),
                          "labeling": [[h, v, s] for h, (v, s) in sorted(st.labeling.items())]},
            "assignment": {n: {"vmap": list(f.vmap), "emap": [list(e) for e in f.emap]}
                           for n, f in sorted(self.assignment.items())},
            "witnesses": {n: fmt_word(w.conjugator) for n, w in sorted(self.witnesses.items())},
            "targets": {n: {"images": a.to_json(), "inverse": {v: fmt_word(w) for v, w in a.inverse_images.items()}}
                        for n, a in sorted(self.targets.items())},
            "relations": [" ".join(n + ("^-1" if e == -1 else "") for n, e in r) for r in self.relations],
            "radius": self.radius,
            "marking": None if self.marking is None else {
                "images": self.marking.to_json(),
                "inverse": {v: fmt_word(w) for v, w in self.marking.inverse_images.items()}},
        }


def certificate_from_json(obj):
    from .cubes import CubeComplex

    try:
        g = graph_from_json(obj["graph"])
        cx = obj["complex"]
        x = CubeComplex(cx["vertices"], cx["edges"], cx["squares"])
        x.graph = g
        st = obj["structure"]
        structure = BlowupStructure(st["treelike"], {h: (v, s) for h, v, s in st["labeling"]})
        assignment = {n: CubicalMap(x, x, f["vmap"], f["emap"]) for n, f in obj["assignment"].items()}
        witnesses = {n: OuterWitness(parse_word(w)) for n, w in obj["witnesses"].items()}
        targets = {n: RaagAutomorphism(g, _images_from_json(g, t["images"]), _images_from_json(g, t["inverse"]),
                                       check=False)
                   for n, t in obj["targets"].items()}
        relations = [_parse_relation(r) for r in obj.get("relations", [])]
        if obj.get("pi") is not None:
            x.pi = [partition_from_json(g, p) for p in obj["pi"]]
        m = obj.get("marking")
        if m is not None:
            m = RaagAutomorphism(g, _images_from_json(g, m["images"]), _images_from_json(g, m["inverse"]))
        return RealizationCertificate(g, x, structure, assignment, witnesses, targets, relations, obj["radius"], m)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ValueError(f"bad certificate JSON: {exc}") from None


def _word_map(x, assignment, rel):
    out = identity_map(x)
    for name, e in rel:
        f = assignment[name]
        out = compose_maps(out, f if e == 1 else inverse_map(f))
    return out


def check_certificate(c):
    """(ok, reason). Re-verifies everything from scratch."""
    x, g = c.complex, c.graph
    try:
        if x.graph != g:
            return False, "complex is over a different graph"
        st = c.structure
        if st.treelike & set(st.labeling) or st.treelike | set(st.labeling) != set(range(len(x.hyperplanes))):
            return False, "structure does not cover the hyperplanes"
        from .cube_blowup import is_treelike
        if not is_treelike(x, st.treelike, g):
            return False, "treelike set does not collapse to the Salvetti complex"
        pis = recover_partitions(x, st, g)
        if not multiset_is_legal(pis, allow_subdivided=True):
            return False, "structure recovers an illegal partition multiset"
        if getattr(x, "pi", None) is not None and x.isomorphism(build_blowup(g, x.pi, check=False)) is None:
            return False, "complex does not match its stated partitions"
    except ValueError as exc:
        return False, f"invalid structure: {exc}"
    if set(c.assignment) != set(c.targets):
        return False, "assignment and targets name different generators"
    for name, f in sorted(c.assignment.items()):
        if f.source is not x or f.target is not x:
            f = CubicalMap(x, x, f.vmap, f.emap)
            c.assignment[name] = f
        bad = f.problems()
        if bad:
            return False, f"{name} is not a cubical automorphism: {bad[0]}"
    for rel in c.relations:
        if _word_map(x, c.assignment, rel) != identity_map(x):
            return False, "relation " + " ".join(n + ("^-1" if e == -1 else "") for n, e in rel) + " violated"
    for name, f in sorted(c.assignment.items()):
        w = c.witnesses.get(name)
        if w is None:
            return False, f"witness missing for {name}"
        a = _marked(induced_outer_automorphism(x, f, st, g=g), c.marking)
        if not w.verify(a, c.targets[name]):
            return False, f"witness fails for {name}"
    return True, "ok"


# ---- search ----

def _candidate_complexes(problem, deadline):
    """Catalog types, then one duplication of each hyperplane label (canonical order)."""
    seen_types = []
    for e in _iter_types(problem.graph, problem.max_entries, deadline, with_aut=False):
        seen_types.append(e)
        yield e.complex, False
    if not problem.subdivide:
        return
    for e in seen_types:
        x = e.complex
        seen = []
        for lab in sorted(set(x.edge_labels), key=repr):
            if time.monotonic() > deadline:
                return
            y = duplicate_hyperplane(x, lab)
            if any(y.isomorphism(z) is not None for z in seen):
                continue
            seen.append(y)
            yield y, True


def _search_one(problem, x, subdivided, deadline):
    g = problem.graph
    names = sorted(problem.targets)
    auts = x.automorphisms()
    for st in structures(x, g, signed=True, valid_only=True, allow_subdivided=subdivided):
        if time.monotonic() > deadline:
            return None
        options = {}
        for name in names:
            t = problem.targets[name]
            opts = []
            for f in auts:
                a = induced_outer_automorphism(x, f, st, g=g)
                w = outer_equal_bounded(g, a, t, problem.radius)
                if w is not None:
                    opts.append((f, w))
            if not opts:
                break
            options[name] = opts
        else:
            found = _assign(x, names, options, problem.relations)
            if found is not None:
                assignment = {n: f for n, (f, _) in found.items()}
                witnesses = {n: w for n, (_, w) in found.items()}
                return RealizationCertificate(g, x, st, assignment, witnesses, problem.targets,
                                              problem.relations, problem.radius)
    return None


def realize(problem, threads=1):
    """First certificate in canonical search order, or None within budget.

    With several threads the candidates are searched concurrently and the
    least-index success is returned, so the answer does not depend on timing.
    """
    deadline = time.monotonic() + problem.time_limit
    cands = _candidate_complexes(problem, deadline)
    if threads <= 1:
        for x, sub in cands:
            if time.monotonic() > deadline:
                return None
            c = _search_one(problem, x, sub, deadline)
            if c is not None:
                return c
        return None
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(lambda xs: _search_one(problem, xs[0], xs[1], deadline), list(cands)))
    return next((c for c in results if c is not None), None)


def _assign(x, names, options, relations):
    chosen = {}

    def ok():
        for rel in relations:
            if all(n in chosen for n, _ in rel):
                if _word_map(x, {n: f for n, (f, _) in chosen.items()}, rel) != identity_map(x):
                    return False
        return True

    def go(i):
        if i == len(names):
            return dict(chosen)
        for opt in options[names[i]]:
            chosen[names[i]] = opt
            if ok():
                r = go(i + 1)
                if r is not None:
                    return r
            del chosen[names[i]]
        return None

    return go(0)


def _compose_collapses(x, trace):
    vmap = list(range(x.n_vertices))
    emap = [(e, 1) for e in range(len(x.edges))]
    for _, (vm, em) in trace:
        vmap = [vm[v] for v in vmap]
        emap = [None if a is None or em[a[0]] is None else (em[a[0]][0], a[1] * em[a[0]][1]) for a in emap]
    return vmap, emap


def _lift(x, emap, steps, base):
    """A loop at ``base`` in x mapping onto ``steps`` after collapse, joined inside collapsed edges."""
    pre = {}
    for e, img in enumerate(emap):
        if img is not None and img[0] not in pre:
            pre[img[0]] = (e, img[1])
    dead = lambda e: emap[e] is None
    out = []
    here = base
    for e, d in steps:
        xe, s = pre[e]
        st = (xe, d * s)
        a, b = x.edges[xe] if st[1] == 1 else x.edges[xe][::-1]
        out += x.shortest_path(here, a, dead)
        out.append(st)
        here = b
    return out + x.shortest_path(here, base, dead)


def collapse_marking(x, sx, y, sy, vmap, emap, g):
    """Change of marking φ with target(y-marking) = φ ∘ target(x-marking) ∘ φ^-1."""
    push = lambda steps: [(emap[e][0], d * emap[e][1]) for e, d in steps if emap[e] is not None]
    phi = {v: read_word(y, push(based_loop(x, v, sx).steps), sy) for v in g.vertices}
    yb = vmap[0]
    psi = {v: read_word(x, _lift(x, emap, based_loop(y, v, sy, base=yb).steps, 0), sx) for v in g.vertices}
    return RaagAutomorphism(g, phi, psi)


def _marked(a, marking):
    if marking is None:
        return a
    return compose(inverse(marking), compose(a, marking))


def reduce_certificate(c, radius=None):
    """Collapse invariant treelike orbits and re-certify on the reduced complex.

    The collapse carries the marking along, recorded as a change of marking
    relative to a blowup structure of the reduced complex.
    """
    from .restriction_extension import ActionOnComplex, reduce_action

    g = c.graph
    radius = c.radius if radius is None else radius
    names = sorted(c.assignment)
    act = ActionOnComplex(c.complex, [(n, c.assignment[n]) for n in names], g)
    trace = []
    red = reduce_action(act, trace)
    y = red.complex
    gens = dict(red.generators)
    vmap, emap = _compose_collapses(c.complex, trace)
    for st in structures(y, g, signed=True, valid_only=True, allow_subdivided=True):
        m = collapse_marking(c.complex, c.structure, y, st, vmap, emap, g)
        if c.marking is not None:
            m = compose(m, c.marking)
        wit = {}
        for n in names:
            a = _marked(induced_outer_automorphism(y, gens[n], st, g=g), m)
            w = outer_equal_bounded(g, a, c.targets[n], radius)
            if w is None:
                break
            wit[n] = w
        else:
            return RealizationCertificate(g, y, st, gens, wit, c.targets, c.relations, radius, m), red
    raise ValueError("no structure on the reduced complex matches the targets")


# ---- finite subgroups ----

def subgroups(elements, ident):
    """All subgroups of a finite group of cubical maps, as frozensets."""
    def close(gens):
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for a in frontier:
                for b in gens:
                    c = compose_maps(b, a)
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
            frontier = nxt
        return frozenset(seen)

    found = {frozenset({ident}): ()}
    frontier = [frozenset({ident})]
    while frontier:
        nxt = []
        for h in frontier:
            gens = found[h]
            for e in elements:
                if e in h:
                    continue
                k = close(gens + (e,))
                if k not in found:
                    found[k] = gens + (e,)
                    nxt.append(k)
        frontier = nxt
    return sorted(found.items(), key=lambda kv: (len(kv[0]), sorted((f.vmap, f.emap) for f in kv[1])))


def enumerate_finite_subgroup_classes(g, max_entries=None, radius=4, time_limit=None):
    """(catalog entry, subgroup generators, induced outer images) for every
    subgroup of every type's automorphism group, merged only when the
    induced outer subgroups agree exactly (bounded witnesses)."""
    from .cube_blowup import natural_structure

    cat = enumerate_complex_types(g, max_entries, time_limit)
    out = []
    images = []
    for e in cat.entries:
        x = e.complex
        st = natural_structure(x)
        auts = x.automorphisms()
        ind = {f: induced_outer_automorphism(x, f, st, g=g) for f in auts}
        for h, gens in subgroups(auts, identity_map(x)):
            img = [ind[f] for f in sorted(h, key=lambda f: (f.vmap, f.emap))]
            classes = []
            for a in img:
                if not any(outer_equal_bounded(g, a, b, radius) is not None for b in classes):
                    classes.append(a)
            dup = False
            for prev in images:
                if len(prev) == len(classes) and all(
                        any(outer_equal_bounded(g, a, b, radius) is not None for b in prev) for a in classes):
                    dup = True
                    break
            if dup:
                continue
            images.append(classes)
            out.append((e, gens, classes))
    return out
