"""Instance generators: amalgam balls, blow-ups, and a small library.

The amalgam generator truncates the (infinite) amalgamated product of two
finite groups over a common subgroup to a word ball and builds the flag
complex whose vertices are group elements and cosets.  Boundary vertices
are flagged; the structural facts about links and maximal simplices hold
for interior vertices, and only those are asserted by the test-suite.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from .complexes import FlagComplex, build_flag_complex
from .errors import (
    BadParameters,
    InvalidEmbedding,
    OverlappingBlobs,
)
from .spaces import XGraph


# -- amalgamated products -----------------------------------------------


@dataclass(frozen=True)
class AmalgamSpec:
    """Finite groups A and B as multiplication tables (index 0 is the
    identity), embeddings of a common subgroup C into each, and the word
    ball radius."""

    a_table: tuple
    b_table: tuple
    c_into_a: tuple
    c_into_b: tuple
    radius: int

    @classmethod
    def make(cls, a_table, b_table, c_into_a, c_into_b, radius) -> "AmalgamSpec":
        spec = cls(tuple(map(tuple, a_table)), tuple(map(tuple, b_table)),
                   tuple(c_into_a), tuple(c_into_b), int(radius))
        spec.validate()
        return spec

    def validate(self):
        if self.radius < 1:
            raise BadParameters("radius must be >= 1")
        for table in (self.a_table, self.b_table):
            n = len(table)
            if any(len(r) != n for r in table):
                raise InvalidEmbedding("multiplication table is not square")
            if any(table[0][i] != i or table[i][0] != i for i in range(n)):
                raise InvalidEmbedding("index 0 must be the identity")
        k = len(self.c_into_a)
        if len(self.c_into_b) != k:
            raise InvalidEmbedding("subgroup images have different sizes")
        if len(set(self.c_into_a)) != k or len(set(self.c_into_b)) != k:
            raise InvalidEmbedding("subgroup embeddings must be injective")
        if self.c_into_a[0] != 0 or self.c_into_b[0] != 0:
            raise InvalidEmbedding("identity of C must map to the identities")
        # derive C's multiplication from its image in A; it must agree in B
        inv_a = {a: i for i, a in enumerate(self.c_into_a)}
        for i in range(k):
            for j in range(k):
                prod_a = self.a_table[self.c_into_a[i]][self.c_into_a[j]]
                if prod_a not in inv_a:
                    raise InvalidEmbedding("image of C in A is not a subgroup")
                cij = inv_a[prod_a]
                if self.b_table[self.c_into_b[i]][self.c_into_b[j]] != self.c_into_b[cij]:
                    raise InvalidEmbedding("embeddings of C do not agree")
        if k == len(self.a_table) or k == len(self.b_table):
            raise InvalidEmbedding("C must be a proper subgroup of both factors")


class _Amalgam:
    """Normal forms and generator multiplication for A *_C B.

    Elements are (syllables, c) with alternating transversal syllables
    t_1 ... t_k followed by a C-element: left cosets t * C with canonical
    minimal-index transversal representatives.
    """

    A, B = 0, 1

    def __init__(self, spec: AmalgamSpec):
        self.spec = spec
        self.tables = (spec.a_table, spec.b_table)
        self.c_images = (spec.c_into_a, spec.c_into_b)
        self.c_inv = ({a: i for i, a in enumerate(spec.c_into_a)},
                      {b: i for i, b in enumerate(spec.c_into_b)})
        self.coset_rep = []
        for side in (self.A, self.B):
            table = self.tables[side]
            image = set(self.c_images[side])
            rep = {}
            for g in range(len(table)):
                members = sorted(table[g][c] for c in self.c_images[side])
                rep[g] = min(members)
            self.coset_rep.append(rep)

    def identity(self):
        return ((), 0)

    def _decompose(self, side, g):
        """g = t * c with t the canonical left-coset rep; returns (t, c_idx)."""
        table = self.tables[side]
        t = self.coset_rep[side][g]
        t_inv = next(h for h in range(len(table)) if table[t][h] == 0)
        # solve t * x = g  =>  x = t^{-1} g, which lies in the image of C
        x = table[t_inv][g]
        return t, self.c_inv[side][x]

    def mul_gen(self, elem, side, g):
        """Right-multiply a normal form by the factor element g (index) of
        the given side; g may be any element, including C-image ones."""
        syls, c = elem
        table = self.tables[side]
        ca = table[self.c_images[side][c]][g]  # phi(c) * g inside the factor
        if syls and syls[-1][0] == side:
            merged = table[syls[-1][1]][ca]
            t, c2 = self._decompose(side, merged)
            if t == 0:
                return (syls[:-1], c2)
            return (syls[:-1] + ((side, t),), c2)
        t, c2 = self._decompose(side, ca)
        if t == 0:
            return (syls, c2)
        return (syls + ((side, t),), c2)

    def generators(self):
        """(side, g) for every nontrivial element of A and of B, with the
        C-image elements of B dropped (they equal their A counterparts)."""
        out = [(self.A, g) for g in range(1, len(self.tables[self.A]))]
        c_image_b = set(self.spec.c_into_b)
        out += [(self.B, g) for g in range(1, len(self.tables[self.B]))
                if g not in c_image_b]
        return out

    def ball(self, radius):
        """Word lengths w.r.t. all nontrivial factor elements, out to radius."""
        gens = self.generators()
        dist = {self.identity(): 0}
        frontier = [self.identity()]
        for level in range(1, radius + 1):
            nxt = []
            for e in frontier:
                for side, g in gens:
                    ne = self.mul_gen(e, side, g)
                    if ne not in dist:
                        dist[ne] = level
                        nxt.append(ne)
            frontier = nxt
        return dist

    def coset(self, elem, side):
        """The full coset elem * factor, as a frozenset of normal forms."""
        return frozenset(self.mul_gen(elem, side, g)
                         for g in range(len(self.tables[side])))


@dataclass(frozen=True)
class AmalgamComplex:
    complex: FlagComplex
    suggested_w: XGraph
    element_of: dict          # vertex label -> normal form, for group vertices
    coset_of: dict            # vertex label -> (side, frozenset of normal forms)
    word_length: dict         # element label -> word length
    interior_elements: tuple  # labels with word length <= radius - 1
    interior_cosets: tuple    # coset labels whose coset lies inside the ball


def gen_amalgam(spec: AmalgamSpec) -> AmalgamComplex:
    """The truncated amalgam complex: group-element vertices joined to the
    two cosets containing them, coset vertices joined when the cosets
    intersect.  The suggested X-graph is the Cayley graph on the canonical
    generating set, restricted to the ball."""
    spec.validate()
    am = _Amalgam(spec)
    ball = am.ball(spec.radius)
    elems = sorted(ball, key=lambda e: (ball[e], e))
    elabel = {e: f"g{i:04d}" for i, e in enumerate(elems)}

    cosets = {}
    for e in elems:
        for side, prefix in ((am.A, "A"), (am.B, "B")):
            cs = am.coset(e, side)
            cosets.setdefault((side, cs), []).append(e)
    def coset_sort_key(item):
        (side, cs), members = item
        return (side, min((ball[m], m) for m in members))
    clabel = {}
    counters = [0, 0]
    for (side, cs), members in sorted(cosets.items(), key=coset_sort_key):
        prefix = "A" if side == am.A else "B"
        clabel[(side, cs)] = f"{prefix}{counters[side]:04d}"
        counters[side] += 1

    vertices = list(elabel.values()) + list(clabel.values())
    edges = []
    for e in elems:
        for side in (am.A, am.B):
            edges.append((elabel[e], clabel[(side, am.coset(e, side))]))
    a_cosets = [(cs, lab) for (side, cs), lab in clabel.items() if side == am.A]
    b_cosets = [(cs, lab) for (side, cs), lab in clabel.items() if side == am.B]
    for cs_a, lab_a in a_cosets:
        for cs_b, lab_b in b_cosets:
            if cs_a & cs_b:
                edges.append((lab_a, lab_b))
    cx = build_flag_complex(vertices, edges)

    # suggested W: Cayley edges between the triangle simplices of ball elements
    tri_index = {}
    for e in elems:
        tri = cx.mask_of((elabel[e],
                          clabel[(am.A, am.coset(e, am.A))],
                          clabel[(am.B, am.coset(e, am.B))]))
        mi = cx.maximal_index.get(tri)
        if mi is not None:
            tri_index[e] = mi
    w_pairs = set()
    for e in elems:
        if e not in tri_index:
            continue
        for side, g in am.generators():
            ne = am.mul_gen(e, side, g)
            if ne in tri_index and ne != e:
                i, j = tri_index[e], tri_index[ne]
                w_pairs.add((min(i, j), max(i, j)))
    for e in elems:  # C-edges: multiplication by nontrivial C elements
        if e not in tri_index:
            continue
        for c in range(1, len(spec.c_into_a)):
            ne = am.mul_gen(e, am.A, spec.c_into_a[c])
            if ne in tri_index and ne != e:
                i, j = tri_index[e], tri_index[ne]
                w_pairs.add((min(i, j), max(i, j)))
    w = XGraph.from_pairs(cx, sorted(w_pairs))

    element_of = {elabel[e]: e for e in elems}
    coset_of = {lab: (side, cs) for (side, cs), lab in clabel.items()}
    word_length = {elabel[e]: ball[e] for e in elems}
    interior_elements = tuple(sorted(
        elabel[e] for e in elems if ball[e] <= spec.radius - 1))
    interior_cosets = tuple(sorted(
        lab for (side, cs), lab in clabel.items() if all(m in ball for m in cs)))
    return AmalgamComplex(cx, w, element_of, coset_of, word_length,
                          interior_elements, interior_cosets)


# -- blow-ups -------------------------------------------------------------


@dataclass(frozen=True)
class BlowupSpec:
    base_vertices: tuple
    base_edges: tuple
    blobs: dict  # base vertex -> tuple of new vertex labels

    @classmethod
    def make(cls, base_vertices, base_edges, blobs) -> "BlowupSpec":
        return cls(tuple(str(v) for v in base_vertices),
                   tuple((str(u), str(v)) for u, v in base_edges),
                   {str(k): tuple(str(x) for x in vs) for k, vs in blobs.items()})


@dataclass(frozen=True)
class BlowupComplex:
    complex: FlagComplex
    collapse: dict  # X vertex label -> base vertex label


def gen_blowup(spec: BlowupSpec) -> BlowupComplex:
    """Blow up each base vertex into a cone over its assigned set, join
    blobs of adjacent base vertices completely, take the flag complex, and
    emit the collapse map back to the base (verified to be a morphism)."""
    base = set(spec.base_vertices)
    for k in spec.blobs:
        if k not in base:
            raise BadParameters(f"blob key {k!r} is not a base vertex")
    used = set(spec.base_vertices)
    for k, vs in spec.blobs.items():
        for v in vs:
            if v in used:
                raise OverlappingBlobs(f"vertex {v!r} used twice")
            used.add(v)
    blob = {g: (g,) + spec.blobs.get(g, ()) for g in spec.base_vertices}
    vertices = [v for g in spec.base_vertices for v in blob[g]]
    edges = []
    for g in spec.base_vertices:
        for v in spec.blobs.get(g, ()):
            edges.append((g, v))
    base_edge_set = set()
    for u, v in spec.base_edges:
        if u not in base or v not in base:
            raise BadParameters(f"base edge {(u, v)} off the base graph")
        base_edge_set.add((min(u, v), max(u, v)))
    for u, v in sorted(base_edge_set):
        for a in blob[u]:
            for b in blob[v]:
                edges.append((a, b))
    cx = build_flag_complex(vertices, edges)
    collapse = {v: g for g in spec.base_vertices for v in blob[g]}
    for a, b in cx.edge_labels():
        ca, cb = collapse[a], collapse[b]
        if ca != cb and (min(ca, cb), max(ca, cb)) not in base_edge_set:
            raise BadParameters("collapse map is not a graph morphism")
    return BlowupComplex(cx, collapse)


# -- library ----------------------------------------------------------------


def _codim1_shared(cx: FlagComplex):
    ms = cx.maximal_simplices
    pairs = []
    for i in range(len(ms)):
        for j in range(i + 1, len(ms)):
            inter = ms[i] & ms[j]
            k = inter.bit_count()
            if k == ms[i].bit_count() - 1 and k == ms[j].bit_count() - 1:
                pairs.append((i, j))
    return pairs


def _apply_w_rule(cx: FlagComplex, w_rule: str) -> XGraph:
    if w_rule == "none":
        return XGraph.empty(cx)
    if w_rule == "complete":
        return XGraph.complete(cx)
    if w_rule == "shared_codim1_face":
        return XGraph.from_pairs(cx, _codim1_shared(cx))
    raise BadParameters(f"unknown w_rule {w_rule!r}")


def gen_library(kind: str, w_rule: str = "none", **params):
    """Deterministic library instances: path(n), cycle(n), octahedron(k),
    random_flag(n, p, seed), join(parts).  Returns (FlagComplex, XGraph)."""
    if kind == "path":
        n = int(params.pop("n"))
        if n < 1 or params:
            raise BadParameters("path needs n >= 1")
        verts = [f"v{i:02d}" for i in range(n)]
        edges = [(verts[i], verts[i + 1]) for i in range(n - 1)]
    elif kind == "cycle":
        n = int(params.pop("n"))
        if n < 3 or params:
            raise BadParameters("cycle needs n >= 3")
        verts = [f"v{i:02d}" for i in range(n)]
        edges = [(verts[i], verts[(i + 1) % n]) for i in range(n)]
    elif kind == "octahedron":
        k = int(params.pop("k"))
        if k < 1 or params:
            raise BadParameters("octahedron needs k >= 1")
        verts = [f"{c}{i}" for i in range(k) for c in "ab"]
        edges = []
        for i, u in enumerate(verts):
            for v in verts[i + 1:]:
                if u[1:] != v[1:]:
                    edges.append((u, v))
    elif kind == "random_flag":
        n = int(params.pop("n"))
        p = float(params.pop("p"))
        seed = int(params.pop("seed"))
        if n < 0 or not (0.0 <= p <= 1.0) or params:
            raise BadParameters("random_flag needs n >= 0 and 0 <= p <= 1")
        rng = random.Random(seed)
        verts = [f"v{i:03d}" for i in range(n)]
        edges = []
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < p:
                    edges.append((verts[i], verts[j]))
    elif kind == "join":
        parts = params.pop("parts")
        if not parts or params:
            raise BadParameters("join needs a nonempty parts list")
        verts, edges = [], []
        seen = set()
        groups = []
        for pv, pe in parts:
            pv = [str(v) for v in pv]
            if seen & set(pv):
                raise BadParameters("join parts must have disjoint vertex sets")
            seen |= set(pv)
            verts += pv
            edges += [(str(u), str(v)) for u, v in pe]
            groups.append(pv)
        for gi in range(len(groups)):
            for gj in range(gi + 1, len(groups)):
                for u in groups[gi]:
                    for v in groups[gj]:
                        edges.append((u, v))
    else:
        raise BadParameters(f"unknown kind {kind!r}")
    cx = build_flag_complex(verts, edges)
    return cx, _apply_w_rule(cx, w_rule)
