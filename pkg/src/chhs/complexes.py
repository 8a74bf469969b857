"""Finite flag simplicial complexes and their link calculus.

A flag complex is stored as its 1-skeleton; simplices are exactly the
cliques of that graph.  Vertices are string labels, ordered by plain
string comparison, and a simplex is canonically a sorted duplicate-free
tuple of labels.  The empty tuple is a simplex of every complex.

Internally vertices are indices into the sorted label list and vertex
sets are integer bitmasks, which keeps link/saturation calculus exact
and fast.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

from .errors import (
    CapExceeded,
    DuplicateEdge,
    DuplicateVertex,
    LoopEdge,
    NotASimplex,
    UnknownVertex,
)

MAX_MAXIMAL_SIMPLICES = 100_000
MAX_CLIQUES = 2_000_000

Simplex = tuple  # canonical form: sorted duplicate-free tuple of labels


def bits(mask: int):
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


@dataclass(frozen=True)
class SimplexClass:
    """A link-equivalence class of non-maximal simplices.

    Two simplices are equivalent when they have the same link; the class is
    identified by that link (its canonical sorted vertex tuple is the
    fingerprint).  ``representative`` is the member with fewest vertices,
    lexicographically least among those.
    """

    representative: Simplex
    link: Simplex
    saturation: Simplex
    colevel: Optional[int] = None

    @property
    def key(self) -> str:
        return "|".join(self.representative)


class FlagComplex:
    """A finite flag simplicial complex, given by its 1-skeleton."""

    def __init__(self, labels, adj, max_maximal=MAX_MAXIMAL_SIMPLICES,
                 max_cliques=MAX_CLIQUES):
        self.labels: tuple[str, ...] = tuple(labels)
        self.index: dict[str, int] = {v: i for i, v in enumerate(self.labels)}
        self.adj: tuple[int, ...] = tuple(adj)
        self.n = len(self.labels)
        self.full_mask = (1 << self.n) - 1
        self.max_maximal = max_maximal
        self.max_cliques = max_cliques
        self._cache: dict = {}

    # -- construction -------------------------------------------------

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable, **caps) -> "FlagComplex":
        """Build the flag complex on the given graph.

        Raises UnknownVertex / LoopEdge / DuplicateEdge / DuplicateVertex on
        malformed input.  Maximal simplices are enumerated eagerly so the
        clique cap is enforced up front.
        """
        vlist = [str(v) for v in vertices]
        if len(set(vlist)) != len(vlist):
            seen = set()
            dup = next(v for v in vlist if v in seen or seen.add(v))
            raise DuplicateVertex(f"duplicate vertex label {dup!r}")
        labels = tuple(sorted(vlist))
        index = {v: i for i, v in enumerate(labels)}
        adj = [0] * len(labels)
        seen_edges = set()
        for e in edges:
            u, v = e
            u, v = str(u), str(v)
            if u not in index or v not in index:
                missing = u if u not in index else v
                raise UnknownVertex(f"edge endpoint {missing!r} not declared")
            if u == v:
                raise LoopEdge(f"loop at {u!r}")
            key = (min(u, v), max(u, v))
            if key in seen_edges:
                raise DuplicateEdge(f"duplicate edge {key}")
            seen_edges.add(key)
            i, j = index[u], index[v]
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        cx = cls(labels, adj, **caps)
        cx.maximal_simplices  # enforce the cap eagerly
        return cx

    def induced(self, vertex_set) -> "FlagComplex":
        """Full subcomplex on the given vertices, as its own complex."""
        mask = vertex_set if isinstance(vertex_set, int) else self.mask_of(vertex_set)
        keep = [i for i in bits(mask)]
        labels = tuple(self.labels[i] for i in keep)
        pos = {i: p for p, i in enumerate(keep)}
        adj = [0] * len(keep)
        for p, i in enumerate(keep):
            m = self.adj[i] & mask
            for j in bits(m):
                adj[p] |= 1 << pos[j]
        return FlagComplex(labels, adj, self.max_maximal, self.max_cliques)

    # -- masks and canonical forms ------------------------------------

    def mask_of(self, verts) -> int:
        m = 0
        for v in verts:
            i = self.index.get(str(v))
            if i is None:
                raise UnknownVertex(f"unknown vertex {v!r}")
            m |= 1 << i
        return m

    def labels_of(self, mask: int) -> Simplex:
        return tuple(self.labels[i] for i in bits(mask))

    def simplex_mask(self, verts) -> int:
        """Validate ``verts`` as a simplex and return its bitmask."""
        vl = [str(v) for v in verts]
        if len(set(vl)) != len(vl):
            raise NotASimplex(f"duplicate vertices in {vl}")
        mask = self.mask_of(vl)
        if not self.is_clique(mask):
            raise NotASimplex(f"{tuple(sorted(vl))} is not a clique")
        return mask

    def canonical(self, verts) -> Simplex:
        return self.labels_of(self.simplex_mask(verts))

    def is_clique(self, mask: int) -> bool:
        for i in bits(mask):
            if mask & ~(self.adj[i] | (1 << i)):
                return False
        return True

    # -- links, stars, joins ------------------------------------------

    def link_mask(self, mask: int) -> int:
        """Vertices outside ``mask`` adjacent to every vertex of ``mask``.

        For a simplex this is the link; the same formula defines the link
        of an arbitrary induced subcomplex, and link_mask(0) is all of X.
        """
        out = self.full_mask & ~mask
        for i in bits(mask):
            out &= self.adj[i]
        return out

    def link(self, simplex) -> "Subcomplex":
        mask = self.simplex_mask(simplex)
        return Subcomplex(self, self.link_mask(mask))

    def star(self, simplex) -> "Subcomplex":
        mask = self.simplex_mask(simplex)
        return Subcomplex(self, self.link_mask(mask) | mask)

    def join(self, k: "Subcomplex", l: "Subcomplex") -> "Subcomplex":
        """Join of disjoint fully-adjacent induced subcomplexes."""
        if k.parent is not self or l.parent is not self:
            raise NotASimplex("join factors must live in this complex")
        if k.mask & l.mask:
            raise NotASimplex("join factors must be disjoint")
        for i in bits(k.mask):
            if l.mask & ~self.adj[i]:
                raise NotASimplex("join factors must be fully adjacent")
        return Subcomplex(self, k.mask | l.mask)

    def is_maximal(self, mask: int) -> bool:
        return self.link_mask(mask) == 0 and (mask != 0 or self.n == 0)

    # -- clique enumeration --------------------------------------------

    @cached_property
    def maximal_simplices(self) -> tuple[int, ...]:
        """Masks of the inclusion-maximal cliques, sorted by label tuple.

        Isolated vertices count (they are 0-dimensional maximal simplices).
        Pivoting Bron-Kerbosch; hard CapExceeded beyond the configured cap.
        """
        adj = self.adj
        out: list[int] = []

        def expand(r: int, p: int, x: int):
            if not p and not x:
                out.append(r)
                if len(out) > self.max_maximal:
                    raise CapExceeded(
                        f"more than {self.max_maximal} maximal simplices")
                return
            pool = p | x
            pivot = max(bits(pool), key=lambda i: popcount(adj[i] & p))
            cand = p & ~adj[pivot]
            for v in bits(cand):
                b = 1 << v
                expand(r | b, p & adj[v], x & adj[v])
                p &= ~b
                x |= b

        if self.n:
            expand(0, self.full_mask, 0)
        return tuple(sorted(out, key=self.labels_of))

    @cached_property
    def maximal_index(self) -> dict[int, int]:
        return {m: i for i, m in enumerate(self.maximal_simplices)}

    @cached_property
    def cliques(self) -> tuple[int, ...]:
        """All cliques (simplices) including the empty one, each exactly once,
        sorted by (size, label tuple)."""
        out = [0]

        def rec(r: int, cand: int):
            for v in bits(cand):
                nr = r | (1 << v)
                out.append(nr)
                if len(out) > self.max_cliques:
                    raise CapExceeded(f"more than {self.max_cliques} cliques")
                higher = self.adj[v] & cand & ~((1 << (v + 1)) - 1)
                if higher:
                    rec(nr, higher)

        rec(0, self.full_mask)
        return tuple(sorted(out, key=lambda m: (popcount(m), self.labels_of(m))))

    def cliques_within(self, region: int):
        """All cliques (including the empty one) inside the vertex set
        ``region``, each exactly once."""
        yield 0
        stack = [(0, region)]
        while stack:
            r, cand = stack.pop()
            for v in bits(cand):
                nr = r | (1 << v)
                yield nr
                higher = self.adj[v] & cand & ~((1 << (v + 1)) - 1)
                if higher:
                    stack.append((nr, higher))

    # -- saturation and classes ----------------------------------------

    def saturation_mask(self, mask: int) -> int:
        """Union of the vertex sets of all simplices with the same link.

        Candidates are the cliques inside Lk(Lk(mask)), which is where any
        equivalent simplex must live; the link-fingerprint test finishes
        the job.
        """
        target = self.link_mask(mask)
        region = self.link_mask(target)
        sat = 0
        for c in self.cliques_within(region):
            if self.link_mask(c) == target:
                sat |= c
        return sat

    def saturation(self, simplex) -> Simplex:
        return self.labels_of(self.saturation_mask(self.simplex_mask(simplex)))

    @cached_property
    def simplex_classes(self) -> tuple[SimplexClass, ...]:
        """The index set: link-equivalence classes of non-maximal simplices.

        Deterministic ordering by (representative size, representative).
        The class of the empty simplex is always present when X is nonempty.
        """
        groups: dict[int, list[int]] = {}
        for c in self.cliques:
            lm = self.link_mask(c)
            if lm == 0:
                continue  # maximal
            groups.setdefault(lm, []).append(c)
        classes = []
        for lm, members in groups.items():
            rep = min(members, key=lambda m: (popcount(m), self.labels_of(m)))
            sat = 0
            for m in members:
                sat |= m
            classes.append(SimplexClass(
                representative=self.labels_of(rep),
                link=self.labels_of(lm),
                saturation=self.labels_of(sat),
            ))
        classes.sort(key=lambda c: (len(c.representative), c.representative))
        return tuple(classes)

    @cached_property
    def class_by_link(self) -> dict[int, SimplexClass]:
        return {self.mask_of(c.link): c for c in self.simplex_classes}

    def class_of(self, simplex) -> SimplexClass:
        mask = self.simplex_mask(simplex)
        lm = self.link_mask(mask)
        try:
            return self.class_by_link[lm]
        except KeyError:
            raise NotASimplex(f"{tuple(simplex)} is maximal; it has no class")

    # -- complexity -----------------------------------------------------

    @cached_property
    def complexity(self) -> tuple[int, int]:
        """(n, dim): n is the longest strictly increasing chain of links
        over all simplices (maximal simplices contribute the empty link,
        the empty simplex contributes all of X); dim is the top simplex
        dimension.  Always dim + 2 <= n on nonempty complexes.
        """
        links = sorted({self.link_mask(c) for c in self.cliques},
                       key=lambda m: (popcount(m), m))
        best: dict[int, int] = {}
        for i, m in enumerate(links):
            b = 1
            for p in links[:i]:
                if p != m and p & ~m == 0:
                    b = max(b, best[p] + 1)
            best[m] = b
        n = max(best.values(), default=0)
        dim = max((popcount(m) for m in self.maximal_simplices), default=0) - 1
        return n, dim

    # -- misc -----------------------------------------------------------

    def edge_labels(self) -> list[tuple[str, str]]:
        out = []
        for i in range(self.n):
            for j in bits(self.adj[i] & ~((1 << (i + 1)) - 1)):
                out.append((self.labels[i], self.labels[j]))
        return out

    def maximal_key(self, mask: int) -> str:
        return "|".join(self.labels_of(mask))

    def __repr__(self):
        return (f"FlagComplex(|V|={self.n}, |E|={sum(popcount(a) for a in self.adj)//2}, "
                f"|maximal|={len(self.maximal_simplices)})")


@dataclass(frozen=True)
class Subcomplex:
    """A full (induced) subcomplex of a parent flag complex."""

    parent: FlagComplex
    mask: int

    @property
    def vertices(self) -> Simplex:
        return self.parent.labels_of(self.mask)

    def as_complex(self) -> FlagComplex:
        return self.parent.induced(self.mask)

    def __eq__(self, other):
        if isinstance(other, Subcomplex):
            return self.parent is other.parent and self.mask == other.mask
        return NotImplemented

    def __hash__(self):
        return hash((id(self.parent), self.mask))


def build_flag_complex(vertices, edges, **caps) -> FlagComplex:
    """Flag complex on the given graph; see FlagComplex.build."""
    return FlagComplex.build(vertices, edges, **caps)


def link(x: FlagComplex, simplex) -> Subcomplex:
    return x.link(simplex)


def saturation(x: FlagComplex, simplex) -> Simplex:
    return x.saturation(simplex)


def simplex_classes(x: FlagComplex) -> tuple[SimplexClass, ...]:
    return x.simplex_classes


def complexity(x: FlagComplex) -> tuple[int, int]:
    return x.complexity
