"""X-graphs and the spaces derived from them.

An X-graph W is a graph on the maximal simplices of a flag complex X.
From (X, W) we build the augmented graph (X plus a biclique over every
W-edge), the complements Y_Delta of saturations, the link subgraphs
C(Delta) and C_0(Delta), the induced link graphs W^Delta, and the coned
intermediate spaces interpolating between the augmented graph and Y_Delta.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .complexes import FlagComplex, SimplexClass, bits, popcount
from .errors import (
    BadLevel,
    EmptyLink,
    InternalConsistencyError,
    MaximalSimplex,
    MismatchedBase,
)
from .metric import MetricGraph


@dataclass(frozen=True)
class XGraph:
    """Graph on the maximal simplices of ``base``; edges given as a frozenset
    of sorted index pairs into base.maximal_simplices."""

    base: FlagComplex
    w_edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        m = len(self.base.maximal_simplices)
        for i, j in self.w_edges:
            if not (0 <= i < m and 0 <= j < m):
                raise MismatchedBase(f"w-edge {(i, j)} outside 0..{m - 1}")
            if i >= j:
                raise MismatchedBase(f"w-edge {(i, j)} not in sorted form")

    @classmethod
    def from_pairs(cls, base: FlagComplex, pairs) -> "XGraph":
        edges = set()
        for i, j in pairs:
            if i == j:
                raise MismatchedBase(f"loop w-edge at index {i}")
            edges.add((min(i, j), max(i, j)))
        return cls(base, frozenset(edges))

    @classmethod
    def empty(cls, base: FlagComplex) -> "XGraph":
        return cls(base, frozenset())

    @classmethod
    def complete(cls, base: FlagComplex) -> "XGraph":
        m = len(base.maximal_simplices)
        return cls(base, frozenset((i, j) for i in range(m) for j in range(i + 1, m)))

    @cached_property
    def w_adj(self) -> tuple[int, ...]:
        m = len(self.base.maximal_simplices)
        adj = [0] * m
        for i, j in self.w_edges:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return tuple(adj)

    def vertex_keys(self) -> tuple[str, ...]:
        return tuple(self.base.maximal_key(s) for s in self.base.maximal_simplices)

    def edge_keys(self) -> list[tuple[str, str]]:
        keys = self.vertex_keys()
        out = sorted((min(keys[i], keys[j]), max(keys[i], keys[j]))
                     for i, j in self.w_edges)
        return out

    def metric(self) -> MetricGraph:
        """W itself as a unit-length metric graph on canonical simplex keys."""
        keys = self.vertex_keys()
        order = sorted(range(len(keys)), key=lambda i: keys[i])
        pos = {i: p for p, i in enumerate(order)}
        adj = [0] * len(keys)
        for i, j in self.w_edges:
            adj[pos[i]] |= 1 << pos[j]
            adj[pos[j]] |= 1 << pos[i]
        return MetricGraph(tuple(keys[i] for i in order), adj)

    def __repr__(self):
        return f"XGraph(|W|={len(self.base.maximal_simplices)}, |edges|={len(self.w_edges)})"


class AugmentedGraph:
    """X's 1-skeleton plus, for every W-edge, an edge from each vertex of one
    maximal simplex to each vertex of the other.  Edges keep their origin
    (x-edge vs w-induced); the metric ignores the tags."""

    def __init__(self, x: FlagComplex, w: XGraph):
        if w.base is not x:
            raise MismatchedBase("X-graph was built over a different complex")
        self.base = x
        self.xgraph = w
        x_adj = list(x.adj)
        w_adj = [0] * x.n
        maximal = x.maximal_simplices
        for i, j in w.w_edges:
            mi, mj = maximal[i], maximal[j]
            for v in bits(mi):
                w_adj[v] |= mj & ~(1 << v)
            for v in bits(mj):
                w_adj[v] |= mi & ~(1 << v)
        self.x_adj = tuple(x_adj)
        self.w_adj = tuple(w_adj)
        self.adj = tuple(a | b for a, b in zip(x_adj, w_adj))

    @cached_property
    def metric(self) -> MetricGraph:
        return MetricGraph(self.base.labels, self.adj)

    def edge_origin(self, u: str, v: str) -> str:
        i, j = self.base.index[u], self.base.index[v]
        tag = ""
        if self.x_adj[i] >> j & 1:
            tag += "x"
        if self.w_adj[i] >> j & 1:
            tag += "w"
        return tag

    def induced_metric(self, mask: int) -> MetricGraph:
        keep = list(bits(mask))
        labels = tuple(self.base.labels[i] for i in keep)
        pos = {i: p for p, i in enumerate(keep)}
        adj = [0] * len(keep)
        for p, i in enumerate(keep):
            for j in bits(self.adj[i] & mask):
                adj[p] |= 1 << pos[j]
        return MetricGraph(labels, adj)


def build_augmented(x: FlagComplex, w: XGraph) -> AugmentedGraph:
    return AugmentedGraph(x, w)


def _augmented(x: FlagComplex, w: XGraph) -> AugmentedGraph:
    cache = x._cache.setdefault("augmented", {})
    key = id(w)
    if key not in cache:
        cache[key] = AugmentedGraph(x, w)
    return cache[key]


def _nonmaximal_mask(x: FlagComplex, simplex) -> int:
    mask = x.simplex_mask(simplex)
    if x.link_mask(mask) == 0:
        raise MaximalSimplex(f"{tuple(simplex)} is a maximal simplex")
    return mask


def y_space(x: FlagComplex, w: XGraph, simplex) -> MetricGraph:
    """Induced subgraph of the augmented graph on the complement of
    Sat(simplex).  Disconnected outputs are legal; INF propagates."""
    mask = _nonmaximal_mask(x, simplex)
    sat = x.saturation_mask(mask)
    return _augmented(x, w).induced_metric(x.full_mask & ~sat)


def c_space(x: FlagComplex, w: XGraph, simplex, variant: str = "C") -> MetricGraph:
    """The link subgraph on Lk(simplex)'s vertices.

    variant "C": induced subgraph of Y_simplex (equivalently of the
    augmented graph, since links avoid saturations).
    variant "C0": X-edges of the link plus an edge {v, w} whenever maximal
    simplices containing simplex, one through v and one through w, are
    W-adjacent.
    """
    mask = _nonmaximal_mask(x, simplex)
    link = x.link_mask(mask)
    aug = _augmented(x, w)
    if variant == "C":
        return aug.induced_metric(link)
    if variant != "C0":
        raise ValueError(f"unknown variant {variant!r}")
    keep = list(bits(link))
    pos = {i: p for p, i in enumerate(keep)}
    adj = [0] * len(keep)
    for p, i in enumerate(keep):  # X-edges within the link
        for j in bits(x.adj[i] & link):
            adj[p] |= 1 << pos[j]
    maximal = x.maximal_simplices
    for i, j in w.w_edges:
        mi, mj = maximal[i], maximal[j]
        if mask & ~mi or mask & ~mj:
            continue  # both maximal simplices must contain the simplex
        for u in bits(mi & link):
            for v in bits(mj & link):
                if u != v:
                    adj[pos[u]] |= 1 << pos[v]
                    adj[pos[v]] |= 1 << pos[u]
    return MetricGraph(tuple(x.labels[i] for i in keep), adj)


def induced_link_graph(x: FlagComplex, w: XGraph, simplex):
    """The induced link graph W^Delta over Lk(Delta) viewed as its own flag
    complex: vertices are the maximal simplices of the link, joined when
    their joins with Delta are W-adjacent.  Also reports whether the
    augmented graph of (Lk(Delta), W^Delta) equals C_0(Delta), which is a
    definition chase and is asserted.
    """
    mask = _nonmaximal_mask(x, simplex)
    link = x.link_mask(mask)
    if link == 0:
        raise EmptyLink("link is empty")  # unreachable: mask is non-maximal
    lk = x.induced(link)
    # maximal simplices of the link <-> maximal simplices of X containing Delta
    joins = []
    for lm in lk.maximal_simplices:
        jm = x.mask_of(lk.labels_of(lm)) | mask
        mi = x.maximal_index.get(jm)
        if mi is None:
            raise InternalConsistencyError(
                "join of a maximal link simplex with the simplex is not maximal")
        joins.append(mi)
    wadj = w.w_adj
    pairs = []
    for a in range(len(joins)):
        for b in range(a + 1, len(joins)):
            if wadj[joins[a]] >> joins[b] & 1:
                pairs.append((a, b))
    wd = XGraph.from_pairs(lk, pairs)
    image = AugmentedGraph(lk, wd).metric
    c0 = c_space(x, w, simplex, variant="C0")
    iota_check = (image.labels == c0.labels
                  and all(_same_adj(image, c0, v) for v in image.labels))
    if not iota_check:
        raise InternalConsistencyError(
            "augmented link graph differs from C0; this is a theorem")
    return wd, iota_check


def _same_adj(g1: MetricGraph, g2: MetricGraph, v: str) -> bool:
    n1 = {g1.labels[i] for i in bits(g1.adj[g1.index[v]])}
    n2 = {g2.labels[i] for i in bits(g2.adj[g2.index[v]])}
    return n1 == n2


def coned_intermediate(x: FlagComplex, w: XGraph, simplex, k: int) -> MetricGraph:
    """Y_Delta with every pair inside Lk(Sigma) cap Y_Delta joined by an edge,
    for every class [Sigma] above [Delta] of co-level greater than k.
    k = colevel(Delta) gives exactly Y_Delta; co-levels use the
    longest-chain stratification (see relations.co_level)."""
    from .relations import relation_table  # local import to avoid a cycle

    mask = _nonmaximal_mask(x, simplex)
    table = relation_table(x)
    cls = x.class_of(x.labels_of(mask))
    cl_delta = table.colevel(cls)
    if not (0 <= k <= cl_delta):
        raise BadLevel(f"level {k} outside 0..{cl_delta}")
    link_d = x.link_mask(mask)
    sat = x.saturation_mask(mask)
    ymask = x.full_mask & ~sat
    keep = list(bits(ymask))
    pos = {i: p for p, i in enumerate(keep)}
    aug = _augmented(x, w)
    adj = [0] * len(keep)
    for p, i in enumerate(keep):
        for j in bits(aug.adj[i] & ymask):
            adj[p] |= 1 << pos[j]
    for other in table.classes:
        if table.colevel(other) <= k:
            continue
        lo = x.mask_of(other.link)
        if link_d & ~lo:
            continue  # need Lk(Delta) subset of Lk(Sigma), i.e. [Delta] nested in [Sigma]
        cone = lo & ymask
        members = list(bits(cone))
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                adj[pos[members[a]]] |= 1 << pos[members[b]]
                adj[pos[members[b]]] |= 1 << pos[members[a]]
    return MetricGraph(tuple(x.labels[i] for i in keep), adj)
