"""HHS projection data and finite-instance evaluation of the axioms.

For a pair (X, W) this module computes the projections pi (from W-vertices
to the link subgraphs) and rho (between related classes), and from them the
instance constants: projection diameter bound xi, consistency kappa_0,
bounded-geodesic-image constants, large-links lambda, partial-realization
alpha, uniqueness theta_u, realization deviations, and exact rational
distance-formula fits.

All geodesic quantifications are resolved exactly on the geodesic
predecessor DAG (v lies on some x-y geodesic iff d(x,v)+d(v,y)=d(x,y));
nothing is sampled.  Distances are ints, constants are ints or Fractions,
and INF is a first-class value.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .complexes import FlagComplex, SimplexClass, bits, popcount
from .errors import (
    CapExceeded,
    Disconnected,
    EqualClasses,
    InternalConsistencyError,
    MaximalClass,
    NotMaximal,
    OrthogonalPair,
    Unreachable,
)
from .metric import INF, MetricGraph
from .relations import Rel, RelationTable, relation_table
from .spaces import XGraph, _augmented

_BIG = 1 << 30


class _ClassGeom:
    """Per-class geometry: saturation complement, link subgraph, and BFS
    rows from every link vertex inside Y (enough for p, pi and rho)."""

    def __init__(self, x: FlagComplex, aug, cls: SimplexClass, idx: int):
        self.cls = cls
        self.idx = idx
        self.link_mask = x.mask_of(cls.link)
        self.sat_mask = x.mask_of(cls.saturation)
        self.y_mask = x.full_mask & ~self.sat_mask
        self.link_vertices = list(bits(self.link_mask))
        # BFS inside Y from each link vertex, cleaned so _BIG = unreachable
        n = x.n
        rows = np.full((len(self.link_vertices), n), _BIG, dtype=np.int64)
        for r, src in enumerate(self.link_vertices):
            dist = _masked_bfs(aug.adj, self.y_mask, src, n)
            rows[r] = np.where(dist < 0, _BIG, dist)
        self.rows = rows
        self.d_to_c = rows.min(axis=0) if len(rows) else np.full(n, _BIG)
        self.c_metric = aug.induced_metric(self.link_mask)

    def p(self, vertex: int):
        """Slack-1 closest-point set of a Y-vertex in the link subgraph, as
        link-vertex indices; None when the vertex cannot reach the link."""
        d = self.d_to_c[vertex]
        if d >= _BIG:
            return None
        col = self.rows[:, vertex]
        return [self.link_vertices[r] for r in range(len(col)) if col[r] <= d + 1]

    def c_dist(self, u: int, v: int):
        d = self.c_metric.dist[self.c_index[u], self.c_index[v]]
        return INF if d < 0 else int(d)

    @cached_property
    def c_index(self):
        return {v: i for i, v in enumerate(self.link_vertices)}

    def set_dist(self, a, b):
        """Min distance between two sets of link-vertex indices."""
        if not a or not b:
            return INF
        best = INF
        for u in a:
            for v in b:
                d = self.c_dist(u, v)
                if d < best:
                    best = d
        return best

    def set_diam(self, a):
        if not a:
            return 0
        worst = 0
        for u in a:
            for v in a:
                d = self.c_dist(u, v)
                if d is INF:
                    return INF
                worst = max(worst, d)
        return worst


def _masked_bfs(adj, mask, src, n) -> np.ndarray:
    dist = np.full(n, -1, dtype=np.int64)
    if not (mask >> src) & 1:
        return dist
    seen = 1 << src
    frontier = seen
    level = 0
    while frontier:
        for v in bits(frontier):
            dist[v] = level
        nxt = 0
        for v in bits(frontier):
            nxt |= adj[v] & mask
        frontier = nxt & ~seen
        seen |= frontier
        level += 1
    return dist


class _Context:
    """Shared geometry for one (X, W) pair; built once and cached on X."""

    def __init__(self, x: FlagComplex, w: XGraph):
        self.x = x
        self.w = w
        self.aug = _augmented(x, w)
        self.table: RelationTable = relation_table(x)
        self.classes = self.table.classes
        self.geoms = [_ClassGeom(x, self.aug, c, i)
                      for i, c in enumerate(self.classes)]
        self.by_link = {g.link_mask: g for g in self.geoms}
        self.w_metric = w.metric()
        self.keys = w.vertex_keys()
        self._pi = {}
        self._rho_set = {}
        self._mat = {}

    def geom_of(self, cls: SimplexClass) -> _ClassGeom:
        return self.by_link[self.x.mask_of(cls.link)]

    def geom_of_simplex(self, simplex) -> _ClassGeom:
        mask = self.x.simplex_mask(simplex)
        lm = self.x.link_mask(mask)
        if lm == 0:
            raise MaximalClass(f"{tuple(simplex)} is maximal: no class")
        return self.by_link[lm]

    # -- projections ---------------------------------------------------

    def pi(self, gi: int, max_idx: int):
        """pi_[Delta](w) as a sorted list of link-vertex indices."""
        key = (gi, max_idx)
        if key in self._pi:
            return self._pi[key]
        geom = self.geoms[gi]
        smask = self.x.maximal_simplices[max_idx] & geom.y_mask
        if smask == 0:
            raise InternalConsistencyError(
                "a maximal simplex lies inside a saturation")
        out = self._project_mask(geom, smask)
        self._pi[key] = out
        return out

    def _project_mask(self, geom: _ClassGeom, mask):
        acc = set()
        reachable = False
        for v in bits(mask):
            ps = geom.p(v)
            if ps is not None:
                reachable = True
                acc.update(ps)
        if not reachable:
            raise Unreachable("projected set cannot reach the link subgraph")
        return sorted(acc)

    def rho_set(self, src: int, dst: int):
        """rho^[src]_[dst] for transverse pairs or src nested in dst."""
        key = (src, dst)
        if key in self._rho_set:
            return self._rho_set[key]
        geom = self.geoms[dst]
        sat = self.x.mask_of(self.classes[src].saturation)
        mask = sat & geom.y_mask
        if mask == 0:
            raise InternalConsistencyError(
                "saturation of a transverse/nested class misses Y entirely")
        out = self._project_mask(geom, mask)
        self._rho_set[key] = out
        return out

    def rho_map(self, src: int, dst: int):
        """rho^[src]_[dst] for dst nested in src: partial map defined on the
        link vertices of src, with explicit None off Y_dst."""
        geom = self.geoms[dst]
        out = {}
        for v in self.geoms[src].link_vertices:
            if (geom.y_mask >> v) & 1:
                ps = geom.p(v)
                out[v] = sorted(ps) if ps is not None else None
            else:
                out[v] = None
        return out

    def rho_map_cached(self, src: int, dst: int):
        key = ("rm", src, dst)
        if key not in self._mat:
            self._mat[key] = self.rho_map(src, dst)
        return self._mat[key]

    # -- distances between projection data ------------------------------

    def d_u(self, gi: int, wi: int, wj: int):
        """d in C(class gi) between pi(wi) and pi(wj) (min set distance)."""
        val = int(self.pair_matrix(gi)[wi, wj])
        return INF if val >= _BIG else val

    # Vectorized per-class machinery: with D the link-subgraph distance
    # matrix (unreachable = BIG) and P[w, a] = 0 when a is in pi(w) else
    # BIG, q = minplus(P, D) gives the distance from pi(w) to every link
    # vertex, and minplus(q, P^T) gives every pairwise set distance.

    def c_dist_matrix(self, gi: int) -> np.ndarray:
        key = ("cD", gi)
        if key not in self._mat:
            d = self.geoms[gi].c_metric.dist.astype(np.int64)
            self._mat[key] = np.where(d < 0, _BIG, d)
        return self._mat[key]

    def pi_positions(self, gi: int):
        key = ("pip", gi)
        if key not in self._mat:
            cidx = self.geoms[gi].c_index
            self._mat[key] = [
                np.array([cidx[v] for v in self.pi(gi, wi)], dtype=np.int64)
                for wi in range(len(self.x.maximal_simplices))]
        return self._mat[key]

    def q_matrix(self, gi: int) -> np.ndarray:
        """q[w, a] = distance in the link subgraph from pi(w) to vertex a."""
        key = ("q", gi)
        if key not in self._mat:
            d = self.c_dist_matrix(gi)
            pos = self.pi_positions(gi)
            nw = len(pos)
            q = np.full((nw, d.shape[0] or 1), _BIG, dtype=np.int64)
            if d.shape[0]:
                for wi, p in enumerate(pos):
                    q[wi] = d[p].min(axis=0)
            self._mat[key] = np.minimum(q, _BIG)
        return self._mat[key]

    def pair_matrix(self, gi: int) -> np.ndarray:
        """Pairwise min set distance between pi(w) sets, BIG for infinite."""
        key = ("pm", gi)
        if key not in self._mat:
            q = self.q_matrix(gi)
            pos = self.pi_positions(gi)
            nw = len(pos)
            pm = np.full((nw, nw), _BIG, dtype=np.int64)
            for wj, p in enumerate(pos):
                pm[:, wj] = q[:, p].min(axis=1)
            self._mat[key] = np.minimum(pm, _BIG)
        return self._mat[key]

    def rho_positions(self, src: int, dst: int) -> np.ndarray:
        key = ("rp", src, dst)
        if key not in self._mat:
            cidx = self.geoms[dst].c_index
            self._mat[key] = np.array(
                [cidx[v] for v in self.rho_set(src, dst)], dtype=np.int64)
        return self._mat[key]

    def d_pi_to_rho(self, gi: int, src: int) -> np.ndarray:
        """Vector over W-vertices: distance in C(gi) from pi(w) to the rho
        set of src inside gi; entries >= BIG mean infinite."""
        key = ("pr", gi, src)
        if key not in self._mat:
            q = self.q_matrix(gi)
            self._mat[key] = q[:, self.rho_positions(src, gi)].min(axis=1)
        return self._mat[key]

    def w_dist_matrix(self) -> np.ndarray:
        """d_W aligned with maximal-simplex indices; BIG for separated."""
        if "wD" not in self._mat:
            wm = self.w_metric
            order = np.array([wm.index[k] for k in self.keys], dtype=np.int64)
            d = wm.dist.astype(np.int64)[np.ix_(order, order)]
            self._mat["wD"] = np.where(d < 0, _BIG, d)
        return self._mat["wD"]

    def gap_matrix(self) -> np.ndarray:
        """Worst projection gap per W-vertex pair, over all classes."""
        if "gap" not in self._mat:
            n_w = len(self.x.maximal_simplices)
            gap = np.zeros((n_w, n_w), dtype=np.int64)
            for gi in range(len(self.geoms)):
                np.maximum(gap, self.pair_matrix(gi), out=gap)
            self._mat["gap"] = gap
        return self._mat["gap"]


def _context(x: FlagComplex, w: XGraph) -> _Context:
    cache = x._cache.setdefault("projection_context", {})
    key = id(w)
    if key not in cache:
        cache[key] = _Context(x, w)
    return cache[key]


def _labels(x: FlagComplex, vertex_indices) -> tuple:
    return tuple(x.labels[i] for i in vertex_indices)


def _resolve_w_vertex(x: FlagComplex, w_vertex) -> int:
    if isinstance(w_vertex, int):
        mask = x.maximal_simplices[w_vertex]
        return w_vertex
    if isinstance(w_vertex, str):
        verts = w_vertex.split("|") if w_vertex else []
    else:
        verts = list(w_vertex)
    mask = x.simplex_mask(verts)
    idx = x.maximal_index.get(mask)
    if idx is None:
        raise NotMaximal(f"{tuple(sorted(map(str, verts)))} is not maximal")
    return idx


def pi_projection(x: FlagComplex, w: XGraph, simplex, w_vertex) -> tuple:
    """Projection of a W-vertex to the link subgraph of [simplex]: the
    coarse closest-point image of (the maximal simplex minus the
    saturation) inside Y, as a canonical label tuple."""
    ctx = _context(x, w)
    geom = ctx.geom_of_simplex(simplex)
    idx = _resolve_w_vertex(x, w_vertex)
    return _labels(x, ctx.pi(geom.idx, idx))


def rho(x: FlagComplex, w: XGraph, src_simplex, dst_simplex):
    """rho between two distinct, non-orthogonal classes.

    Transverse, or src nested in dst: a vertex set in C(dst).
    dst nested in src: the partial map C(src) -> C(dst), a dict from link
    vertices of src to label tuples, with None as the explicit empty value.
    """
    ctx = _context(x, w)
    gs = ctx.geom_of_simplex(src_simplex)
    gd = ctx.geom_of_simplex(dst_simplex)
    rel = ctx.table.rel[(gs.idx, gd.idx)]
    if rel is Rel.EQUAL:
        raise EqualClasses("rho between equal classes is undefined")
    if rel is Rel.ORTHOGONAL:
        raise OrthogonalPair("rho between orthogonal classes is undefined")
    if rel in (Rel.TRANSVERSE, Rel.NESTED_IN):
        return _labels(x, ctx.rho_set(gs.idx, gd.idx))
    mp = ctx.rho_map(gs.idx, gd.idx)
    return {x.labels[v]: (None if ps is None else _labels(x, ps))
            for v, ps in mp.items()}


@dataclass(frozen=True)
class ProjectionTable:
    """Every pi value and every rho value for one (X, W) pair."""

    pi: dict    # class key -> {maximal-simplex key: label tuple}
    rho: dict   # (src key, dst key) -> label tuple or {label: tuple|None}


def projection_table(x: FlagComplex, w: XGraph) -> ProjectionTable:
    ctx = _context(x, w)
    pi = {}
    for g in ctx.geoms:
        pi[g.cls.key] = {
            ctx.keys[i]: _labels(x, ctx.pi(g.idx, i))
            for i in range(len(x.maximal_simplices))
        }
    rho_out = {}
    n = len(ctx.geoms)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            rel = ctx.table.rel[(i, j)]
            ki, kj = ctx.classes[i].key, ctx.classes[j].key
            if rel in (Rel.TRANSVERSE, Rel.NESTED_IN):
                rho_out[(ki, kj)] = _labels(x, ctx.rho_set(i, j))
            elif rel is Rel.CONTAINS:
                mp = ctx.rho_map(i, j)
                rho_out[(ki, kj)] = {
                    x.labels[v]: (None if ps is None else _labels(x, ps))
                    for v, ps in mp.items()}
    return ProjectionTable(pi, rho_out)


# -- instance constants ------------------------------------------------------


@dataclass(frozen=True)
class HHSConstants:
    xi: object                 # int or INF
    kappa0: object
    rho_coherence: object
    E: object
    C_super: object
    C_strong: object
    lambda_LL: object          # Fraction or INF (upper bound, greedy witness)
    alpha: object
    theta_u: dict              # kappa -> bound
    theta_real: object
    df_fit: tuple              # (s, K, C) triples


def hhs_constants(x: FlagComplex, w: XGraph, kappa_grid=None,
                  thresholds=(2, 3, 4), alpha_budget=200_000) -> HHSConstants:
    """All instance constants.  Finite on instances that verify as
    combinatorial HHSs with connected augmented graph; INF values are
    reported, never hidden."""
    ctx = _context(x, w)
    n_cls = len(ctx.geoms)
    n_w = len(x.maximal_simplices)

    xi = 0
    for gi in range(n_cls):
        d = ctx.c_dist_matrix(gi)
        for p in ctx.pi_positions(gi):
            worst = int(d[np.ix_(p, p)].max())
            xi = _vmax(xi, INF if worst >= _BIG else worst)
    for i in range(n_cls):
        for j in range(n_cls):
            if i != j and ctx.table.rel[(i, j)] in (Rel.TRANSVERSE, Rel.NESTED_IN):
                p = ctx.rho_positions(i, j)
                worst = int(ctx.c_dist_matrix(j)[np.ix_(p, p)].max())
                xi = _vmax(xi, INF if worst >= _BIG else worst)

    kappa0, coherence = _consistency(ctx)
    bgi = bgi_constants(x, w)
    e_ll = _vmax(_vmax(xi, kappa0), bgi.E)
    lam_ll = _large_links(ctx, e_ll)
    alpha = _partial_realization(ctx, alpha_budget)
    theta_u = _uniqueness_table(ctx, kappa_grid)
    theta_real = _theta_real(ctx)
    df = distance_formula_fit(x, w, thresholds)
    return HHSConstants(xi=xi, kappa0=kappa0, rho_coherence=coherence,
                        E=bgi.E, C_super=bgi.C_super, C_strong=bgi.C_strong,
                        lambda_LL=lam_ll, alpha=alpha, theta_u=theta_u,
                        theta_real=theta_real, df_fit=df)


def _vmax(a, b):
    if a is INF or b is INF:
        return INF
    return max(a, b)


def _consistency(ctx: _Context):
    """kappa_0: the worst min-expression of the two point-consistency
    inequalities over all W-vertices and related pairs, together with the
    rho-coherence clause (reported separately as well)."""
    n_cls = len(ctx.geoms)
    n_w = len(ctx.x.maximal_simplices)
    worst = 0
    for i in range(n_cls):
        for j in range(i + 1, n_cls):
            rel = ctx.table.rel[(i, j)]
            if rel is Rel.ORTHOGONAL:
                continue
            if rel is Rel.TRANSVERSE:
                a = ctx.d_pi_to_rho(i, j)
                b = ctx.d_pi_to_rho(j, i)
                val = int(np.minimum(a, b).max()) if n_w else 0
                worst = _vmax(worst, INF if val >= _BIG else val)
            else:
                lo, hi = (i, j) if rel is Rel.NESTED_IN else (j, i)
                av = ctx.d_pi_to_rho(hi, lo)
                # min(a, b) can only beat the running maximum where a does
                for wi in np.argsort(-av, kind="stable"):
                    if worst is INF:
                        break
                    a = int(av[wi])
                    if a < _BIG and a <= worst:
                        break
                    worst = _vmax(worst, _nested_min(ctx, lo, hi, int(wi)))
    coherence = _rho_coherence(ctx)
    return _vmax(worst, coherence), coherence


def _nested_min(ctx: _Context, lo: int, hi: int, wi: int):
    """min(d_hi(pi_hi(w), rho^lo_hi), diam_lo(pi_lo(w) u rho^hi_lo(pi_hi(w))))."""
    a = int(ctx.d_pi_to_rho(hi, lo)[wi])
    a = INF if a >= _BIG else a
    mp = ctx.rho_map_cached(hi, lo)
    union = set(ctx.pi(lo, wi))
    for v in ctx.pi(hi, wi):
        ps = mp.get(v)
        if ps:
            union.update(ps)
    b = ctx.geoms[lo].set_diam(sorted(union))
    if a is INF and b is INF:
        return INF
    return min(a if a is not INF else _BIG, b if b is not INF else _BIG)


def _rho_coherence(ctx: _Context):
    """max d_W'(rho^U_W', rho^V_W') over U nested in V and W' with either
    V strictly nested in W', or V transverse to W' and W' not orthogonal
    to U (the last clause of the transversality axiom)."""
    n_cls = len(ctx.geoms)
    nested = ctx.table.nested
    orth = ctx.table.orth
    eye = np.eye(n_cls, dtype=bool)
    strict = nested & ~eye
    trans = ~nested & ~nested.T & ~orth & ~eye
    worst = 0
    for wp in range(n_cls):
        vs = np.nonzero(strict[:, wp] | trans[:, wp])[0]
        if not len(vs):
            continue
        cdm = ctx.c_dist_matrix(wp)
        rows = {}

        def row(src):
            if src not in rows:
                rows[src] = cdm[ctx.rho_positions(src, wp)].min(axis=0)
            return rows[src]

        for v in vs:
            v = int(v)
            us = np.nonzero(strict[:, v])[0]
            if trans[v, wp]:
                us = us[~orth[wp, us]]
            us = us[us != wp]
            if not len(us):
                continue
            pv = ctx.rho_positions(v, wp)
            stacked = np.stack([row(int(u))[pv].min() for u in us])
            d = int(stacked.max())
            worst = _vmax(worst, INF if d >= _BIG else d)
    return worst


def _large_links(ctx: _Context, e_ll):
    """Upper bound for the minimal large-links lambda, via a greedy cover:
    for each class U and W-vertex pair, the classes strictly below U whose
    coordinate gap reaches the cutoff must be covered by nested domains."""
    if e_ll is INF:
        return INF
    n_cls = len(ctx.geoms)
    n_w = len(ctx.x.maximal_simplices)
    eye = np.eye(n_cls, dtype=bool)
    strict = ctx.table.nested & ~eye
    lam = Fraction(1)
    for u in range(n_cls):
        cand = [int(t) for t in np.nonzero(strict[:, u])[0]]
        if not cand:
            continue
        covers = {c: {t for t in cand if ctx.table.nested[t, c]} for c in cand}
        # pairs where some strictly-nested class has a wide coordinate gap
        wide = np.zeros((n_w, n_w), dtype=bool)
        for t in cand:
            wide |= ctx.pair_matrix(t) >= e_ll
        for wi, wj in np.argwhere(np.triu(wide, 1)):
            wi, wj = int(wi), int(wj)
            need = {t for t in cand
                    if not _lt(ctx.d_u(t, wi, wj), e_ll)}
            if not need:
                continue
            chosen = []
            left = set(need)
            while left:
                best = max(cand, key=lambda c: (len(covers[c] & left), -c))
                gain = covers[best] & left
                if not gain:
                    raise InternalConsistencyError("cover step cannot progress")
                chosen.append(best)
                left -= gain
            n_needed = len(chosen)
            for c in chosen:
                d = int(ctx.d_pi_to_rho(u, c)[wi])
                n_needed = _vmax(n_needed, INF if d >= _BIG else d)
            du = ctx.d_u(u, wi, wj)
            if n_needed is INF or du is INF:
                return INF
            lam = max(lam, Fraction(n_needed, du + 1))
    return lam


def _lt(a, b):
    if a is INF:
        return False
    if b is INF:
        return True
    return a < b


def _partial_realization(ctx: _Context, budget: int):
    """alpha via the constructive realization: points on pairwise-orthogonal
    classes are pairwise adjacent; extend them to a maximal simplex and
    measure the three deviations."""
    x = ctx.x
    n_cls = len(ctx.geoms)
    orth = [0] * n_cls
    for i in range(n_cls):
        for j in range(n_cls):
            if i != j and ctx.table.rel[(i, j)] is Rel.ORTHOGONAL:
                orth[i] |= 1 << j
    families = []
    def grow(fam, cand):
        families.append(fam)
        for v in bits(cand):
            grow(fam + (v,), cand & orth[v] & ~((1 << (v + 1)) - 1))
    for v in range(n_cls):
        grow((v,), orth[v] & ~((1 << (v + 1)) - 1))

    # the rho deviations depend on the family member and the realization
    # simplex only, not on the chosen point: precompute per class j the
    # worst d_V(pi_V(w), rho^j_V) over all related V, as a vector over w
    n_w = len(x.maximal_simplices)
    rel_dev = {}
    for j in range(n_cls):
        acc = np.zeros(n_w, dtype=np.int64)
        for v in range(n_cls):
            if v != j and ctx.table.rel[(j, v)] in (Rel.NESTED_IN, Rel.TRANSVERSE):
                np.maximum(acc, ctx.d_pi_to_rho(v, j), out=acc)
        rel_dev[j] = acc
    alpha = 0
    spent = 0
    extension = {}
    for fam in families:
        pools = [ctx.geoms[j].link_vertices for j in fam]
        for points in itertools.product(*pools):
            spent += 1
            if spent > budget:
                raise CapExceeded(
                    f"partial-realization enumeration exceeded {budget} tuples")
            mask = 0
            for p in points:
                mask |= 1 << p
            wi = extension.get(mask)
            if wi is None:
                if not x.is_clique(mask):
                    raise InternalConsistencyError(
                        "points on orthogonal classes must be pairwise adjacent")
                cand = x.link_mask(mask)
                cur = mask
                while cand:
                    v = (cand & -cand).bit_length() - 1
                    cur |= 1 << v
                    cand &= x.adj[v]
                wi = x.maximal_index.get(cur)
                if wi is None:
                    raise InternalConsistencyError("greedy extension not maximal")
                extension[mask] = wi
            worst = 0
            for j, p in zip(fam, points):
                worst = max(worst, int(ctx.q_matrix(j)[wi, ctx.geoms[j].c_index[p]]),
                            int(rel_dev[j][wi]))
            alpha = _vmax(alpha, INF if worst >= _BIG else worst)
    return alpha


def _uniqueness_table(ctx: _Context, kappa_grid):
    """theta_u(kappa) = max d_W(x, y) over W-vertex pairs whose projections
    all lie within kappa; tabulated on the given grid (default: the
    distinct observed projection gaps)."""
    n_w = len(ctx.x.maximal_simplices)
    if n_w == 0:
        return {0: 0}
    gap = ctx.gap_matrix()
    dw = ctx.w_dist_matrix()
    iu = np.triu_indices(n_w, 1)
    gaps, dws = gap[iu], dw[iu]
    if kappa_grid is None:
        finite = sorted({int(g) for g in gaps if g < _BIG})
        kappa_grid = finite if finite else [0]
    table = {}
    for kappa in kappa_grid:
        sel = dws[gaps <= kappa]
        if len(sel) == 0:
            table[kappa] = 0
        else:
            worst = int(sel.max())
            table[kappa] = INF if worst >= _BIG else worst
    return table


def _theta_real(ctx: _Context):
    """Worst realization deviation over the true coordinate tuples of
    W-vertices.  The realization score of a candidate x against the tuple
    of w is the worst projection gap between x and w, so this is
    max_w min_x gap(x, w); the vertex itself scores 0, making the value 0
    whenever every class projection is defined (reported for the record)."""
    n_w = len(ctx.x.maximal_simplices)
    if n_w == 0:
        return 0
    gap = ctx.gap_matrix()
    worst = int(gap.min(axis=0).max())
    return INF if worst >= _BIG else worst


# -- bounded geodesic image ---------------------------------------------------


@dataclass(frozen=True)
class BgiConstants:
    E: object
    C_super: object
    C_strong: object
    c_super_vacuous: bool
    c_strong_vacuous: bool


def bgi_constants(x: FlagComplex, w: XGraph) -> BgiConstants:
    """Exact BGI constants.

    E: minimal value with, for every strictly nested pair and every geodesic
    of the bigger link subgraph, either the projected image has diameter
    <= E or the geodesic enters the E-neighborhood of the upward rho set.
    C_super: minimal C so that link-subgraph distance > C between two link
    vertices forces every augmented-graph geodesic between them to meet the
    saturation.  C_strong: the analogue for closest-point projections of
    arbitrary Y-vertex pairs with a saturation-avoiding geodesic.
    """
    ctx = _context(x, w)
    if not ctx.aug.metric.connected():
        raise Disconnected("the augmented graph is disconnected")
    e_val = 0
    for hi in range(len(ctx.geoms)):
        for lo in range(len(ctx.geoms)):
            if lo == hi or ctx.table.rel[(lo, hi)] is not Rel.NESTED_IN:
                continue
            e_val = _vmax(e_val, _bgi_pair(ctx, lo, hi,
                                           0 if e_val is INF else e_val))
    c_super, sup_vac = _c_super(ctx)
    c_strong, str_vac = _c_strong(ctx)
    return BgiConstants(e_val, c_super, c_strong, sup_vac, str_vac)


def _bgi_pair(ctx: _Context, lo: int, hi: int, floor=0):
    """max over endpoint pairs in C(hi) and geodesics gamma of
    min(diam_lo(rho-map over gamma), min distance of gamma to rho^lo_hi);
    results never exceeding ``floor`` are skipped early."""
    ghi, glo = ctx.geoms[hi], ctx.geoms[lo]
    cm = ghi.c_metric
    nv = cm.n
    if nv == 0:
        return 0
    # cm vertex order matches ghi.link_vertices (ascending index)
    up = ctx.rho_positions(lo, hi)
    dmat = ctx.c_dist_matrix(hi)
    c_of = dmat[:, up].min(axis=1)
    mp = ctx.rho_map_cached(hi, lo)
    dlo = ctx.c_dist_matrix(lo)
    cidx_lo = glo.c_index
    positions = []
    for pos in range(nv):
        vals = mp.get(ghi.link_vertices[pos])
        positions.append(
            np.array([cidx_lo[v] for v in vals], dtype=np.int64)
            if vals else None)
    pair_gap = {}
    for a in range(nv):
        pa = positions[a]
        if pa is None:
            continue
        for b in range(a, nv):
            pb = positions[b]
            if pb is None:
                continue
            worst = int(dlo[np.ix_(pa, pb)].max())
            pair_gap[(a, b)] = INF if worst >= _BIG else worst
    if not pair_gap:
        return 0
    gmax = 0
    for g in pair_gap.values():
        gmax = _vmax(gmax, g)
    cmax = int(c_of.max())
    cmax = INF if cmax >= _BIG else cmax
    ceiling = min(gmax if gmax is not INF else _BIG,
                  cmax if cmax is not INF else _BIG)
    if ceiling <= floor:
        return 0  # cannot improve the caller's running maximum
    cand = sorted({int(c) for c in c_of if c < _BIG}
                  | {g for g in pair_gap.values() if g is not INF}
                  | ({_BIG} if INF in pair_gap.values() or (c_of >= _BIG).any() else set()))
    best = 0
    dist = cm.dist
    for sx in range(nv):
        for sy in range(sx, nv):
            dxy = dist[sx, sy]
            if dxy < 0:
                continue
            on_dag = [g for g in range(nv)
                      if dist[sx, g] >= 0 and dist[g, sy] >= 0
                      and dist[sx, g] + dist[g, sy] == dxy]
            val = _dag_value(cand, on_dag, dist, sx, sy, c_of, pair_gap,
                             max(best, floor))
            best = _vmax(best, val)
    return best


def _dag_value(cand, on_dag, dist, sx, sy, c_of, pair_gap, floor):
    """Largest threshold t with a geodesic whose vertices all have
    c(g) >= t and which carries a projected pair of gap >= t."""
    lo_i, hi_i = 0, len(cand) - 1
    best = 0
    # binary search the candidate thresholds (predicate monotone in t)
    while lo_i <= hi_i:
        mid = (lo_i + hi_i) // 2
        t = cand[mid]
        if t <= floor:
            # cannot improve the caller's running maximum; search upward
            lo_i = mid + 1
            continue
        if _dag_feasible(t, on_dag, dist, sx, sy, c_of, pair_gap):
            best = max(best, t)
            lo_i = mid + 1
        else:
            hi_i = mid - 1
    return min(best, _BIG - 1) if best < _BIG else INF


def _dag_feasible(t, on_dag, dist, sx, sy, c_of, pair_gap):
    allowed = [g for g in on_dag if c_of[g] >= t]
    if sx not in allowed or sy not in allowed:
        return False
    aset = set(allowed)
    # geodesic DAG is layered by distance from sx; adjacency = dist 1 steps
    succ = {g: [h for h in allowed
                if dist[sx, h] == dist[sx, g] + 1 and dist[g, h] == 1]
            for g in allowed}
    fwd = _reach(succ, sx)
    pred = {g: [h for h in allowed
                if dist[sx, h] + 1 == dist[sx, g] and dist[h, g] == 1]
            for g in allowed}
    bwd = _reach(pred, sy)
    core = fwd & bwd
    if not core:
        return False
    for (a, b), gap in pair_gap.items():
        if gap is not INF and gap < t:
            continue
        if a not in core or b not in core:
            continue
        if a == b:
            return True
        lo_v, hi_v = (a, b) if dist[sx, a] <= dist[sx, b] else (b, a)
        seen = {lo_v}
        stack = [lo_v]
        hit = False
        while stack:
            g = stack.pop()
            if g == hi_v:
                hit = True
                break
            for h in succ[g]:
                if h not in seen and h in core:
                    seen.add(h)
                    stack.append(h)
        if hit:
            return True
    return False


def _reach(nbrs, start):
    if start not in nbrs:
        return set()
    seen = {start}
    stack = [start]
    while stack:
        g = stack.pop()
        for h in nbrs[g]:
            if h not in seen:
                seen.add(h)
                stack.append(h)
    return seen


def _c_super(ctx: _Context):
    worst = 0
    vacuous = True
    dall = ctx.aug.metric.dist
    for g in ctx.geoms:
        cm = g.c_metric
        lv = g.link_vertices
        for a in range(len(lv)):
            row = g.rows[a]
            for b in range(a + 1, len(lv)):
                dy = row[lv[b]]
                if dy >= _BIG or dy != dall[lv[a], lv[b]]:
                    continue  # every ambient geodesic meets the saturation
                vacuous = False
                dc = cm.dist[a, b]
                worst = _vmax(worst, INF if dc < 0 else int(dc))
    return worst, vacuous


def _c_strong(ctx: _Context):
    worst = 0
    vacuous = True
    x = ctx.x
    dall = ctx.aug.metric.dist
    for g in ctx.geoms:
        yverts = list(bits(g.y_mask))
        # full BFS inside Y from every Y vertex
        dy = {v: _masked_bfs(ctx.aug.adj, g.y_mask, v, x.n) for v in yverts}
        proj = {v: g.p(v) for v in yverts}
        for i, a in enumerate(yverts):
            for b in yverts[i + 1:]:
                d = dy[a][b]
                if d < 0 or d != dall[a, b]:
                    continue
                if proj[a] is None or proj[b] is None:
                    continue
                vacuous = False
                worst = _vmax(worst, g.set_dist(proj[a], proj[b]))
    return worst, vacuous


# -- distance formula ---------------------------------------------------------


def distance_formula_fit(x: FlagComplex, w: XGraph, thresholds,
                         h=None, lam=None) -> tuple:
    """Exact rational (K, C) fits of d_W against thresholded projection sums.

    For each threshold s the sum over classes of d_U(x, y), counted when
    >= s, is fitted on both sides: K1 = max d_W/(sum+1), K2 = max
    sum/(d_W+1), and (K, C) = (max(1, K1, K2), same), which satisfies
    K^-1*sum - C <= d_W <= K*sum + C with zero violated pairs.

    The perturbed variant takes h[(class key, (wkey1, wkey2))] in place of
    d_U; values must satisfy h <= lam*d + lam and d <= lam*h + lam.
    """
    ctx = _context(x, w)
    if not ctx.w_metric.connected():
        raise Disconnected("W is disconnected")
    n_w = len(x.maximal_simplices)
    pairs = [(i, j) for i in range(n_w) for j in range(i + 1, n_w)]
    mats = []
    for gi in range(len(ctx.geoms)):
        key = ctx.classes[gi].key
        pm = ctx.pair_matrix(gi).copy()
        if h is not None:
            if lam is None:
                raise ValueError("perturbed fit needs lam")
            for (i, j) in pairs:
                d = int(pm[i, j])
                d = INF if d >= _BIG else d
                pk = tuple(sorted((ctx.keys[i], ctx.keys[j])))
                val = h.get((key, pk), d)
                if d is INF or val is INF:
                    if val is not d:
                        raise ValueError("perturbation disagrees at INF")
                elif not (val <= lam * d + lam and d <= lam * val + lam):
                    raise ValueError(
                        f"h value {val} for {key} exceeds the declared lambda")
                else:
                    pm[i, j] = pm[j, i] = val
        if (pm[np.triu_indices(n_w, 1)] >= _BIG).any():
            raise Disconnected(
                "a projection distance is infinite; no finite fit")
        mats.append(pm)
    dw_mat = ctx.w_dist_matrix()
    out = []
    for s in thresholds:
        total = np.zeros((n_w, n_w), dtype=np.int64)
        for pm in mats:
            total += np.where(pm >= s, pm, 0)
        k1 = Fraction(0)
        k2 = Fraction(0)
        for (i, j) in pairs:
            t = int(total[i, j])
            dw = int(dw_mat[i, j])
            k1 = max(k1, Fraction(dw, t + 1))
            k2 = max(k2, Fraction(t, dw + 1))
        k = max(Fraction(1), k1, k2)
        out.append((s, k, k))
    return tuple(out)


# -- realization --------------------------------------------------------------


def realize_tuple(x: FlagComplex, w: XGraph, coords) -> tuple:
    """Exhaustive realization of a coordinate tuple.

    coords maps every class key (or representative tuple) to a vertex set
    in that class's link subgraph.  Returns (w_key, theta, measured_kappa):
    the canonical W-vertex minimizing the worst coordinate deviation, the
    deviation achieved, and the tuple's measured consistency constant.
    """
    ctx = _context(x, w)
    sets = {}
    for key, verts in coords.items():
        if isinstance(key, str):
            rep = tuple(key.split("|")) if key else ()
        else:
            rep = tuple(key)
        geom = ctx.geom_of_simplex(rep)
        try:
            vs = sorted(x.index[str(v)] for v in verts)
        except KeyError as exc:
            raise ValueError(f"unknown vertex in tuple coordinate: {exc}")
        for v in vs:
            if not (geom.link_mask >> v) & 1:
                raise ValueError(
                    f"{x.labels[v]} is not in the link subgraph of {rep}")
        sets[geom.idx] = vs
    missing = [g.cls.key for g in ctx.geoms if g.idx not in sets]
    if missing:
        raise ValueError(f"tuple misses classes: {missing}")

    n_w = len(x.maximal_simplices)
    score = np.zeros(n_w, dtype=np.int64)
    for gi, b in sets.items():
        cidx = ctx.geoms[gi].c_index
        bpos = np.array([cidx[v] for v in b], dtype=np.int64)
        np.maximum(score, ctx.q_matrix(gi)[:, bpos].min(axis=1), out=score)
    best_idx = min(range(n_w), key=lambda i: (int(score[i]), ctx.keys[i]))
    theta = int(score[best_idx])
    theta = INF if theta >= _BIG else theta
    kappa = _measured_consistency(ctx, sets)
    return ctx.keys[best_idx], theta, kappa


def _measured_consistency(ctx: _Context, sets):
    def clamp(v):
        return INF if v >= _BIG else int(v)

    pos = {}
    for gi, b in sets.items():
        cidx = ctx.geoms[gi].c_index
        pos[gi] = np.array([cidx[v] for v in b], dtype=np.int64)
    worst = 0
    for gi, p in pos.items():
        d = ctx.c_dist_matrix(gi)
        worst = _vmax(worst, clamp(d[np.ix_(p, p)].max()))
    n_cls = len(ctx.geoms)

    def to_rho(i, j):
        """distance in C(i) from the tuple's i-coordinate to rho^j_i"""
        return clamp(ctx.c_dist_matrix(i)[np.ix_(pos[i], ctx.rho_positions(j, i))].min())

    for i in range(n_cls):
        for j in range(i + 1, n_cls):
            rel = ctx.table.rel[(i, j)]
            if rel is Rel.ORTHOGONAL:
                continue
            if rel is Rel.TRANSVERSE:
                worst = _vmax(worst, min(to_rho(i, j), to_rho(j, i)))
            else:
                lo, hi = (i, j) if rel is Rel.NESTED_IN else (j, i)
                a = to_rho(hi, lo)
                mp = ctx.rho_map_cached(hi, lo)
                union = {int(v) for v in pos[lo]}
                cidx = ctx.geoms[lo].c_index
                hi_verts = ctx.geoms[hi].link_vertices
                for q in pos[hi]:
                    ps = mp.get(hi_verts[int(q)])
                    if ps:
                        union.update(cidx[g] for g in ps)
                up = np.array(sorted(union), dtype=np.int64)
                bb = clamp(ctx.c_dist_matrix(lo)[np.ix_(up, up)].max())
                if a is INF and bb is INF:
                    worst = INF
                else:
                    worst = _vmax(worst, min(
                        a if a is not INF else _BIG,
                        bb if bb is not INF else _BIG))
    return worst
