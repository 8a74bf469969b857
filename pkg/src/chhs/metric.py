"""Exact metric computations on finite unit-length graphs.

Distances are BFS path lengths (ints), with ``INF`` for separated pairs.
The hyperbolicity constant is the exact four-point constant, returned as a
Fraction in halves; no metric quantity is ever a float except the INF
sentinel, which is only compared, never rounded.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

from .complexes import bits
from .errors import (
    CapExceeded,
    Disconnected,
    DuplicateEdge,
    EmptyTarget,
    LoopEdge,
    Unreachable,
    UnknownVertex,
    VertexNotInAmbient,
)

INF = math.inf
_UNREACHED = -1
DELTA_VERTEX_CAP = 400

Dist = Union[int, float]  # int or INF


def thread_count() -> int:
    """Worker count for the quadruple scan; optional env override."""
    try:
        return max(1, int(os.environ.get("CHHS_THREADS", "1")))
    except ValueError:
        return 1


class MetricGraph:
    """Finite graph with cached all-pairs BFS distances."""

    def __init__(self, labels, adj):
        self.labels: tuple[str, ...] = tuple(labels)
        self.index = {v: i for i, v in enumerate(self.labels)}
        self.adj: tuple[int, ...] = tuple(adj)
        self.n = len(self.labels)
        self.dist = _all_pairs(self.adj, self.n)

    @classmethod
    def from_edges(cls, vertices: Iterable[str], edges: Iterable) -> "MetricGraph":
        labels = tuple(sorted(str(v) for v in vertices))
        index = {v: i for i, v in enumerate(labels)}
        adj = [0] * len(labels)
        seen = set()
        for u, v in edges:
            u, v = str(u), str(v)
            if u not in index or v not in index:
                raise UnknownVertex(f"edge endpoint not declared: {(u, v)}")
            if u == v:
                raise LoopEdge(f"loop at {u!r}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise DuplicateEdge(f"duplicate edge {key}")
            seen.add(key)
            adj[index[u]] |= 1 << index[v]
            adj[index[v]] |= 1 << index[u]
        return cls(labels, adj)

    def d(self, u: str, v: str) -> Dist:
        i, j = self.index[u], self.index[v]
        val = int(self.dist[i, j])
        return INF if val == _UNREACHED else val

    def connected(self) -> bool:
        return self.n <= 1 or not (self.dist == _UNREACHED).any()

    def diameter(self) -> Dist:
        if self.n == 0:
            return 0
        if (self.dist == _UNREACHED).any():
            return INF
        return int(self.dist.max())

    def edges(self) -> list[tuple[str, str]]:
        out = []
        for i in range(self.n):
            for j in bits(self.adj[i] & ~((1 << (i + 1)) - 1)):
                out.append((self.labels[i], self.labels[j]))
        return out

    def __repr__(self):
        return f"MetricGraph(|V|={self.n}, |E|={sum(a.bit_count() for a in self.adj)//2})"


def _all_pairs(adj, n) -> np.ndarray:
    """BFS distance matrix; -1 marks separated pairs."""
    dist = np.full((n, n), _UNREACHED, dtype=np.int32)
    full = (1 << n) - 1
    for s in range(n):
        seen = 1 << s
        frontier = 1 << s
        level = 0
        row = dist[s]
        while frontier:
            for v in bits(frontier):
                row[v] = level
            if seen == full:
                break
            nxt = 0
            for v in bits(frontier):
                nxt |= adj[v]
            frontier = nxt & ~seen
            seen |= frontier
            level += 1
    return dist


def shortest_path_metric(vertices, edges) -> MetricGraph:
    """All-pairs path metric of the graph; INF across components."""
    return MetricGraph.from_edges(vertices, edges)


# -- Gromov hyperbolicity ---------------------------------------------------


def gromov_delta(g: MetricGraph, vertex_cap: int | None = None) -> Fraction:
    """Exact four-point hyperbolicity constant of a connected graph.

    This is the minimal half-integer delta such that
    (x|y)_w >= min((x|z)_w, (z|y)_w) - delta over all vertex quadruples,
    computed as a max-min Gromov-product scan per base point.  Other delta
    conventions (thin triangles, insize) differ from this one by bounded
    multiplicative factors.
    """
    if vertex_cap is None:
        vertex_cap = DELTA_VERTEX_CAP
    if g.n == 0:
        return Fraction(0)
    if not g.connected():
        raise Disconnected("hyperbolicity is undefined on a disconnected graph")
    if g.n > vertex_cap:
        raise CapExceeded(f"{g.n} vertices exceeds the delta cap {vertex_cap}")
    d = g.dist.astype(np.int32)
    n = g.n
    workers = thread_count()

    def scan(w_range) -> int:
        best = 0
        chunk = 48
        for w in w_range:
            dw = d[:, w]
            tg = dw[:, None] + dw[None, :] - d  # 2*(x|y)_w
            m = np.full((n, n), -(1 << 30), dtype=np.int32)
            for z0 in range(0, n, chunk):
                zs = slice(z0, min(z0 + chunk, n))
                block = np.minimum(tg[:, zs][:, :, None], tg[zs, :][None, :, :])
                np.maximum(m, block.max(axis=1), out=m)
            best = max(best, int((m - tg).max()))
        return best

    if workers == 1 or n < 32:
        two_delta = scan(range(n))
    else:
        spans = [range(k, n, workers) for k in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            two_delta = max(pool.map(scan, spans))
    return Fraction(two_delta, 2)


# -- quasi-isometric embedding constants ------------------------------------


@dataclass(frozen=True)
class QiReport:
    """Minimal lambda with d_A <= lambda*d_B + lambda for an inclusion A -> B,
    floored at 1; INF when either side separates a pair, with the witness."""

    lam: Union[Fraction, float]
    witness_pair: tuple[str, str] | None


def qi_constants(b: MetricGraph, a_vertices, a_metric: MetricGraph) -> QiReport:
    verts = sorted(str(v) for v in a_vertices)
    for v in verts:
        if v not in b.index:
            raise VertexNotInAmbient(f"{v!r} not in the ambient graph")
        if v not in a_metric.index:
            raise VertexNotInAmbient(f"{v!r} not in the subspace metric")
    best = Fraction(1)
    witness = None
    for i, u in enumerate(verts):
        for v in verts[i + 1:]:
            da, db = a_metric.d(u, v), b.d(u, v)
            if da is INF or db is INF:
                return QiReport(INF, (u, v))
            ratio = Fraction(da, db + 1)
            if ratio > best:
                best, witness = ratio, (u, v)
    return QiReport(best, witness)


# -- coarse closest-point projection -----------------------------------------


def coarse_projection(g: MetricGraph, target, x) -> tuple[str, ...]:
    """The slack-1 nearest-point set of x in ``target``:
    {y in target : d(x, y) <= d(x, target) + 1}.  Never tie-broken."""
    tverts = sorted(str(v) for v in target)
    if not tverts:
        raise EmptyTarget("projection target is empty")
    x = str(x)
    if x not in g.index:
        raise UnknownVertex(f"unknown vertex {x!r}")
    row = g.dist[g.index[x]]
    ds = {}
    near = None
    for v in tverts:
        if v not in g.index:
            raise UnknownVertex(f"target vertex {v!r} not in graph")
        dv = int(row[g.index[v]])
        if dv != _UNREACHED:
            ds[v] = dv
            near = dv if near is None else min(near, dv)
    if near is None:
        raise Unreachable(f"{x!r} cannot reach the target set")
    return tuple(v for v in tverts if v in ds and ds[v] <= near + 1)
