"""Independent brute-force oracles, kept separate from the library's code
paths on purpose: the production hyperbolicity kernel is a max-min
Gromov-product scan, while this oracle walks unordered vertex quadruples
and uses the three-pairing characterization directly."""

from fractions import Fraction
from itertools import combinations


def naive_delta(g) -> Fraction:
    """Four-point constant by direct quadruple enumeration: for each
    4-subset, half the gap between the largest and middle pairing sums."""
    d = g.dist.tolist()
    best = 0
    for a, b, c, e in combinations(range(g.n), 4):
        s1 = d[a][b] + d[c][e]
        s2 = d[a][c] + d[b][e]
        s3 = d[a][e] + d[b][c]
        hi = max(s1, s2, s3)
        mid = s1 + s2 + s3 - hi - min(s1, s2, s3)
        if hi - mid > best:
            best = hi - mid
    return Fraction(best, 2)


def naive_link(cx, simplex_mask):
    """Link by direct definition: vertices outside the simplex adjacent to
    every simplex vertex, checked label by label."""
    members = [i for i in range(cx.n) if (simplex_mask >> i) & 1]
    out = 0
    for v in range(cx.n):
        if (simplex_mask >> v) & 1:
            continue
        if all((cx.adj[u] >> v) & 1 for u in members):
            out |= 1 << v
    return out


def naive_saturation(cx, simplex_mask):
    """Saturation by scanning every clique of the complex for link
    equality (no candidate restriction)."""
    target = naive_link(cx, simplex_mask)
    sat = 0
    for c in cx.cliques:
        if naive_link(cx, c) == target:
            sat |= c
    return sat
