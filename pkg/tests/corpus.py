"""Deterministic instance corpus shared by the test modules.

complexes() yields well over 200 flag complexes spanning paths, cycles,
joins, octahedra, blow-ups, random flag complexes on at most 25 vertices,
and truncated amalgam balls.  instances() pairs a sub-corpus with the three
W rules.  Everything is constructed fresh per call; callers may cache.
"""

import itertools
from functools import lru_cache

from chhs import (
    AmalgamSpec,
    BlowupSpec,
    XGraph,
    gen_amalgam,
    gen_blowup,
    gen_library,
)

W_RULES = ("none", "complete", "shared_codim1_face")


def s3_table():
    elems = sorted(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(elems)}
    table = [[index[tuple(p[q[k]] for k in range(3))] for q in elems]
             for p in elems]
    return elems, index, table


def amalgam_s3_spec(radius):
    """A = B = S3, C generated by the transposition (0 1)."""
    elems, index, table = s3_table()
    c_img = [0, index[(1, 0, 2)]]
    return AmalgamSpec.make(table, table, c_img, c_img, radius)


def amalgam_z4_spec(radius):
    """A = Z4, B = Z2 x Z2, C = Z2 embedded as the order-2 elements."""
    z4 = [[(i + j) % 4 for j in range(4)] for i in range(4)]
    v4 = [[i ^ j for j in range(4)] for i in range(4)]
    return AmalgamSpec.make(z4, v4, [0, 2], [0, 1], radius)


def _blowups():
    specs = [
        ("blowup_edge", BlowupSpec.make(
            ["x", "y"], [("x", "y")],
            {"x": ["x1", "x2"], "y": ["y1", "y2"]})),
        ("blowup_star", BlowupSpec.make(
            ["c"], [], {"c": ["c1", "c2", "c3"]})),
        ("blowup_path3", BlowupSpec.make(
            ["p", "q", "r"], [("p", "q"), ("q", "r")],
            {"p": ["p1"], "q": ["q1", "q2"], "r": []})),
        ("blowup_triangle", BlowupSpec.make(
            ["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")],
            {"a": ["a1"], "b": ["b1"], "c": ["c1"]})),
        ("blowup_c4", BlowupSpec.make(
            ["a", "b", "c", "d"],
            [("a", "b"), ("b", "c"), ("c", "d"), ("a", "d")],
            {"a": ["a1", "a2"], "c": ["c1"]})),
        ("blowup_p2_fat", BlowupSpec.make(
            ["u", "v"], [("u", "v")],
            {"u": ["u1", "u2", "u3"], "v": ["v1"]})),
    ]
    return [(name, gen_blowup(spec).complex) for name, spec in specs]


def _joins():
    out = []
    discrete = lambda tag, k: ([f"{tag}{i}" for i in range(k)], [])
    pathpart = lambda tag, k: (
        [f"{tag}{i}" for i in range(k)],
        [(f"{tag}{i}", f"{tag}{i+1}") for i in range(k - 1)])
    shapes = [
        ("join_2x2", [discrete("a", 2), discrete("b", 2)]),
        ("join_2x3", [discrete("a", 2), discrete("b", 3)]),
        ("join_3x3", [discrete("a", 3), discrete("b", 3)]),
        ("join_2x2x2", [discrete("a", 2), discrete("b", 2), discrete("c", 2)]),
        ("join_2x2x3", [discrete("a", 2), discrete("b", 2), discrete("c", 3)]),
        ("join_1x4", [discrete("a", 1), discrete("b", 4)]),
        ("join_point_path", [discrete("a", 1), pathpart("p", 4)]),
        ("join_edge_path", [pathpart("e", 2), pathpart("p", 3)]),
        ("join_path_path", [pathpart("p", 3), pathpart("q", 3)]),
        ("join_2x_path5", [discrete("a", 2), pathpart("p", 5)]),
        ("join_3x_path3", [discrete("a", 3), pathpart("p", 3)]),
        ("join_2x2x_path3", [discrete("a", 2), discrete("b", 2), pathpart("p", 3)]),
    ]
    for name, parts in shapes:
        cx, _ = gen_library("join", parts=parts)
        out.append((name, cx))
    return out


@lru_cache(maxsize=1)
def complexes():
    """(name, FlagComplex) pairs; deterministic order and content."""
    out = []
    for n in range(2, 13):
        out.append((f"path{n}", gen_library("path", n=n)[0]))
    for n in range(3, 15):
        out.append((f"cycle{n}", gen_library("cycle", n=n)[0]))
    for k in range(1, 4):
        out.append((f"octahedron{k}", gen_library("octahedron", k=k)[0]))
    out += _joins()
    out += _blowups()
    out.append(("amalgam_s3_r2", gen_amalgam(amalgam_s3_spec(2)).complex))
    out.append(("amalgam_z4_r2", gen_amalgam(amalgam_z4_spec(2)).complex))
    seeds = range(3)
    for n in range(6, 26):
        for p in (0.2, 0.35, 0.5):
            for seed in seeds:
                cx, _ = gen_library("random_flag", n=n, p=p, seed=seed + 10 * n)
                out.append((f"rf{n}_p{int(p*100)}_s{seed}", cx))
    return tuple(out)


@lru_cache(maxsize=1)
def instances():
    """(name, FlagComplex, XGraph) covering the three W rules on a spread of
    the corpus; used by the W-dependent suites."""
    picked = []
    for name, cx in complexes():
        small = len(cx.maximal_simplices) <= 60 and cx.n <= 25
        if not small:
            continue
        if name.startswith("rf"):
            if not name.endswith("_s0"):
                continue  # one random seed per shape keeps this suite quick
            n = int(name[2:].split("_")[0])
            if "_p50_" in name and n > 16:
                continue  # the dense large shapes dominate runtime, add little
        picked.append((name, cx))
    out = []
    for name, cx in picked:
        for rule in W_RULES:
            if rule == "none":
                w = XGraph.empty(cx)
            elif rule == "complete":
                w = XGraph.complete(cx)
            else:
                w = gen_library  # placeholder replaced below
                from chhs.generators import _apply_w_rule
                w = _apply_w_rule(cx, rule)
            out.append((f"{name}[{rule}]", cx, w))
    return tuple(out)


@lru_cache(maxsize=1)
def verified():
    """Instances that pass verify_chhs, with their reports."""
    from chhs import verify_chhs

    out = []
    for name, cx, w in instances():
        rep = verify_chhs(cx, w)
        if rep.passed:
            out.append((name, cx, w, rep))
    return tuple(out)
