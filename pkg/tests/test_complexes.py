import pytest
from hypothesis import given, settings, strategies as st

from chhs import build_flag_complex, gen_library
from chhs.complexes import FlagComplex, bits
from chhs.errors import (
    DuplicateEdge,
    LoopEdge,
    NotASimplex,
    UnknownVertex,
)

from oracles import naive_link, naive_saturation


def labels(n):
    return [f"v{i:02d}" for i in range(n)]


@st.composite
def random_graphs(draw, max_n=9):
    n = draw(st.integers(min_value=1, max_value=max_n))
    verts = labels(n)
    pairs = [(verts[i], verts[j]) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return build_flag_complex(verts, chosen)


def test_build_triangle_one_maximal():
    cx = build_flag_complex("abc", [("a", "b"), ("b", "c"), ("c", "a")])
    assert [cx.labels_of(m) for m in cx.maximal_simplices] == [("a", "b", "c")]


def test_build_four_cycle_edges_maximal():
    cx = build_flag_complex("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
    assert [cx.labels_of(m) for m in cx.maximal_simplices] == [
        ("a", "b"), ("a", "d"), ("b", "c"), ("c", "d")]


def test_build_discrete_vertices_maximal():
    cx = build_flag_complex("abc", [])
    assert [cx.labels_of(m) for m in cx.maximal_simplices] == [("a",), ("b",), ("c",)]


def test_build_errors():
    with pytest.raises(UnknownVertex):
        build_flag_complex("ab", [("a", "z")])
    with pytest.raises(LoopEdge):
        build_flag_complex("ab", [("a", "a")])
    with pytest.raises(DuplicateEdge):
        build_flag_complex("ab", [("a", "b"), ("b", "a")])


def test_link_of_empty_is_whole_complex():
    cx = build_flag_complex("abc", [("a", "b"), ("b", "c"), ("c", "a")])
    assert cx.link(()).vertices == ("a", "b", "c")


def test_link_in_triangle():
    cx = build_flag_complex("abc", [("a", "b"), ("b", "c"), ("c", "a")])
    lk = cx.link(("a",))
    assert lk.vertices == ("b", "c")
    sub = lk.as_complex()
    assert [sub.labels_of(m) for m in sub.maximal_simplices] == [("b", "c")]


def test_link_rejects_non_simplex():
    cx = build_flag_complex("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
    with pytest.raises(NotASimplex):
        cx.link(("a", "c"))
    with pytest.raises(NotASimplex):
        cx.link(("a", "a"))


def test_star_and_join():
    cx = build_flag_complex("abc", [("a", "b"), ("b", "c"), ("c", "a")])
    assert cx.star(("a",)).vertices == ("a", "b", "c")
    k = cx.link(("a", "b"))     # {c}
    l = cx.link(("b", "c"))     # {a}
    assert cx.join(k, l).vertices == ("a", "c")


def test_saturation_four_cycle():
    cx = build_flag_complex("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
    assert cx.saturation(("b",)) == ("b", "d")
    assert cx.saturation(("a",)) == ("a", "c")


def test_saturation_triangle_vertex_is_itself():
    cx = build_flag_complex("abc", [("a", "b"), ("b", "c"), ("c", "a")])
    assert cx.saturation(("a",)) == ("a",)


def test_classes_single_vertex():
    cx = build_flag_complex("a", [])
    cls = cx.simplex_classes
    assert len(cls) == 1 and cls[0].representative == ()


def test_classes_four_cycle():
    cx = build_flag_complex("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
    cls = cx.simplex_classes
    assert len(cls) == 3
    reps = {c.representative for c in cls}
    assert reps == {(), ("a",), ("b",)}
    by_rep = {c.representative: c for c in cls}
    assert by_rep[("a",)].saturation == ("a", "c")


def test_classes_octahedron_derived():
    cx, _ = gen_library("octahedron", k=3)
    # brute-force link enumeration: group all non-maximal cliques by link
    groups = {}
    for c in cx.cliques:
        lk = naive_link(cx, c)
        if lk:
            groups.setdefault(lk, []).append(c)
    assert len(cx.simplex_classes) == len(groups) == 7
    reps = {cls.representative for cls in cx.simplex_classes}
    assert () in reps
    assert all(cx.labels_of(min(g, key=lambda m: (bin(m).count("1"), cx.labels_of(m)))) in reps
               for g in groups.values())


def test_complexity_discrete_and_triangle():
    assert build_flag_complex("ab", []).complexity[0] == 2
    assert build_flag_complex("abc", []).complexity[0] == 2
    cx = build_flag_complex("abc", [("a", "b"), ("b", "c"), ("c", "a")])
    assert cx.complexity == (4, 2)


def test_complexity_relabel_invariant():
    cx1, _ = gen_library("cycle", n=6)
    relabeled = {f"v{i:02d}": f"w{(i * 5) % 7}" for i in range(6)}
    cx2 = build_flag_complex(
        [relabeled[v] for v in cx1.labels],
        [(relabeled[u], relabeled[v]) for u, v in cx1.edge_labels()])
    assert cx1.complexity[0] == cx2.complexity[0]


@settings(max_examples=60, deadline=None)
@given(random_graphs())
def test_link_of_saturation_equals_link(cx):
    for c in cx.cliques:
        sat = cx.saturation_mask(c)
        assert cx.link_mask(sat) == cx.link_mask(c)


@settings(max_examples=60, deadline=None)
@given(random_graphs())
def test_triple_link_identity(cx):
    for c in cx.cliques:
        lk = cx.link_mask(c)
        assert cx.link_mask(cx.link_mask(lk)) == lk


@settings(max_examples=60, deadline=None)
@given(random_graphs())
def test_face_monotonicity(cx):
    for c in cx.cliques:
        for v in bits(c):
            face = c & ~(1 << v)
            assert cx.link_mask(c) & ~cx.link_mask(face) == 0


@settings(max_examples=40, deadline=None)
@given(random_graphs(max_n=7))
def test_saturation_matches_naive(cx):
    for c in cx.cliques:
        assert cx.saturation_mask(c) == naive_saturation(cx, c)


@settings(max_examples=40, deadline=None)
@given(random_graphs())
def test_link_empty_iff_maximal(cx):
    maximal = set(cx.maximal_simplices)
    for c in cx.cliques:
        assert (cx.link_mask(c) == 0) == (c in maximal)


@settings(max_examples=40, deadline=None)
@given(random_graphs())
def test_saturation_constant_on_classes(cx):
    for cls in cx.simplex_classes:
        lm = cx.mask_of(cls.link)
        members = [c for c in cx.cliques if cx.link_mask(c) == lm]
        sats = {cx.saturation_mask(c) for c in members}
        assert len(sats) == 1
        assert cx.labels_of(sats.pop()) == cls.saturation


@settings(max_examples=40, deadline=None)
@given(random_graphs())
def test_dimension_complexity_bound(cx):
    n, dim = cx.complexity
    assert dim + 2 <= n
