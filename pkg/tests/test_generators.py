import pytest

from chhs import (
    BlowupSpec,
    XGraph,
    build_flag_complex,
    gen_amalgam,
    gen_blowup,
    gen_library,
)
from chhs.errors import BadParameters, InvalidEmbedding, OverlappingBlobs

from corpus import amalgam_s3_spec, amalgam_z4_spec


def test_octahedron_2_is_a_four_cycle():
    cx, _ = gen_library("octahedron", k=2)
    assert cx.n == 4
    assert all(m.bit_count() == 2 for m in cx.maximal_simplices)
    assert len(cx.maximal_simplices) == 4


def test_join_of_discrete_pairs_matches_octahedron():
    cx, _ = gen_library("join", parts=[(["a0", "b0"], []), (["a1", "b1"], [])])
    oct2, _ = gen_library("octahedron", k=2)
    assert len(cx.maximal_simplices) == len(oct2.maximal_simplices)
    assert cx.complexity == oct2.complexity


def test_random_flag_reproducible():
    a, _ = gen_library("random_flag", n=8, p=0.5, seed=7)
    b, _ = gen_library("random_flag", n=8, p=0.5, seed=7)
    assert a.labels == b.labels and a.adj == b.adj
    c, _ = gen_library("random_flag", n=8, p=0.5, seed=8)
    assert a.adj != c.adj


def test_w_rules():
    cx, w_none = gen_library("cycle", n=5, w_rule="none")
    assert not w_none.w_edges
    _, w_full = gen_library("cycle", n=5, w_rule="complete")
    assert len(w_full.w_edges) == 10
    _, w_shared = gen_library("cycle", n=5, w_rule="shared_codim1_face")
    assert len(w_shared.w_edges) == 5  # consecutive edges share one vertex


def test_bad_parameters():
    with pytest.raises(BadParameters):
        gen_library("cycle", n=2)
    with pytest.raises(BadParameters):
        gen_library("nonsense", n=3)
    with pytest.raises(BadParameters):
        gen_library("join", parts=[(["a"], []), (["a"], [])])


def test_blowup_edge_counts():
    res = gen_blowup(BlowupSpec.make(
        ["x", "y"], [("x", "y")], {"x": ["x1", "x2"], "y": ["y1", "y2"]}))
    cx = res.complex
    assert cx.n == 6
    cone = [e for e in cx.edge_labels() if res.collapse[e[0]] == res.collapse[e[1]]]
    cross = [e for e in cx.edge_labels() if res.collapse[e[0]] != res.collapse[e[1]]]
    assert len(cone) == 4 and len(cross) == 9


def test_blowup_single_vertex_star():
    res = gen_blowup(BlowupSpec.make(["c"], [], {"c": ["u", "v", "w"]}))
    cx = res.complex
    assert len(cx.maximal_simplices) == 3
    assert all(m.bit_count() == 2 for m in cx.maximal_simplices)


def test_blowup_rejects_overlap():
    with pytest.raises(OverlappingBlobs):
        gen_blowup(BlowupSpec.make(["x", "y"], [("x", "y")],
                                   {"x": ["z"], "y": ["z"]}))


def test_blowup_collapse_is_morphism():
    res = gen_blowup(BlowupSpec.make(
        ["a", "b", "c"], [("a", "b"), ("b", "c")],
        {"a": ["a1", "a2"], "b": ["b1"], "c": ["c1", "c2"]}))
    base_edges = {("a", "b"), ("b", "c")}
    for u, v in res.complex.edge_labels():
        cu, cv = res.collapse[u], res.collapse[v]
        assert cu == cv or (min(cu, cv), max(cu, cv)) in base_edges


def test_amalgam_interior_links_are_single_edges():
    res = gen_amalgam(amalgam_s3_spec(2))
    cx = res.complex
    for glabel in res.interior_elements:
        lk = cx.link((glabel,))
        sub = lk.as_complex()
        assert len(lk.vertices) == 2
        assert [sub.labels_of(m) for m in sub.maximal_simplices] == [sub.labels]


def test_amalgam_interior_coset_link_size():
    res = gen_amalgam(amalgam_s3_spec(2))
    cx = res.complex
    checked = 0
    for lab in res.interior_cosets:
        side, cs = res.coset_of[lab]
        if side == 0:  # an A-coset: |A| + |A/C| = 6 + 3
            assert len(cx.link((lab,)).vertices) == 9
            checked += 1
    assert checked >= 1


def test_amalgam_interior_maximal_simplices_are_triangles():
    res = gen_amalgam(amalgam_s3_spec(2))
    cx = res.complex
    interior = set(res.interior_elements)
    for m in cx.maximal_simplices:
        labs = cx.labels_of(m)
        elems = [l for l in labs if l.startswith("g")]
        if elems and elems[0] in interior:
            g = elems[0]
            assert len(labs) == 3
            sides = sorted(l[0] for l in labs)
            assert sides == ["A", "B", "g"]


def test_amalgam_suggested_w_edges_join_triangles():
    res = gen_amalgam(amalgam_z4_spec(2))
    keys = res.suggested_w.vertex_keys()
    for i, j in res.suggested_w.w_edges:
        assert "g" in keys[i] and "g" in keys[j]


def test_amalgam_invalid_embedding():
    z4 = [[(i + j) % 4 for j in range(4)] for i in range(4)]
    v4 = [[i ^ j for j in range(4)] for i in range(4)]
    with pytest.raises(InvalidEmbedding):
        # order-2 into order-4 element: not a homomorphic match
        from chhs import AmalgamSpec

        AmalgamSpec.make(z4, v4, [0, 1], [0, 1], 2)
