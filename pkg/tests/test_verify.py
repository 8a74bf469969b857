from fractions import Fraction

import pytest

from chhs import (
    INF,
    XGraph,
    build_flag_complex,
    build_w_from_link_edges,
    check_action,
    check_condition4,
    check_thmA_conditions,
    gen_library,
    verify_chhs,
)
from chhs.errors import (
    ActionNotSimplicial,
    EdgeOutsideLink,
    EndpointOutsideLink,
    NonMaximalJoin,
    NotAlmostMaximal,
    NotAPermutation,
)


def four_cycle():
    return build_flag_complex("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])


def glued_squares_with_pendant():
    return build_flag_complex(
        "abcdefg",
        [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"),
         ("a", "e"), ("e", "c"), ("c", "f"), ("f", "a"), ("g", "a")])


def test_octahedron_complete_passes():
    cx, w = gen_library("octahedron", k=3, w_rule="complete")
    rep = verify_chhs(cx, w)
    assert rep.passed
    assert rep.complexity_n == 4
    assert rep.delta_star == 1
    assert all(v.passed for v in rep.conditions.values())


def test_two_disjoint_edges_fail_link_geometry():
    cx = build_flag_complex("abcd", [("a", "b"), ("c", "d")])
    rep = verify_chhs(cx, XGraph.empty(cx))
    assert not rep.passed
    verdict = rep.conditions["link_geometry"]
    assert not verdict.passed
    assert verdict.witness["class"] == ""  # the empty-simplex class
    u, v = verdict.witness["pair"]
    assert {u, v} <= {"a", "b", "c", "d"}
    assert rep.delta_floor is INF and rep.delta_star is None


def test_four_cycle_complete_w_passes():
    cx, w = gen_library("cycle", n=4, w_rule="complete")
    rep = verify_chhs(cx, w)
    assert rep.passed and rep.delta_star == 1


def test_verify_reports_class_table():
    cx, w = gen_library("cycle", n=4, w_rule="complete")
    rep = verify_chhs(cx, w)
    rows = {r.key: r for r in rep.class_table}
    assert set(rows) == {"", "v00", "v01"}
    assert rows["v00"].lam == 1 and rows["v00"].diam_c == 1


def test_verify_diagnostics_optional():
    cx, w = gen_library("cycle", n=4, w_rule="complete")
    assert verify_chhs(cx, w).diagnostics is None
    rep = verify_chhs(cx, w, diagnostics=True)
    assert rep.diagnostics is not None
    assert set(rep.diagnostics.delta_y) == {"", "v00", "v01"}
    assert all(v == 0 for v in rep.diagnostics.delta_y.values())


def test_condition4_failure_witness():
    # path with a w-edge joining the two end edges: v00 and v03 are
    # non-adjacent, W-linked, but no W-adjacent pair goes through [v01]
    cx = build_flag_complex("abcd", [("a", "b"), ("b", "c"), ("c", "d")])
    ki = {cx.maximal_key(m): i for i, m in enumerate(cx.maximal_simplices)}
    w = XGraph.from_pairs(cx, [(ki["a|b"], ki["c|d"])])
    verdict = check_condition4(cx, w)
    assert not verdict.passed
    assert verdict.witness["pair"] in (("a", "c"), ("a", "d"), ("b", "d"), ("b", "c"))


def test_condition4_passes_on_refined_w():
    cx, w = gen_library("cycle", n=4, w_rule="complete")
    assert check_condition4(cx, w).passed


def test_thmA_glued_squares_b_fails_at_documented_pair():
    cx = glued_squares_with_pendant()
    rep = check_thmA_conditions(cx)
    failing = [(k, v) for k, v in rep.link_intersections.items()
               if not v["passed"]]
    assert failing == [(("a", "c"),
                        {"passed": False,
                         "witness": {"first_class": "a", "second_class": "c",
                                     "intersection": "b|d|e|f"}})]
    assert not rep.intersections_passed


def test_thmA_four_cycle_connectivity_exemption():
    cx = four_cycle()
    rep = check_thmA_conditions(cx)
    assert rep.connectivity_passed
    assert not rep.link_connectivity["a"]["connected"]
    assert rep.link_connectivity["a"]["exempt"]


def test_thmA_octahedron_intersections():
    cx, _ = gen_library("octahedron", k=3)
    rep = check_thmA_conditions(cx)
    assert rep.intersections_passed
    a_key = cx.class_of(("a0",)).key
    b_key = cx.class_of(("a1",)).key
    res = rep.link_intersections[(a_key, b_key)]
    assert res["passed"] and res["pi"] != ""


def test_thmA_extra_edges_validated():
    cx = four_cycle()
    with pytest.raises(EdgeOutsideLink):
        check_thmA_conditions(cx, {"a": [("a", "b")]})


def test_thmA_extra_edges_change_constants():
    cx = four_cycle()
    rep = check_thmA_conditions(cx, {"a": [("b", "d")]})
    assert rep.link_hyperbolicity["a"]["delta"] == 0
    rep_bare = check_thmA_conditions(cx)
    assert rep_bare.link_hyperbolicity["a"]["delta"] is INF


def test_build_w_four_cycle_documented_edges():
    cx = four_cycle()
    w = build_w_from_link_edges(cx, {"a": [("b", "d")]})
    assert w.edge_keys() == [("a|b", "a|d"), ("b|c", "c|d")]


def test_build_w_empty_assignment():
    cx = four_cycle()
    w = build_w_from_link_edges(cx, {})
    assert not w.w_edges


def test_build_w_validates_inputs():
    cx = four_cycle()
    with pytest.raises(EndpointOutsideLink):
        build_w_from_link_edges(cx, {"a": [("a", "b")]})
    tri = build_flag_complex("abc", [("a", "b"), ("b", "c"), ("c", "a")])
    with pytest.raises(NotAlmostMaximal):
        build_w_from_link_edges(tri, {"a": [("b", "c")]})


def test_build_w_rejects_non_maximal_join():
    # {a} is almost-maximal via the bare edge {a,b}, but joining with c
    # lands inside the triangle {a,c,d}
    cx = build_flag_complex("abcd", [("a", "b"), ("a", "c"), ("a", "d"), ("c", "d")])
    with pytest.raises(NonMaximalJoin):
        build_w_from_link_edges(cx, {"a": [("b", "c")]})


def test_build_w_orbit_closure_under_rotation():
    cx = four_cycle()
    rot = {"a": "b", "b": "c", "c": "d", "d": "a"}
    w = build_w_from_link_edges(cx, {"a": [("b", "d")]}, action=[rot])
    assert len(w.w_edges) == 4
    report = check_action(cx, w, [rot])
    assert report.passed
    assert report.vertex_orbits == 1
    assert report.maximal_orbits == 1
    assert report.class_orbits == 2  # the empty class and the vertex classes
    assert report.equivariance_ok


def test_check_action_identity():
    cx = four_cycle()
    ident = {v: v for v in "abcd"}
    rep = check_action(cx, XGraph.empty(cx), [ident])
    assert rep.passed
    assert rep.vertex_orbits == 4 and rep.maximal_orbits == 4


def test_check_action_transposition_not_simplicial():
    cx = build_flag_complex("abc", [("a", "b"), ("b", "c")])
    rep = check_action(cx, XGraph.empty(cx), [{"a": "b", "b": "a", "c": "c"}])
    assert not rep.passed
    gr = rep.generator_reports[0]
    assert not gr["simplicial"] and gr["witness"] is not None


def test_check_action_rejects_non_permutation():
    cx = four_cycle()
    with pytest.raises(NotAPermutation):
        check_action(cx, XGraph.empty(cx), [{"a": "a"}])


def test_action_not_simplicial_blocks_build_w():
    cx = build_flag_complex("abc", [("a", "b"), ("b", "c")])
    with pytest.raises(ActionNotSimplicial):
        build_w_from_link_edges(cx, {"b": [("a", "c")]},
                                action=[{"a": "b", "b": "a", "c": "c"}])
