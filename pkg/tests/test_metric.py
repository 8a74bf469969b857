from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chhs import (
    INF,
    coarse_projection,
    gromov_delta,
    qi_constants,
    shortest_path_metric,
)
from chhs.errors import CapExceeded, Disconnected, EmptyTarget, Unreachable

from oracles import naive_delta


def path_graph(n):
    verts = [f"v{i:02d}" for i in range(n)]
    return shortest_path_metric(verts, [(verts[i], verts[i + 1]) for i in range(n - 1)])


def cycle_graph(n):
    verts = [f"v{i:02d}" for i in range(n)]
    return shortest_path_metric(verts, [(verts[i], verts[(i + 1) % n]) for i in range(n)])


def complete_graph(n):
    verts = [f"v{i:02d}" for i in range(n)]
    return shortest_path_metric(
        verts, [(verts[i], verts[j]) for i in range(n) for j in range(i + 1, n)])


def test_single_edge_distance():
    g = shortest_path_metric("uv", [("u", "v")])
    assert g.d("u", "v") == 1


def test_four_cycle_opposites():
    g = cycle_graph(4)
    assert g.d("v00", "v02") == 2


def test_components_are_infinitely_far():
    g = shortest_path_metric("abcd", [("a", "b"), ("c", "d")])
    assert g.d("a", "c") is INF
    assert not g.connected()


def test_delta_of_trees_is_zero():
    for n in (2, 5, 9):
        assert gromov_delta(path_graph(n)) == 0
    star = shortest_path_metric("cabde", [("c", v) for v in "abde"])
    assert gromov_delta(star) == 0


def test_delta_of_four_cycle_is_one():
    assert gromov_delta(cycle_graph(4)) == 1


def test_delta_of_complete_graphs_is_zero():
    for n in (2, 3, 6):
        assert gromov_delta(complete_graph(n)) == 0


def test_delta_can_be_half_integer():
    g = cycle_graph(5)
    assert gromov_delta(g) == Fraction(1, 2)


def test_delta_requires_connectivity():
    g = shortest_path_metric("abcd", [("a", "b"), ("c", "d")])
    with pytest.raises(Disconnected):
        gromov_delta(g)


def test_delta_cap():
    with pytest.raises(CapExceeded):
        gromov_delta(path_graph(12), vertex_cap=10)


def test_delta_isomorphism_invariant():
    g1 = cycle_graph(6)
    verts = list("qwerty")
    g2 = shortest_path_metric(verts, [(verts[i], verts[(i + 1) % 6]) for i in range(6)])
    assert gromov_delta(g1) == gromov_delta(g2)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=12345))
def test_delta_matches_naive_on_random_graphs(seed):
    import random

    rng = random.Random(seed)
    n = rng.randint(4, 12)
    verts = [f"v{i:02d}" for i in range(n)]
    edges = [(verts[i], verts[i + 1]) for i in range(n - 1)]  # keep connected
    for i in range(n):
        for j in range(i + 2, n):
            if rng.random() < 0.3:
                edges.append((verts[i], verts[j]))
    g = shortest_path_metric(verts, edges)
    assert gromov_delta(g) == naive_delta(g)


def test_qi_identity_inclusion():
    g = cycle_graph(6)
    rep = qi_constants(g, g.labels, g)
    assert rep.lam == 1


def test_qi_infinite_with_witness():
    b = cycle_graph(4)
    a = shortest_path_metric(["v00", "v02"], [])
    rep = qi_constants(b, ["v00", "v02"], a)
    assert rep.lam is INF and rep.witness_pair == ("v00", "v02")


def test_qi_monotone_under_ambient_edges():
    verts = list("abcdef")
    path_edges = [(verts[i], verts[i + 1]) for i in range(5)]
    a = shortest_path_metric(verts, path_edges)
    b_sparse = shortest_path_metric(verts, path_edges)
    b_dense = shortest_path_metric(verts, path_edges + [("a", "f")])
    lam_sparse = qi_constants(b_sparse, verts, a).lam
    lam_dense = qi_constants(b_dense, verts, a).lam
    assert lam_dense >= lam_sparse


def test_projection_slack_one_set():
    g = path_graph(3)
    assert coarse_projection(g, ["v00", "v01", "v02"], "v00") == ("v00", "v01")


def test_projection_distant_singleton():
    g = path_graph(3)
    assert coarse_projection(g, ["v02"], "v00") == ("v02",)


def test_projection_unreachable():
    g = shortest_path_metric("abcd", [("a", "b"), ("c", "d")])
    with pytest.raises(Unreachable):
        coarse_projection(g, ["c", "d"], "a")
    with pytest.raises(EmptyTarget):
        coarse_projection(g, [], "a")


def test_projection_contains_all_nearest_points():
    g = cycle_graph(6)
    target = ["v01", "v04"]
    for v in g.labels:
        proj = coarse_projection(g, target, v)
        near = min(g.d(v, t) for t in target)
        for t in target:
            if g.d(v, t) == near:
                assert t in proj
