import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ordered_theta.bounds import theorem_bound_factor
from ordered_theta.construction import Edge, SpannerGraph, build_ordered
from ordered_theta.errors import TooLarge, WrongFamily
from ordered_theta.generators import gen_random, gen_staircase_4k4, gen_tower
from ordered_theta.geometry import ConeSystem, Point, dist
from ordered_theta.metrics import (
    all_pairs_stretch,
    distance_matrix,
    floyd_warshall,
    shortest_path,
    shortest_path_distance,
    stretch_oracle,
    theorem1_certificate,
)


def graph(points, pairs):
    pts = [Point(*p) for p in points]
    return SpannerGraph(pts, [Edge(a, b, dist(pts[a], pts[b])) for a, b in pairs])


def test_shortest_path_examples():
    assert shortest_path_distance(graph([(0, 0), (0, 1)], [(0, 1)]), 0, 1) == pytest.approx(1.0)
    g = graph([(0, 0), (1, 0), (1, 1)], [(0, 1), (1, 2)])
    assert shortest_path_distance(g, 0, 2) == pytest.approx(2.0)
    assert shortest_path(g, 0, 2) == [0, 1, 2]
    isolated = graph([(0, 0), (3, 1)], [])
    assert math.isinf(shortest_path_distance(isolated, 0, 1))
    assert shortest_path(isolated, 0, 1) is None


def test_vertex_index_validation():
    with pytest.raises(IndexError):
        shortest_path_distance(graph([(0, 0), (0, 1)], [(0, 1)]), 0, 5)


def test_complete_graph_has_stretch_one():
    pts = [(0, 0), (1, 0.2), (0.3, 2), (-1, 1.1)]
    g = graph(pts, list(combinations(range(4), 2)))
    rep = all_pairs_stretch(g)
    assert rep.max_stretch == pytest.approx(1.0)
    assert not rep.disconnected
    assert stretch_oracle(g).max_stretch == pytest.approx(1.0)


def test_path_stretch():
    pts = [(0, 0), (0.5, 0.1), (1, 0)]
    g = graph(pts, [(0, 1), (1, 2)])
    expected = (math.hypot(0.5, 0.1) * 2) / 1.0
    rep = all_pairs_stretch(g, per_pair=True)
    assert rep.max_stretch == pytest.approx(expected)
    assert rep.witness == (0, 2)
    assert max(r.ratio for r in rep.per_pair) == rep.max_stretch


def test_disconnected_is_reported():
    g = graph([(0, 0), (1, 0.3), (5, 5)], [(0, 1)])
    rep = all_pairs_stretch(g, per_pair=True)
    assert rep.disconnected
    assert rep.max_stretch == pytest.approx(1.0)
    assert sum(math.isinf(r.ratio) for r in rep.per_pair) == 2


def test_two_vertices_required():
    with pytest.raises(ValueError):
        all_pairs_stretch(graph([(0, 0)], []))


def test_witness_lexicographic():
    # a square cycle: opposite corners tie; the smaller pair wins
    g = graph([(0, 0), (1, 0), (1, 1), (0, 1)], [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert all_pairs_stretch(g).witness == (0, 2)
    assert stretch_oracle(g).witness == (0, 2)


def test_tower_stretch():
    inst = gen_tower(4, 10)
    rep = all_pairs_stretch(inst.build())
    assert rep.max_stretch == pytest.approx(1 + 10 * math.sqrt(2), rel=1e-3)
    assert stretch_oracle(inst.build()).max_stretch == pytest.approx(rep.max_stretch, abs=1e-9)


def test_oracle_guard():
    g = SpannerGraph([Point(i, 0.37 * i * i) for i in range(513)])
    with pytest.raises(TooLarge):
        stretch_oracle(g)


def test_threads_do_not_change_result():
    inst = gen_random(8, 80, seed=4)
    g = inst.build()
    a = all_pairs_stretch(g, threads=1)
    b = all_pairs_stretch(g, threads=4)
    assert (a.max_stretch, a.witness) == (b.max_stretch, b.witness)
    assert np.array_equal(distance_matrix(g, 1), distance_matrix(g, 4))


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 14), st.integers(2, 40), st.integers(0, 10**6))
def test_metric_sanity(m, n, seed):
    inst = gen_random(m, n, seed=seed)
    g = inst.build()
    d = distance_matrix(g)
    fw = floyd_warshall(g)
    finite = np.isfinite(d)
    assert np.array_equal(finite, np.isfinite(fw))
    assert np.allclose(d[finite], fw[finite], atol=1e-9)
    assert np.allclose(d[finite], d.T[finite], rtol=1e-12, atol=0)
    xy = np.array([(p.x, p.y) for p in g.points])
    euclid = np.hypot(xy[:, None, 0] - xy[None, :, 0], xy[:, None, 1] - xy[None, :, 1])
    assert np.all(d >= euclid - 1e-12)
    via = (d[:, :, None] + d[None, :, :]).min(axis=1)  # min over intermediate k
    assert np.all(d <= via + 1e-9)


# -- certificate ----------------------------------------------------------------

def test_bound_factor_examples():
    theta = math.pi / 4
    assert theorem_bound_factor(theta, theta / 2) == pytest.approx(1 + math.sqrt(2), abs=1e-12)
    assert theorem_bound_factor(theta, theta / 2) == pytest.approx(2.4142136, abs=1e-7)
    h = theta / 2
    at_zero = 1 / math.cos(h) + math.tan(h) / (math.cos(h) - math.sin(h))
    assert theorem_bound_factor(theta, 0.0) == pytest.approx(at_zero, abs=1e-12)
    assert theorem_bound_factor(theta, 0.0) == pytest.approx(1.8477590, abs=1e-7)


@pytest.mark.parametrize("m", [8, 12, 16, 20, 40])
def test_bound_factor_monotone_in_alpha(m):
    theta = 2 * math.pi / m
    grid = np.linspace(0.0, theta / 2, 2001)
    vals = [theorem_bound_factor(theta, a) for a in grid]
    assert all(b >= a - 1e-15 for a, b in zip(vals, vals[1:]))
    assert min(vals) >= 1.0


def test_certificate_wrong_family():
    inst = gen_random(9, 5, seed=1)
    with pytest.raises(WrongFamily):
        theorem1_certificate(inst.system, inst.build(), inst.order)
    with pytest.raises(WrongFamily):
        theorem1_certificate(ConeSystem(4), inst.build(), inst.order)


def test_certificate_single_edge():
    s = ConeSystem(8)
    pts = [Point(0.1, 1.0), Point(0.0, 0.0)]
    g = build_ordered(s, pts, [0, 1])
    rows = theorem1_certificate(s, g, [0, 1])
    assert len(rows) == 1
    assert rows[0].delta == pytest.approx(dist(*pts))
    assert rows[0].passed


def test_certificate_on_staircase():
    inst = gen_staircase_4k4(8, 20)
    rows = theorem1_certificate(inst.system, inst.build(), inst.order)
    n = len(inst.points)
    assert len(rows) == n * (n - 1) // 2
    assert all(r.passed for r in rows)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([8, 12, 16]), st.integers(2, 40), st.integers(0, 10**6))
def test_certificate_on_random(m, n, seed):
    inst = gen_random(m, n, seed=seed)
    assert all(r.passed for r in theorem1_certificate(inst.system, inst.build(), inst.order))
