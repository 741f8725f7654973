import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bcfb.geometry import (HalfPlane, Infeasible, RatePoint, RateRegion, Unbounded, contains_point,
                           contains_region, frontier_union, frontier_value, hausdorff, hull_frontier,
                           hull_region, points_to_csv, region_hausdorff, strict_improvement, vertices)


def tri(a: float, b: float, s: float) -> RateRegion:
    return RateRegion([HalfPlane(1, 0, a), HalfPlane(0, 1, b), HalfPlane(1, 1, s)])


def test_vertices_pentagon():
    v = vertices(tri(0.5, 0.7, 1.0))
    assert [c for p in v for c in p] == pytest.approx([0, 0, 0.5, 0, 0.5, 0.5, 0.3, 0.7, 0, 0.7])


def test_infeasible_and_unbounded():
    with pytest.raises(Infeasible):
        vertices(RateRegion([HalfPlane(1, 1, -0.1)]))
    with pytest.raises(Unbounded):
        vertices(RateRegion([HalfPlane(1, 0, 1.0)]))
    with pytest.raises(ValueError):
        HalfPlane(0, 0, 1)


def test_max_r2_and_contains():
    r = tri(0.5, 0.7, 1.0)
    assert r.max_r2(0.4) == pytest.approx(0.6)
    assert r.max_r2(0.6) is None
    assert r.max_r1() == pytest.approx(0.5)
    assert contains_point(r, (0.3, 0.7))
    assert not contains_point(r, (0.3, 0.71))
    assert not contains_point(r, (-0.1, 0.0))


def test_region_relations():
    small, big = tri(0.4, 0.4, 0.6), tri(0.5, 0.7, 1.0)
    assert contains_region(big, small)
    assert not contains_region(small, big)
    w = strict_improvement(big, small)
    assert w is not None and not contains_point(small, w)
    assert strict_improvement(small, big) is None
    assert region_hausdorff(big, big) == 0.0


def test_hausdorff_points():
    a = [RatePoint(0, 0), RatePoint(1, 0)]
    b = [RatePoint(0, 0), RatePoint(1, 1)]
    assert hausdorff(a, b) == pytest.approx(1.0)
    assert hausdorff([], []) == 0.0
    assert hausdorff(a, []) == math.inf


def test_hull_of_two_boxes():
    boxes = [RateRegion.box(1.0, 0.0), RateRegion.box(0.0, 1.0)]
    h = hull_region(boxes)
    assert contains_point(h, (0.5, 0.5))
    assert not contains_point(h, (0.5, 0.51))
    fr = hull_frontier(boxes, [0.0, 0.25, 0.5, 1.0])
    assert [p.r2 for p in fr] == pytest.approx([1.0, 0.75, 0.5, 0.0])
    un = frontier_union(boxes, [0.0, 0.5, 1.0])
    assert [p.r2 for p in un] == pytest.approx([1.0, 0.0, 0.0])
    assert frontier_value(fr, 0.75) == pytest.approx(0.25)
    assert frontier_value(fr, 1.5) == -math.inf


def test_csv_format():
    text = points_to_csv([RatePoint(0.1, 1 / 3)])
    assert text == "r1,r2\n0.1,0.333333333333\n"


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.floats(0.05, 1), st.floats(0.05, 1), st.floats(0.1, 3)), min_size=1, max_size=6))
def test_vertices_are_feasible_and_convex(rows):
    region = RateRegion([HalfPlane(a1, a2, b) for a1, a2, b in rows])
    v = vertices(region)
    for p in v:
        assert contains_point(region, p, 1e-9)
    # counter-clockwise orientation
    pts = np.array([[p.r1, p.r2] for p in v])
    if len(pts) >= 3:
        area = 0.5 * np.sum(pts[:, 0] * np.roll(pts[:, 1], -1) - np.roll(pts[:, 0], -1) * pts[:, 1])
        assert area > 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=1, max_size=5))
def test_hull_contains_every_region(corners):
    regs = [RateRegion.box(a, b) for a, b in corners]
    h = hull_region(regs)
    for r in regs:
        assert contains_region(h, r, 1e-9)
