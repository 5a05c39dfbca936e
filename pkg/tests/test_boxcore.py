import math
import random

import pytest
from hypothesis import given

from bboxlab import BBox, CornerBox, InvalidBox
from bboxlab.boxcore import (
    center_distance_sq,
    enclosure,
    from_corners,
    intersection_area,
    iou,
    to_corners,
    union_area,
)
from conftest import boxes_strategy

A = BBox(1, 1, 2, 2)
B = BBox(2, 2, 2, 2)


def test_to_corners_examples():
    assert to_corners(BBox(1, 1, 2, 2)) == CornerBox(0, 0, 2, 2)
    assert to_corners(BBox(0, 0, 4, 2)) == CornerBox(-2, -1, 2, 1)


def test_corner_round_trip(rng):
    for _ in range(1000):
        b = BBox(rng.uniform(-100, 100), rng.uniform(-100, 100), rng.uniform(1e-3, 50), rng.uniform(1e-3, 50))
        back = from_corners(to_corners(b))
        for u, v in zip(back.as_tuple(), b.as_tuple()):
            assert u == pytest.approx(v, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("w,h", [(0, 1), (1, 0), (-1, 2), (float("nan"), 1), (1, float("inf"))])
def test_degenerate_boxes_rejected(w, h):
    with pytest.raises(InvalidBox):
        BBox(0, 0, w, h)


def test_corner_box_rejects_inverted():
    with pytest.raises(InvalidBox):
        CornerBox(1, 0, 0, 1)


def test_intersection_examples():
    assert intersection_area(A, B) == 1.0
    assert intersection_area(A, A) == A.area
    assert intersection_area(BBox(0, 0, 1, 1), BBox(10, 10, 1, 1)) == 0.0


def test_touching_boxes_have_zero_overlap():
    assert intersection_area(BBox(0, 0, 2, 2), BBox(2, 0, 2, 2)) == 0.0
    assert iou(BBox(0, 0, 2, 2), BBox(2, 0, 2, 2)) == 0.0


def test_union_examples():
    assert union_area(A, B) == 7.0
    assert union_area(A, A) == A.area
    assert union_area(BBox(0, 0, 1, 1), BBox(10, 10, 1, 1)) == 2.0


def test_enclosure_examples():
    e = enclosure(A, B)
    assert e.enclosing == CornerBox(0, 0, 3, 3)
    assert (e.c_sq, e.w_c, e.h_c) == (18, 3, 3)
    e = enclosure(A, A)
    assert e.enclosing == to_corners(A)
    assert e.c_sq == A.w**2 + A.h**2
    outer, inner = BBox(0, 0, 10, 6), BBox(1, -1, 2, 2)
    assert enclosure(outer, inner).enclosing == to_corners(outer)


def test_center_distance_examples():
    assert center_distance_sq(BBox(0, 0, 1, 1), BBox(3, 4, 2, 2)) == 25.0
    assert center_distance_sq(A, A) == 0.0


def test_iou_examples():
    assert iou(A, B) == pytest.approx(1 / 7, abs=1e-15)
    assert iou(A, A) == 1.0
    assert iou(BBox(0, 0, 1, 1), BBox(10, 10, 1, 1)) == 0.0


@given(boxes_strategy(), boxes_strategy())
def test_area_relations(a, b):
    inter = intersection_area(a, b)
    assert 0 <= inter <= min(a.area, b.area) * (1 + 1e-12)
    u = union_area(a, b)
    assert u == pytest.approx(a.area + b.area - inter, rel=1e-12)
    assert u >= max(a.area, b.area) * (1 - 1e-12)
    e = enclosure(a, b)
    assert e.enclosing.area >= u * (1 - 1e-12)
    assert e.enclosing.contains(to_corners(a)) and e.enclosing.contains(to_corners(b))
    assert e.c_sq == pytest.approx(e.w_c**2 + e.h_c**2, rel=1e-15)


@given(boxes_strategy(), boxes_strategy())
def test_enclosure_is_tight(a, b):
    e = enclosure(a, b).enclosing
    ca, cb = to_corners(a), to_corners(b)
    assert e.x_min == min(ca.x_min, cb.x_min) and e.x_max == max(ca.x_max, cb.x_max)
    assert e.y_min == min(ca.y_min, cb.y_min) and e.y_max == max(ca.y_max, cb.y_max)


@given(boxes_strategy(), boxes_strategy())
def test_iou_symmetry_and_range(a, b):
    v = iou(a, b)
    assert 0.0 <= v <= 1.0
    assert v == pytest.approx(iou(b, a), rel=1e-12, abs=1e-15)
    assert (v == 0.0) == (intersection_area(a, b) == 0.0)
    assert center_distance_sq(a, b) == center_distance_sq(b, a)


def test_iou_invariances(rng):
    for _ in range(500):
        a = BBox(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(0.5, 4), rng.uniform(0.5, 4))
        b = BBox(a.x_c + rng.uniform(-2, 2), a.y_c + rng.uniform(-2, 2), rng.uniform(0.5, 4), rng.uniform(0.5, 4))
        v = iou(a, b)
        dx, dy = rng.uniform(-100, 100), rng.uniform(-100, 100)
        assert iou(a.translated(dx, dy), b.translated(dx, dy)) == pytest.approx(v, rel=1e-9, abs=1e-12)
        s = math.exp(rng.uniform(-5, 5))
        assert iou(a.scaled(s), b.scaled(s)) == pytest.approx(v, rel=1e-12, abs=1e-15)


def test_iou_one_iff_equal():
    a = BBox(0.3, -0.2, 1.5, 0.7)
    assert iou(a, a) == 1.0
    assert iou(a, BBox(0.3, -0.2, 1.5, 0.70001)) < 1.0
