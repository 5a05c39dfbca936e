"""Axis-aligned boxes and the geometric primitives the metrics are built from.

Every function here is written with plain arithmetic plus the helpers in
:mod:`bboxlab._dual`, so the same code evaluates on floats and on dual
numbers (which is how :mod:`bboxlab.grad` gets exact derivatives).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._dual import fabs, fmax, fmin
from .errors import InvalidBox


def _finite(x) -> bool:
    return math.isfinite(float(x))


@dataclass(frozen=True)
class BBox:
    """Box in center form ``(x_c, y_c, w, h)``."""

    x_c: float
    y_c: float
    w: float
    h: float

    def __post_init__(self):
        for name in ("x_c", "y_c", "w", "h"):
            v = getattr(self, name)
            if isinstance(v, int):
                object.__setattr__(self, name, float(v))
        if not all(_finite(v) for v in (self.x_c, self.y_c, self.w, self.h)):
            raise InvalidBox(f"non-finite box field in {self}")
        if not (self.w > 0 and self.h > 0):
            raise InvalidBox(f"box needs w > 0 and h > 0, got w={self.w}, h={self.h}")

    @property
    def area(self):
        return self.w * self.h

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x_c, self.y_c, self.w, self.h)

    def translated(self, dx: float, dy: float) -> BBox:
        return BBox(self.x_c + dx, self.y_c + dy, self.w, self.h)

    def scaled(self, s: float) -> BBox:
        """Scale every coordinate and size by ``s`` about the origin."""
        return BBox(self.x_c * s, self.y_c * s, self.w * s, self.h * s)

    @classmethod
    def parse(cls, text: str) -> BBox:
        """Parse ``"xc,yc,w,h"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected 4 comma-separated numbers, got {text!r}")
        return cls(*(float(p) for p in parts))


@dataclass(frozen=True)
class CornerBox:
    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self):
        if not all(_finite(v) for v in (self.x_min, self.y_min, self.x_max, self.y_max)):
            raise InvalidBox(f"non-finite corner in {self}")
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise InvalidBox(f"corner box needs min < max on both axes: {self}")

    @property
    def width(self):
        return self.x_max - self.x_min

    @property
    def height(self):
        return self.y_max - self.y_min

    @property
    def area(self):
        return self.width * self.height

    def contains(self, other: CornerBox) -> bool:
        return (
            self.x_min <= other.x_min
            and self.y_min <= other.y_min
            and self.x_max >= other.x_max
            and self.y_max >= other.y_max
        )


@dataclass(frozen=True)
class EnclosureInfo:
    """Smallest box containing two boxes, with its width, height and squared diagonal."""

    enclosing: CornerBox
    c_sq: float
    w_c: float
    h_c: float


def to_corners(b: BBox) -> CornerBox:
    hw, hh = b.w / 2, b.h / 2
    return CornerBox(b.x_c - hw, b.y_c - hh, b.x_c + hw, b.y_c + hh)


def from_corners(c: CornerBox) -> BBox:
    return BBox(
        (c.x_min + c.x_max) / 2,
        (c.y_min + c.y_max) / 2,
        c.x_max - c.x_min,
        c.y_max - c.y_min,
    )


def _overlap(c1, s1, c2, s2):
    # interval overlap from centres and lengths; exact for identical and nested
    # intervals, zero at tangency and for disjoint intervals
    return fmax(fmin(fmin(s1, s2), (s1 + s2) / 2 - fabs(c1 - c2)), 0.0)


def _span(c1, s1, c2, s2):
    return fmax(fmax(s1, s2), (s1 + s2) / 2 + fabs(c1 - c2))


def intersection_area(a: BBox, b: BBox):
    return _overlap(a.x_c, a.w, b.x_c, b.w) * _overlap(a.y_c, a.h, b.y_c, b.h)


def union_area(a: BBox, b: BBox):
    return a.area + b.area - intersection_area(a, b)


def enclosure(a: BBox, b: BBox) -> EnclosureInfo:
    ca, cb = to_corners(a), to_corners(b)
    box = CornerBox(
        fmin(ca.x_min, cb.x_min),
        fmin(ca.y_min, cb.y_min),
        fmax(ca.x_max, cb.x_max),
        fmax(ca.y_max, cb.y_max),
    )
    w_c = _span(a.x_c, a.w, b.x_c, b.w)
    h_c = _span(a.y_c, a.h, b.y_c, b.h)
    return EnclosureInfo(box, w_c * w_c + h_c * h_c, w_c, h_c)


def center_distance_sq(a: BBox, b: BBox):
    dx = a.x_c - b.x_c
    dy = a.y_c - b.y_c
    return dx * dx + dy * dy


def iou(a: BBox, b: BBox):
    inter = intersection_area(a, b)
    return inter / (a.area + b.area - inter)
