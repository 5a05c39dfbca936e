"""Brute-force IoU estimators used to cross-check the analytic geometry.

Both estimators work only from point membership tests; neither touches
:func:`bboxlab.boxcore.intersection_area`.

Random numbers come from numpy's ``PCG64`` bit generator, whose output
stream is specified and identical across platforms for a given seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .boxcore import BBox
from .errors import DegenerateSample

GENERATOR = "numpy.random.PCG64"
_CHUNK = 1 << 18


@dataclass(frozen=True)
class OracleEstimate:
    value: float
    n_samples: int
    seed: int
    stderr_bound: float
    generator: str = GENERATOR


def _edges(b: BBox):
    return (b.x_c - b.w / 2, b.x_c + b.w / 2, b.y_c - b.h / 2, b.y_c + b.h / 2)


def _inside(x, y, edges):
    x0, x1, y0, y1 = edges
    return (x > x0) & (x < x1) & (y > y0) & (y < y1)


def mc_iou(a: BBox, b: BBox, n: int, seed: int) -> OracleEstimate:
    """Monte-Carlo IoU from ``n`` uniform points in the enclosing box.

    Points are drawn sequentially in fixed-size chunks from one seeded
    stream, so the estimate depends only on ``(a, b, n, seed)``.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    ea, eb = _edges(a), _edges(b)
    x0, x1 = min(ea[0], eb[0]), max(ea[1], eb[1])
    y0, y1 = min(ea[2], eb[2]), max(ea[3], eb[3])
    rng = np.random.Generator(np.random.PCG64(seed))
    both = either = 0
    left = n
    while left:
        k = min(left, _CHUNK)
        x = rng.uniform(x0, x1, k)
        y = rng.uniform(y0, y1, k)
        in_a, in_b = _inside(x, y, ea), _inside(x, y, eb)
        both += int(np.count_nonzero(in_a & in_b))
        either += int(np.count_nonzero(in_a | in_b))
        left -= k
    if either == 0:
        raise DegenerateSample(f"none of {n} samples landed in either box (seed {seed})")
    return OracleEstimate(both / either, n, seed, 0.5 / math.sqrt(n))


def grid_iou(a: BBox, b: BBox, cells_per_axis: int) -> float:
    """Rasterised IoU: count enclosing-box cells whose centres fall inside each box.

    Membership in an axis-aligned box factorises per axis, so the cell counts
    for ``a``, ``b`` and ``a AND b`` are products of 1-D counts over the
    ``cells_per_axis`` column and row centres.
    """
    if cells_per_axis < 2:
        raise ValueError("cells_per_axis must be >= 2")
    ea, eb = _edges(a), _edges(b)
    x0, x1 = min(ea[0], eb[0]), max(ea[1], eb[1])
    y0, y1 = min(ea[2], eb[2]), max(ea[3], eb[3])
    idx = np.arange(cells_per_axis) + 0.5
    xs = x0 + idx * ((x1 - x0) / cells_per_axis)
    ys = y0 + idx * ((y1 - y0) / cells_per_axis)

    def inside(lo, hi, centres):
        return (centres > lo) & (centres < hi)

    ax, bx = inside(ea[0], ea[1], xs), inside(eb[0], eb[1], xs)
    ay, by = inside(ea[2], ea[3], ys), inside(eb[2], eb[3], ys)
    n_a = int(ax.sum()) * int(ay.sum())
    n_b = int(bx.sum()) * int(by.sum())
    n_both = int((ax & bx).sum()) * int((ay & by).sum())
    n_either = n_a + n_b - n_both
    return n_both / n_either if n_either else 0.0
