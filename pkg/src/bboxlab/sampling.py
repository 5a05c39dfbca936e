"""Seeded random box pairs for property checks, gradient checks and oracle comparisons."""

from __future__ import annotations

import math
import random

from .boxcore import BBox
from .grad import is_generic


def random_pair(rng: random.Random) -> tuple[BBox, BBox]:
    """A ``(pred, gt)`` pair around a random GT.

    Sizes are log-uniform over two decades, aspect ratios log-uniform in
    ``[1/4, 4]``; the pred centre is offset by up to one GT size per axis and
    its sides rescaled by ``[1/3, 3]``, which yields disjoint, overlapping and
    nested configurations.
    """
    size = math.exp(rng.uniform(math.log(0.1), math.log(10.0)))
    aspect = math.exp(rng.uniform(math.log(0.25), math.log(4.0)))
    gt = BBox(rng.uniform(-10, 10), rng.uniform(-10, 10), size * math.sqrt(aspect), size / math.sqrt(aspect))
    pred = BBox(
        gt.x_c + rng.uniform(-1.0, 1.0) * gt.w,
        gt.y_c + rng.uniform(-1.0, 1.0) * gt.h,
        gt.w * math.exp(rng.uniform(-math.log(3), math.log(3))),
        gt.h * math.exp(rng.uniform(-math.log(3), math.log(3))),
    )
    return pred, gt


def random_generic_pair(rng: random.Random, step: float = 1e-6) -> tuple[BBox, BBox]:
    """A partially overlapping pair away from every kink (see :func:`bboxlab.grad.is_generic`)."""
    while True:
        size = math.exp(rng.uniform(math.log(0.5), math.log(5.0)))
        aspect = math.exp(rng.uniform(math.log(0.25), math.log(4.0)))
        gt = BBox(rng.uniform(-5, 5), rng.uniform(-5, 5), size * math.sqrt(aspect), size / math.sqrt(aspect))
        pred = BBox(
            gt.x_c + rng.uniform(-0.6, 0.6) * gt.w,
            gt.y_c + rng.uniform(-0.6, 0.6) * gt.h,
            gt.w * math.exp(rng.uniform(-0.7, 0.7)),
            gt.h * math.exp(rng.uniform(-0.7, 0.7)),
        )
        if is_generic(pred, gt, step):
            return pred, gt
