"""IoU-family, tiny-object and shape-aware box regression metrics.

Each metric returns a :class:`MetricResult` whose ``value`` is "higher is
better" and whose ``loss`` is the quantity a regressor minimises.  The
``components`` map exposes the raw terms the value is assembled from, so
callers can audit every formula term by term.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Mapping, Optional

from . import _dual as ad
from .boxcore import BBox, center_distance_sq, enclosure, intersection_area
from .errors import MissingParam

FOUR_OVER_PI_SQ = 4.0 / math.pi**2
NWD_WEIGHT = 2.0


class MetricId(str, enum.Enum):
    IOU = "iou"
    GIOU = "giou"
    DIOU = "diou"
    CIOU = "ciou"
    EIOU = "eiou"
    SIOU = "siou"
    SHAPE_IOU = "shape-iou"
    DOTD = "dotd"
    NWD = "nwd"
    SHAPE_DOTD = "shape-dotd"
    SHAPE_NWD = "shape-nwd"

    @classmethod
    def parse(cls, name: str) -> MetricId:
        key = name.strip().lower().replace("_", "-")
        for m in cls:
            if key == m.value or key == m.value.replace("-", "") or key == m.name.lower():
                return m
        raise ValueError(f"unknown metric {name!r}; choose from {', '.join(m.value for m in cls)}")

    def __str__(self):
        return self.value


IOU_FAMILY = frozenset(
    {MetricId.IOU, MetricId.GIOU, MetricId.DIOU, MetricId.CIOU, MetricId.EIOU, MetricId.SIOU, MetricId.SHAPE_IOU}
)
NEEDS_MEAN_SIZE = frozenset({MetricId.DOTD, MetricId.SHAPE_DOTD})
NEEDS_NWD_C = frozenset({MetricId.NWD, MetricId.SHAPE_NWD})


@dataclass(frozen=True)
class MetricParams:
    """Constants the metrics depend on.

    ``scale`` is the Shape-IoU exponent; 0 gives neutral direction weights.
    ``mean_size_s`` and ``nwd_c`` are dataset constants and default to unset.
    """

    scale: float = 0.0
    mean_size_s: Optional[float] = None
    nwd_c: Optional[float] = None
    siou_theta: float = 4.0
    shape_omega_coeff: float = 0.5
    eps: float = 1e-7

    def __post_init__(self):
        if not self.scale >= 0:
            raise ValueError(f"scale must be >= 0, got {self.scale}")
        for name in ("mean_size_s", "nwd_c"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ValueError(f"{name} must be > 0, got {v}")
        if not self.eps > 0:
            raise ValueError(f"eps must be > 0, got {self.eps}")

    def with_(self, **changes) -> MetricParams:
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {
            "scale": self.scale,
            "mean_size_s": self.mean_size_s,
            "nwd_c": self.nwd_c,
            "siou_theta": self.siou_theta,
            "shape_omega_coeff": self.shape_omega_coeff,
            "eps": self.eps,
        }


DEFAULT_PARAMS = MetricParams()


@dataclass(frozen=True)
class MetricResult:
    value: float
    loss: float
    components: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "components", MappingProxyType(dict(self.components)))


@dataclass(frozen=True)
class ShapeWeights:
    ww: float
    hh: float


def _result(value, loss, **components) -> MetricResult:
    """Build a result; keeps dual-valued terms intact for the gradient path."""
    return MetricResult(value, loss, components)


# -- IoU family -------------------------------------------------------------


def iou(pred: BBox, gt: BBox) -> MetricResult:
    inter = intersection_area(pred, gt)
    v = inter / (pred.area + gt.area - inter)
    return _result(v, 1 - v, iou=v)


def giou(pred: BBox, gt: BBox) -> MetricResult:
    # enclosing area minus UNION area in the numerator (standard GIoU)
    inter = intersection_area(pred, gt)
    union = pred.area + gt.area - inter
    i = inter / union
    enc = enclosure(pred, gt)
    c_area = enc.w_c * enc.h_c
    enclosure_term = (c_area - union) / c_area
    v = i - enclosure_term
    return _result(v, 1 - v, iou=i, enclosure=enclosure_term)


def _iou_and_distance(pred, gt):
    inter = intersection_area(pred, gt)
    i = inter / (pred.area + gt.area - inter)
    enc = enclosure(pred, gt)
    return i, enc, center_distance_sq(pred, gt) / enc.c_sq


def diou(pred: BBox, gt: BBox) -> MetricResult:
    i, _, dist = _iou_and_distance(pred, gt)
    v = i - dist
    return _result(v, 1 - v, iou=i, distance=dist)


def ciou(pred: BBox, gt: BBox) -> MetricResult:
    """Complete IoU.  ``alpha`` is taken as 0 when both ``1 - IoU`` and ``v`` vanish."""
    i, _, dist = _iou_and_distance(pred, gt)
    dang = ad.atan(gt.w / gt.h) - ad.atan(pred.w / pred.h)
    v = FOUR_OVER_PI_SQ * dang * dang
    denom = (1 - i) + v
    alpha = v / denom if denom > 0 else 0.0
    aspect = alpha * v
    val = i - dist - aspect
    return _result(val, 1 - val, iou=i, distance=dist, aspect=aspect, v=v, alpha=alpha)


def eiou(pred: BBox, gt: BBox) -> MetricResult:
    i, enc, dist = _iou_and_distance(pred, gt)
    dw = pred.w - gt.w
    dh = pred.h - gt.h
    width_term = dw * dw / (enc.w_c * enc.w_c)
    height_term = dh * dh / (enc.h_c * enc.h_c)
    v = i - dist - width_term - height_term
    return _result(v, 1 - v, iou=i, distance=dist, width=width_term, height=height_term)


def _omega(pred, gt, w_weight, h_weight, theta):
    omega_w = w_weight * ad.fabs(pred.w - gt.w) / ad.fmax(pred.w, gt.w)
    omega_h = h_weight * ad.fabs(pred.h - gt.h) / ad.fmax(pred.h, gt.h)
    return (1 - ad.exp(-omega_w)) ** theta + (1 - ad.exp(-omega_h)) ** theta


def siou(pred: BBox, gt: BBox, params: MetricParams = DEFAULT_PARAMS) -> MetricResult:
    """SIoU: IoU minus the mean of the angle-aware distance cost and the shape cost.

    The angle term only enters through ``gamma = 2 - angle``; the distance
    cost sums over the x and y directions.  ``params.eps`` is relative to the
    enclosing-box diagonal.
    """
    inter = intersection_area(pred, gt)
    i = inter / (pred.area + gt.area - inter)
    enc = enclosure(pred, gt)
    dx = gt.x_c - pred.x_c
    dy = gt.y_c - pred.y_c
    sigma = ad.sqrt(dx * dx + dy * dy)
    # stabiliser scaled by the enclosing diagonal so the metric stays scale-free
    sin_alpha = ad.fmin(ad.fabs(dx), ad.fabs(dy)) / (sigma + params.eps * ad.sqrt(enc.c_sq))
    angle = ad.sin(2 * ad.asin(sin_alpha))
    gamma = 2 - angle
    rho_x = (dx / enc.w_c) ** 2
    rho_y = (dy / enc.h_c) ** 2
    distance = (1 - ad.exp(-gamma * rho_x)) + (1 - ad.exp(-gamma * rho_y))
    shape = _omega(pred, gt, 1.0, 1.0, params.siou_theta)
    v = i - (distance + shape) / 2
    return _result(v, 1 - v, iou=i, angle=angle, distance=distance, shape=shape)


# -- shape-aware ------------------------------------------------------------


def shape_weights(gt: BBox, scale: float) -> ShapeWeights:
    """Horizontal/vertical weights from the GT aspect ratio; they always sum to 2."""
    if scale < 0:
        raise ValueError(f"scale must be >= 0, got {scale}")
    if scale == 0 or gt.w == gt.h:
        return ShapeWeights(1.0, 1.0)
    # normalise by the larger side so large boxes and scales do not overflow
    m = max(gt.w, gt.h)
    pw = (gt.w / m) ** scale
    ph = (gt.h / m) ** scale
    total = pw + ph
    ww = 2 * pw / total
    return ShapeWeights(ww, 2 - ww)


def shape_iou(pred: BBox, gt: BBox, params: MetricParams = DEFAULT_PARAMS) -> MetricResult:
    sw = shape_weights(gt, params.scale)
    inter = intersection_area(pred, gt)
    i = inter / (pred.area + gt.area - inter)
    c_sq = enclosure(pred, gt).c_sq
    dx = pred.x_c - gt.x_c
    dy = pred.y_c - gt.y_c
    distance = sw.hh * dx * dx / c_sq + sw.ww * dy * dy / c_sq
    # cross pairing: width deviation weighted by hh, height deviation by ww
    shape = _omega(pred, gt, sw.hh, sw.ww, params.siou_theta)
    loss = 1 - i + distance + params.shape_omega_coeff * shape
    return _result(1 - loss, loss, iou=i, distance=distance, shape=shape, ww=sw.ww, hh=sw.hh)


# -- tiny-object family -----------------------------------------------------


def _require(metric, params, name):
    v = getattr(params, name)
    if v is None:
        raise MissingParam(metric.value, name)
    return v


def dotd(pred: BBox, gt: BBox, params: MetricParams) -> MetricResult:
    s = _require(MetricId.DOTD, params, "mean_size_s")
    d = ad.sqrt(center_distance_sq(pred, gt))
    v = ad.exp(-d / s)
    return _result(v, 1 - v, distance=d)


def _size_term(pred, gt):
    dw = pred.w - gt.w
    dh = pred.h - gt.h
    return (dw * dw + dh * dh) / (NWD_WEIGHT * NWD_WEIGHT)


def nwd(pred: BBox, gt: BBox, params: MetricParams) -> MetricResult:
    c = _require(MetricId.NWD, params, "nwd_c")
    d = ad.sqrt(center_distance_sq(pred, gt) + _size_term(pred, gt))
    v = ad.exp(-d / c)
    return _result(v, 1 - v, distance=d)


def _shape_center_sq(pred, gt, sw):
    dx = pred.x_c - gt.x_c
    dy = pred.y_c - gt.y_c
    return sw.hh * dx * dx + sw.ww * dy * dy


def shape_dotd(pred: BBox, gt: BBox, params: MetricParams) -> MetricResult:
    s = _require(MetricId.SHAPE_DOTD, params, "mean_size_s")
    sw = shape_weights(gt, params.scale)
    d = ad.sqrt(_shape_center_sq(pred, gt, sw))
    v = ad.exp(-d / s)
    return _result(v, 1 - v, distance=d, ww=sw.ww, hh=sw.hh)


def shape_nwd(pred: BBox, gt: BBox, params: MetricParams) -> MetricResult:
    c = _require(MetricId.SHAPE_NWD, params, "nwd_c")
    sw = shape_weights(gt, params.scale)
    size = _size_term(pred, gt)
    d = ad.sqrt(_shape_center_sq(pred, gt, sw) + size)
    v = ad.exp(-d / c)
    return _result(v, 1 - v, distance=d, size=size, ww=sw.ww, hh=sw.hh)


_DISPATCH = {
    MetricId.IOU: lambda p, g, _: iou(p, g),
    MetricId.GIOU: lambda p, g, _: giou(p, g),
    MetricId.DIOU: lambda p, g, _: diou(p, g),
    MetricId.CIOU: lambda p, g, _: ciou(p, g),
    MetricId.EIOU: lambda p, g, _: eiou(p, g),
    MetricId.SIOU: siou,
    MetricId.SHAPE_IOU: shape_iou,
    MetricId.DOTD: dotd,
    MetricId.NWD: nwd,
    MetricId.SHAPE_DOTD: shape_dotd,
    MetricId.SHAPE_NWD: shape_nwd,
}


def check_params(metric: MetricId, params: MetricParams) -> None:
    if metric in NEEDS_MEAN_SIZE and params.mean_size_s is None:
        raise MissingParam(metric.value, "mean_size_s")
    if metric in NEEDS_NWD_C and params.nwd_c is None:
        raise MissingParam(metric.value, "nwd_c")


def _evaluate_raw(metric: MetricId, pred, gt, params: MetricParams) -> MetricResult:
    return _DISPATCH[MetricId(metric)](pred, gt, params)


def evaluate(metric, pred: BBox, gt: BBox, params: MetricParams = DEFAULT_PARAMS) -> MetricResult:
    """Evaluate any metric by id.  Raises :class:`MissingParam` for absent dataset constants."""
    metric = metric if isinstance(metric, MetricId) else MetricId.parse(metric)
    check_params(metric, params)
    return _evaluate_raw(metric, pred, gt, params)
