"""Exact loss gradients w.r.t. the predicted box, and a finite-difference checker.

Gradients come from forward-mode dual numbers pushed through the very same
metric code used for values, so value and gradient can never drift apart.
At kinks the dual helpers pick a deterministic subgradient: ties in
``max(w, w_gt)`` take the GT branch, ``|0|`` and ``sqrt(0)`` have slope 0,
and a zero-width overlap contributes nothing (the IoU plateau of
non-overlapping boxes is kept, not smoothed away).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _dual as ad
from .boxcore import BBox, to_corners
from .metrics import DEFAULT_PARAMS, MetricId, MetricParams, _evaluate_raw, check_params
from .errors import NonGenericPoint


@dataclass(frozen=True)
class BoxGradient:
    d_xc: float
    d_yc: float
    d_w: float
    d_h: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.d_xc, self.d_yc, self.d_w, self.d_h)

    def norm(self) -> float:
        return sum(g * g for g in self.as_tuple()) ** 0.5


@dataclass(frozen=True)
class GradCheckReport:
    max_rel_err: float
    per_component_err: tuple[float, float, float, float]
    step: float
    pred: BBox
    gt: BBox
    metric: MetricId
    params: MetricParams
    analytic: BoxGradient
    numeric: BoxGradient


def loss_and_gradient(metric, pred: BBox, gt: BBox, params: MetricParams = DEFAULT_PARAMS):
    """Return ``(loss, BoxGradient)`` in one forward pass."""
    metric = MetricId.parse(metric) if not isinstance(metric, MetricId) else metric
    check_params(metric, params)
    dual_pred = BBox(*ad.Dual.seed(pred.as_tuple()))
    loss = _evaluate_raw(metric, dual_pred, gt, params).loss
    return ad.value(loss), BoxGradient(*ad.tangent(loss, 4))


def loss_gradient(metric, pred: BBox, gt: BBox, params: MetricParams = DEFAULT_PARAMS) -> BoxGradient:
    return loss_and_gradient(metric, pred, gt, params)[1]


def genericity_violations(pred: BBox, gt: BBox, step: float) -> list[str]:
    """Reasons why ``(pred, gt)`` is too close to a kink for a central difference of ``step``.

    Empty list means the point is generic.
    """
    margin = 10 * step
    out = []
    dx, dy = pred.x_c - gt.x_c, pred.y_c - gt.y_c
    if abs(dx) <= margin:
        out.append("|dx| too small")
    if abs(dy) <= margin:
        out.append("|dy| too small")
    if abs(abs(dx) - abs(dy)) <= margin:
        out.append("|dx| and |dy| nearly tied")
    if abs(pred.w - gt.w) <= margin:
        out.append("w nearly equals w_gt")
    if abs(pred.h - gt.h) <= margin:
        out.append("h nearly equals h_gt")
    a, b = to_corners(pred), to_corners(gt)
    xs = [(a.x_min, b.x_min), (a.x_max, b.x_max), (a.x_min, b.x_max), (a.x_max, b.x_min)]
    ys = [(a.y_min, b.y_min), (a.y_max, b.y_max), (a.y_min, b.y_max), (a.y_max, b.y_min)]
    if any(abs(p - q) <= margin for p, q in xs + ys):
        out.append("box edges nearly aligned")
    overlap_x = min(a.x_max, b.x_max) - max(a.x_min, b.x_min)
    overlap_y = min(a.y_max, b.y_max) - max(a.y_min, b.y_min)
    if overlap_x <= margin or overlap_y <= margin:
        out.append("boxes do not partially overlap")
    return out


def is_generic(pred: BBox, gt: BBox, step: float) -> bool:
    return not genericity_violations(pred, gt, step)


def numeric_gradient(metric, pred: BBox, gt: BBox, params: MetricParams, step: float) -> BoxGradient:
    metric = MetricId.parse(metric) if not isinstance(metric, MetricId) else metric
    base = list(pred.as_tuple())
    out = []
    for k in range(4):
        hi, lo = base.copy(), base.copy()
        hi[k] += step
        lo[k] -= step
        f_hi = _evaluate_raw(metric, BBox(*hi), gt, params).loss
        f_lo = _evaluate_raw(metric, BBox(*lo), gt, params).loss
        out.append((f_hi - f_lo) / (2 * step))
    return BoxGradient(*out)


def finite_diff_check(
    metric, pred: BBox, gt: BBox, params: MetricParams = DEFAULT_PARAMS, step: float = 1e-6
) -> GradCheckReport:
    """Compare the analytic gradient with central differences.

    Relative error per component is ``|analytic - numeric| / max(1, |numeric|)``.
    Raises :class:`NonGenericPoint` when the point is within ``10*step`` of a kink.
    """
    if not step > 0:
        raise ValueError(f"step must be > 0, got {step}")
    metric = MetricId.parse(metric) if not isinstance(metric, MetricId) else metric
    problems = genericity_violations(pred, gt, step)
    if problems:
        raise NonGenericPoint("; ".join(problems))
    analytic = loss_gradient(metric, pred, gt, params)
    numeric = numeric_gradient(metric, pred, gt, params, step)
    errs = tuple(
        abs(a - n) / max(1.0, abs(n)) for a, n in zip(analytic.as_tuple(), numeric.as_tuple())
    )
    return GradCheckReport(max(errs), errs, step, pred, gt, metric, params, analytic, numeric)
