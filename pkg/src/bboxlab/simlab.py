"""Deviation sweeps and synthetic gradient-descent regression runs.

Sweeps displace (or resize) a predicted box relative to a fixed GT box and
record a metric along the way, which makes the long-edge/short-edge and
small/large-scale asymmetries of IoU directly measurable.  Regression runs
descend a loss from an anchor toward the GT with plain fixed-step gradient
descent in ``(x_c, y_c, log w, log h)``.
"""

from __future__ import annotations

import csv
import enum
import io
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .boxcore import BBox, iou
from .errors import InvalidBox
from .grad import loss_and_gradient
from .metrics import DEFAULT_PARAMS, MetricId, MetricParams, evaluate


class Axis(str, enum.Enum):
    X = "x"
    Y = "y"


class SweepMode(str, enum.Enum):
    POSITION = "position-deviation"
    SHAPE = "shape-deviation"


@dataclass(frozen=True)
class SweepSpec:
    gt: BBox
    axis: Axis
    deviations: tuple[float, ...]
    metric: MetricId = MetricId.IOU
    params: MetricParams = DEFAULT_PARAMS
    mode: SweepMode = SweepMode.POSITION

    def __post_init__(self):
        object.__setattr__(self, "axis", Axis(self.axis))
        object.__setattr__(self, "mode", SweepMode(self.mode))
        object.__setattr__(self, "metric", MetricId.parse(self.metric) if not isinstance(self.metric, MetricId) else self.metric)
        devs = tuple(float(d) for d in self.deviations)
        if any(b <= a for a, b in zip(devs, devs[1:])):
            raise ValueError("deviations must be strictly increasing")
        object.__setattr__(self, "deviations", devs)


@dataclass(frozen=True)
class SweepCurve:
    spec: SweepSpec
    values: tuple[float, ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["deviation", "value"])
        for d, v in zip(self.spec.deviations, self.values):
            w.writerow([repr(d), repr(v)])
        return buf.getvalue()


def displaced(gt: BBox, axis: Axis, d: float, mode: SweepMode = SweepMode.POSITION) -> BBox:
    """The predicted box a sweep evaluates at deviation ``d``."""
    if SweepMode(mode) is SweepMode.POSITION:
        return gt.translated(d, 0.0) if Axis(axis) is Axis.X else gt.translated(0.0, d)
    if Axis(axis) is Axis.X:
        return BBox(gt.x_c, gt.y_c, gt.w + d, gt.h)
    return BBox(gt.x_c, gt.y_c, gt.w, gt.h + d)


def deviation_sweep(spec: SweepSpec) -> SweepCurve:
    values = tuple(
        evaluate(spec.metric, displaced(spec.gt, spec.axis, d, spec.mode), spec.gt, spec.params).value
        for d in spec.deviations
    )
    return SweepCurve(spec, values)


def scale_pair_sweep(
    gt_small: BBox,
    gt_large: BBox,
    metric,
    deviations: Sequence[float],
    params: MetricParams = DEFAULT_PARAMS,
    axis: Axis = Axis.X,
    mode: SweepMode = SweepMode.POSITION,
) -> tuple[SweepCurve, SweepCurve]:
    """Sweep two GT boxes of the same shape but different scale with the same absolute deviations."""
    if not (gt_large.w > gt_small.w and gt_large.h > gt_small.h):
        raise ValueError("gt_large must be larger than gt_small on both sides")
    if not math.isclose(gt_large.w / gt_small.w, gt_large.h / gt_small.h, rel_tol=1e-9):
        raise ValueError("gt_large must be a uniformly scaled copy of gt_small")
    small = deviation_sweep(SweepSpec(gt_small, axis, tuple(deviations), metric, params, mode))
    large = deviation_sweep(SweepSpec(gt_large, axis, tuple(deviations), metric, params, mode))
    return small, large


# -- regression ---------------------------------------------------------------


class StopReason(str, enum.Enum):
    CONVERGED = "converged"
    MAX_STEPS = "max_steps"
    DIVERGED = "diverged"


@dataclass(frozen=True)
class Scenario:
    anchor: BBox
    gt: BBox
    metric: MetricId = MetricId.SHAPE_IOU
    params: MetricParams = DEFAULT_PARAMS
    lr: float = 0.05
    max_steps: int = 2000
    seed: int = 0
    converge_tol: float = 1e-6

    def __post_init__(self):
        if not isinstance(self.metric, MetricId):
            object.__setattr__(self, "metric", MetricId.parse(self.metric))
        if not self.lr > 0:
            raise ValueError(f"lr must be > 0, got {self.lr}")
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")


@dataclass(frozen=True)
class State:
    step: int
    pred: BBox
    loss: float
    iou: float


@dataclass(frozen=True)
class Trajectory:
    scenario: Scenario
    states: tuple[State, ...]
    stop_reason: StopReason

    @property
    def final(self) -> State:
        return self.states[-1]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["step", "xc", "yc", "w", "h", "loss", "iou"])
        for s in self.states:
            p = s.pred
            w.writerow([s.step, repr(p.x_c), repr(p.y_c), repr(p.w), repr(p.h), repr(s.loss), repr(s.iou)])
        return buf.getvalue()


def run_regression(scenario: Scenario) -> Trajectory:
    """Fixed-step gradient descent from ``scenario.anchor`` toward ``scenario.gt``.

    Parameters are ``(x_c, y_c, log w, log h)``; the box-space gradient is
    chain-ruled (``dL/dlog w = w * dL/dw``).  Stops when the loss drops below
    ``converge_tol``, after ``max_steps`` updates, or as soon as a parameter
    or loss goes non-finite or a size underflows to zero (diverged).
    """
    sc = scenario
    theta = [sc.anchor.x_c, sc.anchor.y_c, math.log(sc.anchor.w), math.log(sc.anchor.h)]
    states = []
    step = 0
    while True:
        try:
            pred = BBox(theta[0], theta[1], math.exp(theta[2]), math.exp(theta[3]))
        except (InvalidBox, OverflowError):
            return Trajectory(sc, tuple(states), StopReason.DIVERGED)
        loss, g = loss_and_gradient(sc.metric, pred, sc.gt, sc.params)
        if not math.isfinite(loss):
            return Trajectory(sc, tuple(states), StopReason.DIVERGED)
        states.append(State(step, pred, loss, iou(pred, sc.gt)))
        grad = (g.d_xc, g.d_yc, g.d_w * pred.w, g.d_h * pred.h)
        if not all(math.isfinite(x) for x in grad):
            return Trajectory(sc, tuple(states), StopReason.DIVERGED)
        if loss < sc.converge_tol:
            return Trajectory(sc, tuple(states), StopReason.CONVERGED)
        if step == sc.max_steps:
            return Trajectory(sc, tuple(states), StopReason.MAX_STEPS)
        theta = [t - sc.lr * d for t, d in zip(theta, grad)]
        step += 1


# -- paired comparisons -------------------------------------------------------


def _log_uniform(rng: random.Random, lo: float, hi: float) -> float:
    return math.exp(rng.uniform(math.log(lo), math.log(hi)))


def random_box(
    rng: random.Random,
    size_range: tuple[float, float] = (0.05, 0.5),
    aspect_range: tuple[float, float] = (0.25, 4.0),
    min_aspect: float = 1.0,
) -> BBox:
    """A box in the unit canvas.

    Scale ``sqrt(w*h)`` is log-uniform over ``size_range``; aspect ``w/h`` is
    log-uniform over ``aspect_range`` restricted to ``max(w/h, h/w) >= min_aspect``.
    """
    while True:
        aspect = _log_uniform(rng, *aspect_range)
        if max(aspect, 1 / aspect) >= min_aspect:
            break
    size = _log_uniform(rng, *size_range)
    w, h = size * math.sqrt(aspect), size / math.sqrt(aspect)
    return BBox(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0), w, h)


def make_scenarios(
    n: int,
    seed: int,
    metric=MetricId.SHAPE_IOU,
    params: MetricParams = DEFAULT_PARAMS,
    lr: float = 0.05,
    max_steps: int = 2000,
    size_range: tuple[float, float] = (0.05, 0.5),
    aspect_range: tuple[float, float] = (0.25, 4.0),
    min_gt_aspect: float = 1.0,
) -> list[Scenario]:
    """Seeded random scenarios; scenario ``i`` uses its own ``Random(seed, i)`` stream.

    The GT box follows :func:`random_box`; the anchor is the GT shifted by up
    to half its size along each axis and resized by a log-uniform factor in
    ``[1/2, 2]`` per side, so most anchors overlap their GT.
    """
    out = []
    for i in range(n):
        sub_seed = seed * 1_000_003 + i
        rng = random.Random(sub_seed)
        gt = random_box(rng, size_range, aspect_range, min_gt_aspect)
        anchor = BBox(
            gt.x_c + rng.uniform(-0.5, 0.5) * gt.w,
            gt.y_c + rng.uniform(-0.5, 0.5) * gt.h,
            gt.w * _log_uniform(rng, 0.5, 2.0),
            gt.h * _log_uniform(rng, 0.5, 2.0),
        )
        out.append(Scenario(anchor, gt, MetricId(metric), params, lr, max_steps, sub_seed))
    return out


@dataclass(frozen=True)
class Variant:
    """One row of a comparison table: a metric with its parameters."""

    label: str
    metric: MetricId
    params: Optional[MetricParams] = None

    @classmethod
    def of(cls, metric, params: Optional[MetricParams] = None, label: Optional[str] = None) -> Variant:
        m = metric if isinstance(metric, MetricId) else MetricId.parse(metric)
        return cls(label or m.value, m, params)


@dataclass(frozen=True)
class CompareRow:
    metric: str
    mean_final_iou: float
    mean_steps: float
    diverged: int
    converged: int
    n: int


@dataclass(frozen=True)
class CompareTable:
    rows: tuple[CompareRow, ...]
    scenarios: tuple[Scenario, ...] = field(repr=False)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["metric", "mean_final_iou", "mean_steps", "diverged"])
        for r in self.rows:
            w.writerow([r.metric, repr(r.mean_final_iou), repr(r.mean_steps), r.diverged])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "rows": [
                {
                    "metric": r.metric,
                    "mean_final_iou": r.mean_final_iou,
                    "mean_steps": r.mean_steps,
                    "diverged": r.diverged,
                    "converged": r.converged,
                    "n": r.n,
                }
                for r in self.rows
            ],
            "n_scenarios": len(self.scenarios),
        }


def _final(sc: Scenario) -> tuple[float, int, StopReason]:
    t = run_regression(sc)
    return t.final.iou, t.final.step, t.stop_reason


def batch_compare(scenarios: Sequence[Scenario], variants: Sequence, workers: int = 1) -> CompareTable:
    """Run every variant on the same scenario set (paired design).

    ``variants`` may hold :class:`Variant` objects or plain metric ids; a
    variant without params inherits each scenario's own params.  Steps are
    counted up to the final recorded state whether or not the run converged.
    Results are aggregated in scenario order regardless of ``workers``.
    """
    if not scenarios or not variants:
        raise ValueError("batch_compare needs at least one scenario and one metric")
    variants = [v if isinstance(v, Variant) else Variant.of(v) for v in variants]
    rows = []
    for v in variants:
        runs = [
            Scenario(s.anchor, s.gt, v.metric, v.params or s.params, s.lr, s.max_steps, s.seed, s.converge_tol)
            for s in scenarios
        ]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as ex:
                results = list(ex.map(_final, runs, chunksize=max(1, len(runs) // (4 * workers))))
        else:
            results = [_final(s) for s in runs]
        ious = [r[0] for r in results]
        rows.append(
            CompareRow(
                v.label,
                math.fsum(ious) / len(ious),
                math.fsum(r[1] for r in results) / len(results),
                sum(r[2] is StopReason.DIVERGED for r in results),
                sum(r[2] is StopReason.CONVERGED for r in results),
                len(results),
            )
        )
    return CompareTable(tuple(rows), tuple(scenarios))
