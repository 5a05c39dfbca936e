import math
from pathlib import Path

import pytest

from bboxlab import BBox, MetricId, MetricParams
from bboxlab.boxcore import iou
from bboxlab.metrics import evaluate
from bboxlab.simlab import (
    Axis,
    Scenario,
    StopReason,
    SweepMode,
    SweepSpec,
    Variant,
    batch_compare,
    deviation_sweep,
    displaced,
    make_scenarios,
    run_regression,
    scale_pair_sweep,
)

GOLDEN = Path(__file__).parent / "golden"
GT = BBox(0, 0, 4, 2)
REFERENCE = Scenario(BBox(1, 1, 2, 2), BBox(0, 0, 2, 2), MetricId.SHAPE_IOU, MetricParams(scale=0), 0.05, 2000, 0)


def test_sweep_directional_example():
    x = deviation_sweep(SweepSpec(GT, "x", (0.0, 0.5)))
    y = deviation_sweep(SweepSpec(GT, "y", (0.0, 0.5)))
    assert x.values[0] == y.values[0] == 1.0
    assert x.values[1] == pytest.approx(7 / 9, abs=1e-15)
    assert y.values[1] == pytest.approx(0.6, abs=1e-15)


def test_square_gt_sweeps_identical():
    sq = BBox(1, -1, 3, 3)
    devs = tuple(k / 10 for k in range(40))
    x = deviation_sweep(SweepSpec(sq, "x", devs)).values
    y = deviation_sweep(SweepSpec(sq, "y", devs)).values
    assert x == pytest.approx(y, abs=1e-14)
    at_origin = BBox(0, 0, 3, 3)
    assert deviation_sweep(SweepSpec(at_origin, "x", devs)).values == deviation_sweep(SweepSpec(at_origin, "y", devs)).values


def test_sweep_monotone_then_zero():
    devs = tuple(k * 0.05 for k in range(1, 120))
    vals = deviation_sweep(SweepSpec(GT, "y", devs)).values
    for d, a, b in zip(devs, vals, vals[1:]):
        if a > 0:
            assert b < a
        else:
            assert b == 0.0
    assert vals[-1] == 0.0


def test_directional_asymmetry_over_short_edge():
    devs = tuple(k * 0.01 for k in range(1, 200))  # (0, h)
    x = deviation_sweep(SweepSpec(GT, "x", devs)).values
    y = deviation_sweep(SweepSpec(GT, "y", devs)).values
    assert all(a > b for a, b in zip(x, y))


def test_shape_deviation_mode():
    spec = SweepSpec(GT, Axis.Y, (0.0, 1.0), mode=SweepMode.SHAPE)
    assert displaced(GT, "y", 1.0, SweepMode.SHAPE) == BBox(0, 0, 4, 3)
    vals = deviation_sweep(spec).values
    assert vals == (1.0, pytest.approx(8 / 12, abs=1e-15))
    x = deviation_sweep(SweepSpec(GT, "x", (0.5,), mode="shape-deviation")).values[0]
    y = deviation_sweep(SweepSpec(GT, "y", (0.5,), mode="shape-deviation")).values[0]
    assert x > y


def test_sweep_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec(GT, "x", (0.0, 0.5, 0.5))
    with pytest.raises(ValueError):
        SweepSpec(GT, "z", (0.0,))


def test_sweep_csv():
    text = deviation_sweep(SweepSpec(GT, "x", (0.0, 0.5))).to_csv()
    assert text.splitlines()[0] == "deviation,value"
    assert text.splitlines()[2] == f"0.5,{7 / 9!r}"


def test_scale_pair_example():
    small, large = scale_pair_sweep(GT, BBox(0, 0, 8, 4), "iou", [0.0, 0.5])
    assert small.values[0] == large.values[0] == 1.0
    assert small.values[1] == pytest.approx(7 / 9, abs=1e-15)
    assert large.values[1] == pytest.approx(30 / 34, abs=1e-15)
    assert small.values[1] < large.values[1]


def test_scale_pair_pointwise_and_proportional():
    devs = [k * 0.05 for k in range(0, 60)]
    for axis in ("x", "y"):
        small, large = scale_pair_sweep(GT, GT.scaled(2.5), "iou", devs, axis=axis)
        assert all(s < l or (d == 0 and s == l) or s == l == 0 for d, s, l in zip(devs, small.values, large.values))
        assert all(s <= l for s, l in zip(small.values, large.values))
        prop = scale_pair_sweep(GT, GT.scaled(2.5), "iou", [d * 2.5 for d in devs], axis=axis)[1]
        assert prop.values == pytest.approx(small.values, abs=1e-12)


def test_scale_pair_requires_scaled_copy():
    with pytest.raises(ValueError):
        scale_pair_sweep(GT, BBox(0, 0, 8, 3), "iou", [0.0])


def test_anchor_equals_gt_converges_immediately():
    t = run_regression(Scenario(GT, GT, "giou"))
    assert t.stop_reason is StopReason.CONVERGED
    assert len(t.states) == 1 and t.final.step == 0 and t.final.loss == 0.0


def test_golden_trajectory_bitwise():
    assert run_regression(REFERENCE).to_csv() == (GOLDEN / "shape_iou_reference.csv").read_text()


@pytest.mark.xfail(strict=True, reason="fixed-step descent 2-cycles around the non-smooth optimum; loss never < 1e-6")
def test_reference_run_reaches_convergence_threshold():
    t = run_regression(REFERENCE)
    assert t.stop_reason is StopReason.CONVERGED and t.final.iou > 0.999


def test_reference_run_final_iou():
    assert run_regression(REFERENCE).final.iou > 0.99


def test_iou_plateau_stalls():
    sc = Scenario(BBox(10, 10, 2, 2), BBox(0, 0, 2, 2), "iou", MetricParams(), 0.05, 2000)
    t = run_regression(sc)
    assert t.stop_reason is StopReason.MAX_STEPS
    assert {s.loss for s in t.states} == {1.0}
    assert t.final.pred == sc.anchor


def test_trajectory_consistency():
    t = run_regression(Scenario(BBox(0.5, 0.3, 1.0, 3.0), GT, "shape-iou", MetricParams(scale=1), 0.05, 300))
    steps = [s.step for s in t.states]
    assert steps == list(range(len(steps)))
    for s in t.states:
        assert s.loss == pytest.approx(evaluate("shape-iou", s.pred, GT, MetricParams(scale=1)).loss, abs=1e-12)
        assert s.iou == iou(s.pred, GT)


def test_determinism():
    sc = Scenario(BBox(0.5, 0.3, 1.0, 3.0), GT, "siou", MetricParams(), 0.05, 200, seed=3)
    assert run_regression(sc).to_csv() == run_regression(sc).to_csv()


def test_divergence_recorded():
    # a huge step size blows log-sizes up until exp overflows or a size underflows
    sc = Scenario(BBox(0.5, 0.3, 1.0, 3.0), GT, "eiou", MetricParams(), 1e6, 50)
    t = run_regression(sc)
    assert t.stop_reason is StopReason.DIVERGED
    assert t.states and all(math.isfinite(s.loss) for s in t.states)


def test_scenario_validation():
    with pytest.raises(ValueError):
        Scenario(GT, GT, lr=0)
    with pytest.raises(ValueError):
        Scenario(GT, GT, max_steps=0)


def test_make_scenarios_reproducible_and_anisotropic():
    a = make_scenarios(30, 11, min_gt_aspect=3)
    assert a == make_scenarios(30, 11, min_gt_aspect=3)
    assert a != make_scenarios(30, 12, min_gt_aspect=3)
    assert all(max(s.gt.w / s.gt.h, s.gt.h / s.gt.w) >= 3 for s in a)
    # scenario i does not depend on how many scenarios were requested
    assert make_scenarios(5, 11, min_gt_aspect=3) == a[:5]


def test_batch_compare_trivial():
    sc = [Scenario(GT, GT)]
    table = batch_compare(sc, [m for m in MetricId if m not in (MetricId.DOTD, MetricId.SHAPE_DOTD, MetricId.NWD, MetricId.SHAPE_NWD)])
    assert all(r.mean_final_iou == 1.0 and r.mean_steps == 0 for r in table.rows)


def test_batch_compare_paired_and_order_independent():
    scs = make_scenarios(6, 5, max_steps=150)
    variants = [Variant.of("giou"), Variant.of("shape-iou", MetricParams(scale=1), "shape-iou[scale=1]")]
    serial = batch_compare(scs, variants)
    assert [r.metric for r in serial.rows] == ["giou", "shape-iou[scale=1]"]
    assert all(r.n == 6 for r in serial.rows)
    parallel = batch_compare(scs, variants, workers=2)
    assert serial.to_csv() == parallel.to_csv()
    assert serial.scenarios == tuple(scs)
    with pytest.raises(ValueError):
        batch_compare([], variants)


def test_compare_golden_subset():
    scs = make_scenarios(12, 2024, min_gt_aspect=3, max_steps=400)
    variants = [
        Variant.of("shape-iou", MetricParams(scale=0), "shape-iou[scale=0]"),
        Variant.of("shape-iou", MetricParams(scale=1), "shape-iou[scale=1]"),
    ]
    text = batch_compare(scs, variants).to_csv()
    assert text == (GOLDEN / "compare_subset.csv").read_text()
