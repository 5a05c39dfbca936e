"""Command-line front end.

Every subcommand resolves its settings in three layers (defaults, then a
``--config`` JSON file, then explicit flags) into one :class:`RunConfig`,
then :func:`execute` runs it.  CSV output starts with ``#`` metadata lines
carrying the package version, seed and the fully resolved config; JSON
output carries the same block under ``"metadata"``.

Exit codes: 0 success, 1 runtime failure (including a failed gradient check),
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import os
import random
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import __version__
from .boxcore import BBox, CornerBox, from_corners
from .datasets import compute_stats, load_annotations
from .errors import BBoxLabError
from .grad import finite_diff_check
from .metrics import NEEDS_MEAN_SIZE, NEEDS_NWD_C, MetricId, MetricParams, evaluate
from .oracle import grid_iou, mc_iou
from .sampling import random_generic_pair
from .simlab import (
    Axis,
    Scenario,
    SweepMode,
    SweepSpec,
    Variant,
    batch_compare,
    deviation_sweep,
    make_scenarios,
    run_regression,
)
from .svgplot import line_plot
from .boxcore import iou as plain_iou

COMMANDS = ("eval", "grad-check", "oracle", "sweep", "simulate", "compare", "stats")
FORMATS = ("text", "csv", "json", "svg")
SEED_ENV = "BBOXLAB_SEED"

DEFAULT_METRICS = {
    "grad-check": ("all",),
    "sweep": ("iou",),
    "simulate": ("shape-iou",),
    "compare": ("iou", "giou", "diou", "shape-iou"),
}


@dataclass
class RunConfig:
    command: str
    metrics: tuple[str, ...] = ()
    pred: Optional[tuple[float, ...]] = None
    gt: Optional[tuple[float, ...]] = None
    anchor: Optional[tuple[float, ...]] = None
    corners: bool = False
    scale: float = 0.0
    mean_size: Optional[float] = None
    nwd_c: Optional[float] = None
    eps: float = 1e-7
    annotations: Optional[str] = None
    annotations_format: Optional[str] = None
    manifest: Optional[str] = None
    output: Optional[str] = None
    format: str = "text"
    seed: int = 0
    axis: str = "x"
    mode: str = "position-deviation"
    min_dev: float = 0.0
    max_dev: float = 2.0
    steps: int = 40
    lr: float = 0.05
    max_steps: int = 2000
    converge_tol: float = 1e-6
    n: int = 200
    samples: int = 100_000
    cells: int = 3000
    step: float = 1e-6
    tol: float = 1e-5
    scales: tuple[float, ...] = ()
    min_aspect: float = 1.0
    workers: int = 1

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}

    @classmethod
    def from_dict(cls, d: dict) -> RunConfig:
        names = {f.name: f for f in dataclasses.fields(cls)}
        unknown = set(d) - set(names)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        kw = {k: tuple(v) if isinstance(v, list) else v for k, v in d.items()}
        return cls(**kw)

    def metric_ids(self) -> list[MetricId]:
        out = []
        for name in self.metrics:
            if name == "all":
                out.extend(MetricId)
            else:
                out.append(MetricId.parse(name))
        return out

    def box(self, name: str) -> Optional[BBox]:
        v = getattr(self, name)
        if v is None:
            return None
        return from_corners(CornerBox(*v)) if self.corners else BBox(*v)


# -- argument parsing -----------------------------------------------------------


def _box_arg(text: str) -> tuple[float, ...]:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"expected 4 comma-separated numbers, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number in {text!r}") from None


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


class _MetricAppend(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        items = list(getattr(namespace, self.dest, None) or [])
        for name in values.split(","):
            name = name.strip()
            if not name:
                continue
            if name != "all":
                try:
                    MetricId.parse(name)
                except ValueError as e:
                    parser.error(str(e))
            items.append(name)
        setattr(namespace, self.dest, items)


def _common(p: argparse.ArgumentParser, *, params=True, boxes=(), fmt=FORMATS):
    p.add_argument("--config", metavar="FILE", help="JSON run config; explicit flags override it")
    p.add_argument("--seed", type=int, help=f"random seed (default: ${SEED_ENV} or 0)")
    p.add_argument("--format", choices=fmt, help="output format (default: text)")
    p.add_argument("--output", "-o", metavar="PATH", help="write output here instead of stdout")
    for name in boxes:
        p.add_argument(f"--{name}", type=_box_arg, metavar="XC,YC,W,H", help=f"{name} box")
    if boxes:
        p.add_argument("--corners", action="store_true", help="read boxes as XMIN,YMIN,XMAX,YMAX instead")
    if params:
        g = p.add_argument_group("metric parameters")
        g.add_argument("--scale", type=float, help="Shape-IoU scale factor (default 0)")
        g.add_argument("--mean-size", dest="mean_size", type=float, help="dataset mean size S for DotD metrics")
        g.add_argument("--nwd-c", dest="nwd_c", type=float, help="NWD constant C")
        g.add_argument("--eps", type=float, help="SIoU stabiliser (default 1e-7)")
        g.add_argument("--annotations", metavar="PATH", help="derive S and C from this annotation set")
        g.add_argument("--annotations-format", dest="annotations_format", choices=("coco-json", "yolo-txt"))
        g.add_argument("--manifest", metavar="FILE", help="image-size manifest for yolo-txt")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bboxlab", description="Bounding-box regression metric laboratory.")
    parser.add_argument("--version", action="version", version=f"bboxlab {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    sd = argparse.SUPPRESS

    p = sub.add_parser("eval", help="evaluate metrics on one box pair", argument_default=sd)
    p.add_argument("--metric", action=_MetricAppend, dest="metrics", help="metric id, comma list, or 'all'")
    _common(p, boxes=("pred", "gt"), fmt=("text", "csv", "json"))

    p = sub.add_parser("grad-check", help="compare analytic and finite-difference gradients", argument_default=sd)
    p.add_argument("--metric", action=_MetricAppend, dest="metrics", help="metric id, comma list, or 'all'")
    p.add_argument("--n", type=int, help="random generic points per metric when no boxes are given")
    p.add_argument("--step", type=float, help="central-difference step (default 1e-6)")
    p.add_argument("--tol", type=float, help="relative error tolerance (default 1e-5)")
    _common(p, boxes=("pred", "gt"), fmt=("text", "csv", "json"))

    p = sub.add_parser("oracle", help="analytic IoU versus Monte-Carlo and grid estimates", argument_default=sd)
    p.add_argument("--samples", type=int, help="Monte-Carlo sample count (default 100000)")
    p.add_argument("--cells", type=int, help="grid cells per axis (default 3000)")
    _common(p, params=False, boxes=("pred", "gt"), fmt=("text", "csv", "json"))

    p = sub.add_parser("sweep", help="metric value versus deviation along an axis", argument_default=sd)
    p.add_argument("--metric", action=_MetricAppend, dest="metrics", help="metric id (default iou)")
    p.add_argument("--axis", choices=("x", "y", "both"))
    p.add_argument("--mode", choices=[m.value for m in SweepMode])
    p.add_argument("--min-dev", dest="min_dev", type=float, help="first deviation (default 0)")
    p.add_argument("--max-dev", dest="max_dev", type=float, help="last deviation (default 2)")
    p.add_argument("--steps", type=int, help="number of intervals between min and max (default 40)")
    _common(p, boxes=("gt",))

    p = sub.add_parser("simulate", help="gradient-descent regression from an anchor", argument_default=sd)
    p.add_argument("--metric", action=_MetricAppend, dest="metrics", help="loss metric (default shape-iou)")
    p.add_argument("--lr", type=float, help="step size (default 0.05)")
    p.add_argument("--max-steps", dest="max_steps", type=int, help="update budget (default 2000)")
    p.add_argument("--converge-tol", dest="converge_tol", type=float, help="stop when loss falls below (default 1e-6)")
    _common(p, boxes=("anchor", "gt"))

    p = sub.add_parser("compare", help="paired regression comparison over random scenarios", argument_default=sd)
    p.add_argument("--metric", action=_MetricAppend, dest="metrics", help="metric ids to compare")
    p.add_argument("--n", type=int, help="number of random scenarios (default 200)")
    p.add_argument("--scales", type=_float_list, help="run shape metrics once per listed scale, e.g. 0,1")
    p.add_argument("--min-aspect", dest="min_aspect", type=float, help="minimum GT aspect ratio (default 1)")
    p.add_argument("--lr", type=float, help="step size (default 0.05)")
    p.add_argument("--max-steps", dest="max_steps", type=int, help="update budget (default 2000)")
    p.add_argument("--converge-tol", dest="converge_tol", type=float, help="stop when loss falls below (default 1e-6)")
    p.add_argument("--workers", type=int, help="worker processes (default 1)")
    _common(p, fmt=("text", "csv", "json"))

    p = sub.add_parser("stats", help="dataset mean size S and NWD constant C", argument_default=sd)
    p.add_argument("--annotations", metavar="PATH", help="COCO json file or yolo-txt directory")
    p.add_argument("--annotations-format", dest="annotations_format", choices=("coco-json", "yolo-txt"))
    p.add_argument("--manifest", metavar="FILE", help="image-size manifest for yolo-txt")
    p.add_argument("--nwd-c", dest="nwd_c", type=float, help="override the NWD constant")
    _common(p, params=False, fmt=("text", "json"))
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """Resolve argv into a :class:`RunConfig`; usage problems exit with status 2."""
    parser = build_parser()
    ns = vars(parser.parse_args(argv))
    command = ns.pop("command")
    sub = parser._subparsers._group_actions[0].choices[command]

    base = RunConfig(command=command)
    env_seed = os.environ.get(SEED_ENV)
    if env_seed is not None:
        try:
            base.seed = int(env_seed)
        except ValueError:
            sub.error(f"${SEED_ENV} must be an integer, got {env_seed!r}")
    merged = base.to_dict()
    config_path = ns.pop("config", None)
    if config_path:
        try:
            with open(config_path) as fh:
                file_cfg = json.load(fh)
            file_cfg.pop("command", None)
            RunConfig.from_dict({"command": command, **file_cfg})
            merged.update(file_cfg)
        except (OSError, json.JSONDecodeError, ValueError, TypeError) as e:
            sub.error(f"bad --config {config_path}: {e}")
    merged.update(ns)
    merged["command"] = command
    cfg = RunConfig.from_dict(merged)
    if not cfg.metrics and command in DEFAULT_METRICS:
        cfg.metrics = DEFAULT_METRICS[command]
        if command == "grad-check" and cfg.annotations is None:
            # only metrics whose dataset constants are available
            cfg.metrics = tuple(
                m.value for m in MetricId
                if not (m in NEEDS_MEAN_SIZE and cfg.mean_size is None)
                and not (m in NEEDS_NWD_C and cfg.nwd_c is None)
            )
    _validate(cfg, sub)
    return cfg


def _validate(cfg: RunConfig, sub: argparse.ArgumentParser) -> None:
    need = {
        "eval": ("pred", "gt"),
        "oracle": ("pred", "gt"),
        "sweep": ("gt",),
        "simulate": ("anchor", "gt"),
        "stats": ("annotations",),
    }.get(cfg.command, ())
    for name in need:
        if getattr(cfg, name) is None:
            sub.error(f"missing required parameter --{name}")
    if cfg.command == "eval" and not cfg.metrics:
        sub.error("missing required parameter --metric")
    if cfg.command == "grad-check" and (cfg.pred is None) != (cfg.gt is None):
        sub.error("give both --pred and --gt, or neither")
    for name in ("pred", "gt", "anchor"):
        try:
            cfg.box(name)
        except BBoxLabError as e:
            sub.error(f"--{name}: {e}")
    try:
        metrics = cfg.metric_ids()
    except ValueError as e:
        sub.error(str(e))
    if cfg.command in ("sweep", "simulate") and len(metrics) != 1:
        sub.error(f"{cfg.command} takes exactly one --metric")
    if cfg.format not in FORMATS:
        sub.error(f"unknown format {cfg.format!r}")
    if cfg.command != "stats":
        for m in metrics:
            if m in NEEDS_MEAN_SIZE and cfg.mean_size is None and cfg.annotations is None:
                sub.error(f"metric {m.value} needs --mean-size or --annotations")
            if m in NEEDS_NWD_C and cfg.nwd_c is None and cfg.annotations is None:
                sub.error(f"metric {m.value} needs --nwd-c or --annotations")
    if cfg.scale < 0:
        sub.error("--scale must be >= 0")
    if cfg.steps < 1 or cfg.n < 1 or cfg.samples < 1 or cfg.cells < 2 or cfg.max_steps < 1 or cfg.workers < 1:
        sub.error("counts must be positive (cells >= 2)")
    if not (cfg.lr > 0 and cfg.step > 0 and cfg.tol > 0):
        sub.error("--lr, --step and --tol must be > 0")
    if cfg.command == "sweep" and not cfg.max_dev > cfg.min_dev:
        sub.error("--max-dev must exceed --min-dev")


# -- execution -------------------------------------------------------------------


def _params(cfg: RunConfig) -> MetricParams:
    s, c = cfg.mean_size, cfg.nwd_c
    if cfg.annotations and (s is None or c is None):
        stats = compute_stats(load_annotations(cfg.annotations, cfg.annotations_format, cfg.manifest))
        s = stats.mean_size_s if s is None else s
        c = stats.nwd_c if c is None else c
    return MetricParams(scale=cfg.scale, mean_size_s=s, nwd_c=c, eps=cfg.eps)


def _metadata(cfg: RunConfig) -> dict:
    return {"tool": "bboxlab", "version": __version__, "seed": cfg.seed, "config": cfg.to_dict()}


def _csv_doc(cfg: RunConfig, header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    meta = _metadata(cfg)
    buf.write(f"# bboxlab {meta['version']}\r\n# seed: {cfg.seed}\r\n")
    buf.write(f"# config: {json.dumps(meta['config'], sort_keys=True)}\r\n")
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in r])
    return buf.getvalue()


def _json_doc(cfg: RunConfig, payload: dict) -> str:
    return json.dumps({"metadata": _metadata(cfg), **payload}, indent=2, sort_keys=True) + "\n"


def _text_doc(cfg: RunConfig, lines: Sequence[str]) -> str:
    meta = _metadata(cfg)
    head = [f"# bboxlab {meta['version']}  seed={cfg.seed}", f"# config: {json.dumps(meta['config'], sort_keys=True)}"]
    return "\n".join(head + list(lines)) + "\n"


def _g(x) -> str:
    return f"{x:.6g}"


def _run_eval(cfg):
    params = _params(cfg)
    pred, gt = cfg.box("pred"), cfg.box("gt")
    results = [(m, evaluate(m, pred, gt, params)) for m in cfg.metric_ids()]
    if cfg.format == "csv":
        rows = []
        for m, r in results:
            rows.append([m.value, "value", r.value])
            rows.append([m.value, "loss", r.loss])
            rows.extend([m.value, k, v] for k, v in r.components.items())
        return _csv_doc(cfg, ["metric", "quantity", "value"], rows)
    if cfg.format == "json":
        return _json_doc(cfg, {"results": [
            {"metric": m.value, "value": r.value, "loss": r.loss, "components": dict(r.components)}
            for m, r in results
        ]})
    lines = []
    for m, r in results:
        lines.append(f"{m.value}: value={_g(r.value)} loss={_g(r.loss)}")
        lines.extend(f"  {k:<10} {_g(v)}" for k, v in r.components.items())
    return _text_doc(cfg, lines)


def _run_grad_check(cfg):
    params = _params(cfg)
    if cfg.pred is not None:
        points = [(cfg.box("pred"), cfg.box("gt"))]
    else:
        rng = random.Random(cfg.seed)
        points = [random_generic_pair(rng, cfg.step) for _ in range(cfg.n)]
    rows = []
    for m in cfg.metric_ids():
        errs = [finite_diff_check(m, p, g, params, cfg.step).max_rel_err for p, g in points]
        rows.append((m.value, len(errs), max(errs), max(errs) < cfg.tol))
    ok = all(r[3] for r in rows)
    if cfg.format == "csv":
        out = _csv_doc(cfg, ["metric", "points", "max_rel_err", "ok"], [[a, b, c, str(d).lower()] for a, b, c, d in rows])
    elif cfg.format == "json":
        out = _json_doc(cfg, {"tol": cfg.tol, "rows": [
            {"metric": a, "points": b, "max_rel_err": c, "ok": d} for a, b, c, d in rows
        ]})
    else:
        out = _text_doc(cfg, [f"{a:<11} points={b} max_rel_err={_g(c)} {'ok' if d else 'FAIL'}" for a, b, c, d in rows])
    return out, (0 if ok else 1)


def _run_oracle(cfg):
    pred, gt = cfg.box("pred"), cfg.box("gt")
    analytic = plain_iou(pred, gt)
    mc = mc_iou(pred, gt, cfg.samples, cfg.seed)
    grid = grid_iou(pred, gt, cfg.cells)
    rows = [
        ("analytic", analytic, ""),
        ("monte-carlo", mc.value, mc.stderr_bound),
        ("grid", grid, ""),
    ]
    if cfg.format == "csv":
        return _csv_doc(cfg, ["method", "iou", "stderr_bound"], rows)
    if cfg.format == "json":
        return _json_doc(cfg, {
            "analytic": analytic,
            "monte_carlo": {"value": mc.value, "n_samples": mc.n_samples, "seed": mc.seed,
                            "stderr_bound": mc.stderr_bound, "generator": mc.generator},
            "grid": {"value": grid, "cells_per_axis": cfg.cells},
        })
    return _text_doc(cfg, [
        f"analytic     {_g(analytic)}",
        f"monte-carlo  {_g(mc.value)}  (n={mc.n_samples}, stderr<={_g(mc.stderr_bound)}, {mc.generator})",
        f"grid         {_g(grid)}  ({cfg.cells}x{cfg.cells})",
    ])


def _run_sweep(cfg):
    params = _params(cfg)
    gt = cfg.box("gt")
    metric = cfg.metric_ids()[0]
    devs = tuple(cfg.min_dev + (cfg.max_dev - cfg.min_dev) * k / cfg.steps for k in range(cfg.steps + 1))
    axes = ("x", "y") if cfg.axis == "both" else (cfg.axis,)
    curves = [deviation_sweep(SweepSpec(gt, Axis(a), devs, metric, params, SweepMode(cfg.mode))) for a in axes]
    if cfg.format == "csv":
        if len(curves) == 1:
            return _csv_doc(cfg, ["deviation", "value"], list(zip(devs, curves[0].values)))
        return _csv_doc(cfg, ["deviation", "value_x", "value_y"], list(zip(devs, curves[0].values, curves[1].values)))
    if cfg.format == "json":
        return _json_doc(cfg, {"deviations": list(devs), "curves": {a: list(c.values) for a, c in zip(axes, curves)}})
    if cfg.format == "svg":
        meta = json.dumps(_metadata(cfg), sort_keys=True)
        return line_plot(
            [(f"{a}-direction", devs, c.values) for a, c in zip(axes, curves)],
            title=f"{metric.value} vs {cfg.mode} (gt {gt.w:g}x{gt.h:g})",
            xlabel="deviation",
            ylabel=metric.value,
            comment=meta,
        )
    lines = ["deviation  " + "  ".join(f"{a:>10}" for a in axes)]
    for k, d in enumerate(devs):
        lines.append(f"{_g(d):>9}  " + "  ".join(f"{_g(c.values[k]):>10}" for c in curves))
    return _text_doc(cfg, lines)


def _run_simulate(cfg):
    params = _params(cfg)
    sc = Scenario(cfg.box("anchor"), cfg.box("gt"), cfg.metric_ids()[0], params, cfg.lr, cfg.max_steps,
                  cfg.seed, cfg.converge_tol)
    traj = run_regression(sc)
    if cfg.format == "csv":
        rows = [[s.step, s.pred.x_c, s.pred.y_c, s.pred.w, s.pred.h, s.loss, s.iou] for s in traj.states]
        return _csv_doc(cfg, ["step", "xc", "yc", "w", "h", "loss", "iou"], rows)
    if cfg.format == "json":
        return _json_doc(cfg, {"stop_reason": traj.stop_reason.value, "states": [
            {"step": s.step, "pred": list(s.pred.as_tuple()), "loss": s.loss, "iou": s.iou} for s in traj.states
        ]})
    if cfg.format == "svg":
        steps = [s.step for s in traj.states]
        return line_plot(
            [("loss", steps, [s.loss for s in traj.states]), ("iou", steps, [s.iou for s in traj.states])],
            title=f"{sc.metric.value} descent ({traj.stop_reason.value})",
            xlabel="step",
            comment=json.dumps(_metadata(cfg), sort_keys=True),
        )
    f = traj.final
    return _text_doc(cfg, [
        f"stop_reason  {traj.stop_reason.value}",
        f"steps        {f.step}",
        f"final box    {', '.join(_g(v) for v in f.pred.as_tuple())}",
        f"final loss   {_g(f.loss)}",
        f"final iou    {_g(f.iou)}",
    ])


_SHAPE_METRICS = {MetricId.SHAPE_IOU, MetricId.SHAPE_DOTD, MetricId.SHAPE_NWD}


def _run_compare(cfg):
    params = _params(cfg)
    scenarios = make_scenarios(cfg.n, cfg.seed, params=params, lr=cfg.lr, max_steps=cfg.max_steps,
                               min_gt_aspect=cfg.min_aspect)
    if cfg.converge_tol != 1e-6:
        scenarios = [dataclasses.replace(s, converge_tol=cfg.converge_tol) for s in scenarios]
    variants = []
    for m in cfg.metric_ids():
        if m in _SHAPE_METRICS and cfg.scales:
            variants.extend(Variant.of(m, params.with_(scale=s), f"{m.value}[scale={s:g}]") for s in cfg.scales)
        else:
            variants.append(Variant.of(m))
    table = batch_compare(scenarios, variants, workers=cfg.workers)
    if cfg.format == "csv":
        return _csv_doc(cfg, ["metric", "mean_final_iou", "mean_steps", "diverged"],
                        [[r.metric, r.mean_final_iou, r.mean_steps, r.diverged] for r in table.rows])
    if cfg.format == "json":
        return _json_doc(cfg, table.to_dict())
    lines = [f"{'metric':<22} {'mean_final_iou':>14} {'mean_steps':>10} {'converged':>9} {'diverged':>8}"]
    lines += [f"{r.metric:<22} {_g(r.mean_final_iou):>14} {_g(r.mean_steps):>10} {r.converged:>9} {r.diverged:>8}"
              for r in table.rows]
    return _text_doc(cfg, lines)


def _run_stats(cfg):
    stats = compute_stats(load_annotations(cfg.annotations, cfg.annotations_format, cfg.manifest), nwd_c=cfg.nwd_c)
    if cfg.format == "json":
        return _json_doc(cfg, {"stats": stats.to_dict()})
    lines = [
        f"images         {stats.n_images}",
        f"boxes          {stats.n_boxes}",
        f"S (mean size)  {_g(stats.mean_size_s)}",
        f"C (nwd)        {_g(stats.nwd_c)}  [{stats.nwd_c_source}]",
        "size histogram (sqrt(w*h), px):",
    ]
    lines += [f"  {b:>12}  {n}" for b, n in stats.size_histogram]
    lines.append(stats.scale_note)
    return _text_doc(cfg, lines)


_RUNNERS = {
    "eval": _run_eval,
    "grad-check": _run_grad_check,
    "oracle": _run_oracle,
    "sweep": _run_sweep,
    "simulate": _run_simulate,
    "compare": _run_compare,
    "stats": _run_stats,
}


def execute(cfg: RunConfig, stdout=None) -> int:
    """Run a resolved config; returns the process exit code."""
    stdout = stdout or sys.stdout
    try:
        result = _RUNNERS[cfg.command](cfg)
    except (BBoxLabError, OSError, ValueError) as e:
        print(f"bboxlab {cfg.command}: error: {e}", file=sys.stderr)
        return 1
    text, code = result if isinstance(result, tuple) else (result, 0)
    if cfg.output:
        newline = "" if cfg.format == "csv" else None
        with open(cfg.output, "w", newline=newline) as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if code:
        print(f"bboxlab {cfg.command}: check failed", file=sys.stderr)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    return execute(cfg)
