"""Bounding-box regression metric laboratory."""

__version__ = "0.1.0"

from .boxcore import BBox, CornerBox, EnclosureInfo, center_distance_sq, enclosure, from_corners, intersection_area, iou, to_corners, union_area
from .errors import (
    BBoxLabError,
    DegenerateSample,
    EmptyDataset,
    InvalidBox,
    MissingParam,
    NonGenericPoint,
    ParseError,
    ValidationError,
)
from .grad import BoxGradient, GradCheckReport, finite_diff_check, loss_gradient
from .metrics import MetricId, MetricParams, MetricResult, ShapeWeights, evaluate, shape_weights

__all__ = [
    "BBox",
    "BBoxLabError",
    "BoxGradient",
    "CornerBox",
    "DegenerateSample",
    "EmptyDataset",
    "EnclosureInfo",
    "GradCheckReport",
    "InvalidBox",
    "MetricId",
    "MetricParams",
    "MetricResult",
    "MissingParam",
    "NonGenericPoint",
    "ParseError",
    "ShapeWeights",
    "ValidationError",
    "center_distance_sq",
    "enclosure",
    "evaluate",
    "finite_diff_check",
    "from_corners",
    "intersection_area",
    "iou",
    "loss_gradient",
    "shape_weights",
    "to_corners",
    "union_area",
]
