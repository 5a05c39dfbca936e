"""Annotation loading and dataset size statistics.

Two input formats are understood:

``coco-json``
    A COCO-style file with ``images`` and ``annotations`` arrays; each
    annotation's ``bbox`` is ``[x, y, width, height]`` in pixels.
``yolo-txt``
    A directory with one ``.txt`` per image (lines ``class cx cy w h``,
    normalised to [0, 1]) and a ``manifest.json`` mapping image file names
    to ``{"width": W, "height": H}``.

The canonical dump (:func:`dump_annotations`) is JSON::

    {"schema_version": 1, "source_format": "coco-json",
     "images": [{"id": "...", "boxes": [[x_min, y_min, x_max, y_max], ...]}]}
"""

from __future__ import annotations

import enum
import json
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from .boxcore import CornerBox
from .errors import EmptyDataset, InvalidBox, ParseError, ValidationError

SCHEMA_VERSION = 1
MANIFEST_NAME = "manifest.json"
IMAGE_EXTS = (".jpg", ".jpeg", ".png", ".bmp", ".tif", ".tiff", ".webp")
SCALE_NOTE = (
    "The Shape-IoU scale factor should follow the typical target size of the "
    "dataset; no numeric mapping from size to scale is defined, so none is recommended."
)


class AnnotationFormat(str, enum.Enum):
    COCO_JSON = "coco-json"
    YOLO_TXT = "yolo-txt"


@dataclass(frozen=True)
class AnnotationSet:
    images: tuple[tuple[str, tuple[CornerBox, ...]], ...]
    source_format: AnnotationFormat

    def __post_init__(self):
        ids = [i for i, _ in self.images]
        if len(set(ids)) != len(ids):
            raise ValidationError("image ids must be unique")

    @property
    def n_images(self) -> int:
        return len(self.images)

    @property
    def n_boxes(self) -> int:
        return sum(len(b) for _, b in self.images)

    def boxes(self):
        for _, bs in self.images:
            yield from bs


@dataclass(frozen=True)
class DatasetStats:
    mean_size_s: float
    nwd_c: float
    n_images: int
    n_boxes: int
    size_histogram: tuple[tuple[str, int], ...]
    nwd_c_source: str = "mean_size"
    scale_note: str = SCALE_NOTE

    def to_dict(self) -> dict:
        return {
            "mean_size_s": self.mean_size_s,
            "nwd_c": self.nwd_c,
            "nwd_c_source": self.nwd_c_source,
            "n_images": self.n_images,
            "n_boxes": self.n_boxes,
            "size_histogram": dict(self.size_histogram),
            "scale_note": self.scale_note,
        }


def _corner(x_min, y_min, x_max, y_max, locator) -> CornerBox:
    try:
        return CornerBox(float(x_min), float(y_min), float(x_max), float(y_max))
    except InvalidBox as e:
        raise ValidationError(str(e), locator) from None


def _load_coco(path: Path) -> AnnotationSet:
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"cannot read COCO json: {e}", str(path)) from None
    if not isinstance(doc, dict) or not isinstance(doc.get("annotations"), list):
        raise ParseError("missing 'annotations' array", str(path))
    images: dict[str, list[CornerBox]] = {}
    for img in doc.get("images", []):
        if not isinstance(img, dict) or "id" not in img:
            raise ParseError("image record without 'id'", f"{path}:images")
        images.setdefault(str(img["id"]), [])
    for k, ann in enumerate(doc["annotations"]):
        loc = f"{path}:annotations[{k}]"
        if not isinstance(ann, dict):
            raise ParseError("annotation is not an object", loc)
        bbox = ann.get("bbox")
        if not (isinstance(bbox, list) and len(bbox) == 4 and all(isinstance(v, (int, float)) for v in bbox)):
            raise ParseError("'bbox' must be [x, y, width, height]", loc)
        x, y, w, h = (float(v) for v in bbox)
        if not (w > 0 and h > 0):
            raise ValidationError(f"non-positive width/height ({w}, {h})", loc)
        if "image_id" not in ann:
            raise ParseError("annotation without 'image_id'", loc)
        images.setdefault(str(ann["image_id"]), []).append(_corner(x, y, x + w, y + h, loc))
    return AnnotationSet(tuple((i, tuple(b)) for i, b in images.items()), AnnotationFormat.COCO_JSON)


def _load_yolo(path: Path, manifest: Optional[Path]) -> AnnotationSet:
    if not path.is_dir():
        raise ParseError("yolo-txt input must be a directory of .txt files", str(path))
    manifest = manifest or path / MANIFEST_NAME
    try:
        sizes = json.loads(Path(manifest).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"cannot read image-size manifest: {e}", str(manifest)) from None
    by_stem = {}
    for name, dims in sizes.items():
        try:
            by_stem[Path(name).stem] = (float(dims["width"]), float(dims["height"]))
        except (TypeError, KeyError, ValueError):
            raise ParseError("manifest entry needs numeric 'width' and 'height'", f"{manifest}:{name}") from None
    images = []
    for txt in sorted(p for p in path.iterdir() if p.suffix == ".txt"):
        if txt.stem not in by_stem:
            raise ParseError("image missing from manifest", str(txt))
        img_w, img_h = by_stem[txt.stem]
        boxes = []
        for lineno, line in enumerate(txt.read_text().splitlines(), 1):
            if not line.strip():
                continue
            loc = f"{txt}:{lineno}"
            parts = line.split()
            try:
                _cls, cx, cy, w, h = parts[0], *map(float, parts[1:])
            except ValueError:
                raise ParseError(f"expected 'class cx cy w h', got {line!r}", loc) from None
            if not (w > 0 and h > 0):
                raise ValidationError(f"non-positive width/height ({w}, {h})", loc)
            boxes.append(
                _corner((cx - w / 2) * img_w, (cy - h / 2) * img_h, (cx + w / 2) * img_w, (cy + h / 2) * img_h, loc)
            )
        images.append((txt.stem, tuple(boxes)))
    return AnnotationSet(tuple(images), AnnotationFormat.YOLO_TXT)


def _load_canonical(path: Path) -> AnnotationSet:
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"cannot read canonical json: {e}", str(path)) from None
    return annotations_from_dict(doc)


def load_annotations(path: Union[str, os.PathLike], fmt=None, manifest=None) -> AnnotationSet:
    """Load annotations; ``fmt`` is inferred from the path when omitted."""
    path = Path(path)
    if fmt is None:
        fmt = AnnotationFormat.YOLO_TXT if path.is_dir() else AnnotationFormat.COCO_JSON
    try:
        fmt = AnnotationFormat(fmt)
    except ValueError:
        raise ParseError(f"unsupported annotation format {fmt!r}") from None
    if fmt is AnnotationFormat.YOLO_TXT:
        return _load_yolo(path, Path(manifest) if manifest else None)
    doc_path = path
    if doc_path.suffix == ".json":
        try:
            head = json.loads(doc_path.read_text())
        except (OSError, json.JSONDecodeError):
            head = None
        if isinstance(head, dict) and "schema_version" in head:
            return _load_canonical(doc_path)
    return _load_coco(doc_path)


def annotations_to_dict(ann: AnnotationSet) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "source_format": ann.source_format.value,
        "images": [
            {"id": i, "boxes": [[b.x_min, b.y_min, b.x_max, b.y_max] for b in boxes]}
            for i, boxes in ann.images
        ],
    }


def annotations_from_dict(doc: dict) -> AnnotationSet:
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {doc.get('schema_version')!r}")
    images = []
    for k, img in enumerate(doc.get("images", [])):
        boxes = tuple(_corner(*b, f"images[{k}].boxes[{j}]") for j, b in enumerate(img["boxes"]))
        images.append((str(img["id"]), boxes))
    return AnnotationSet(tuple(images), AnnotationFormat(doc["source_format"]))


def dump_annotations(ann: AnnotationSet, path: Union[str, os.PathLike]) -> None:
    Path(path).write_text(json.dumps(annotations_to_dict(ann), indent=1) + "\n")


def dataset_mean_size(ann: AnnotationSet) -> float:
    """Square root of the mean box area over every box in every image."""
    areas = [b.area for b in ann.boxes()]
    if not areas:
        raise EmptyDataset("no boxes in annotation set")
    return math.sqrt(math.fsum(areas) / len(areas))


def size_histogram(ann: AnnotationSet) -> tuple[tuple[str, int], ...]:
    """Counts of boxes by ``sqrt(w*h)`` in power-of-two pixel buckets ``[2^k, 2^(k+1))``.

    Sizes below 1 px all land in ``"<1"``.
    """
    counts: dict[int, int] = {}
    for b in ann.boxes():
        size = math.sqrt(b.area)
        k = -1 if size < 1 else int(math.floor(math.log2(size)))
        counts[k] = counts.get(k, 0) + 1
    return tuple(("<1" if k < 0 else f"{2**k}-{2**(k + 1)}", counts[k]) for k in sorted(counts))


def compute_stats(ann: AnnotationSet, nwd_c: Optional[float] = None) -> DatasetStats:
    """Mean size S and the NWD constant C (S itself unless ``nwd_c`` overrides it)."""
    s = dataset_mean_size(ann)
    if nwd_c is not None:
        if not nwd_c > 0:
            raise ValueError(f"nwd_c must be > 0, got {nwd_c}")
        c, source = float(nwd_c), "override"
    else:
        c, source = s, "mean_size"
    return DatasetStats(s, c, ann.n_images, ann.n_boxes, size_histogram(ann), source)
