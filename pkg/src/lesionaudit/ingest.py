"""Audit manifest parsing and image/mask loading.

A manifest is a UTF-8 CSV with header
``id,image,gt_mask,pred_mask:<model>[,pred_mask:<model2>...],class``
(or a JSON array of objects with the same keys). Loading a record resizes
the RGB image bilinearly and every mask with nearest-neighbor to the
manifest's target geometry, then binarizes masks at > 127.
"""

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import cv2
import numpy as np

from .errors import DataError, ManifestError

MASK_THRESHOLD = 127  # 8-bit value strictly above this is lesion


@dataclass(frozen=True)
class ImageRecord:
    """One manifest row; paths are resolved relative to the manifest file."""

    id: str
    image_path: Path
    gt_mask_path: Path
    pred_mask_paths: dict[str, Path]
    class_label: str | None = None


@dataclass
class AuditManifest:
    records: list[ImageRecord]
    resize_target: tuple[int, int] = (224, 224)  # (width, height)

    def __post_init__(self):
        if min(self.resize_target) < 1:
            raise ManifestError("resize_target dimensions must be >= 1")
        seen = set()
        for rec in self.records:
            if rec.id in seen:
                raise ManifestError(f"duplicate record id {rec.id!r}")
            seen.add(rec.id)

    @property
    def class_labels(self) -> set[str]:
        return {r.class_label for r in self.records if r.class_label}

    @property
    def model_names(self) -> list[str]:
        names = set()
        for r in self.records:
            names.update(r.pred_mask_paths)
        return sorted(names)


@dataclass
class LoadedRecord:
    """A record's rasters, aligned to the target geometry."""

    record: ImageRecord
    image: np.ndarray  # (H, W, 3) uint8 RGB
    gt_mask: np.ndarray  # (H, W) bool
    pred_masks: dict[str, np.ndarray]
    flags: set[str] = field(default_factory=set)


def _build_record(row: dict, lineno, base: Path) -> ImageRecord:
    for key in ("id", "image", "gt_mask"):
        if not str(row.get(key) or "").strip():
            raise ManifestError(f"record {lineno}: missing required field {key!r}")
    preds = {}
    for key, value in row.items():
        if key is not None and key.startswith("pred_mask:"):
            model = key.split(":", 1)[1].strip()
            if not model:
                raise ManifestError(f"record {lineno}: empty model name in {key!r}")
            if not str(value or "").strip():
                raise ManifestError(f"record {lineno}: missing path for {key!r}")
            preds[model] = base / str(value).strip()
    if not preds:
        raise ManifestError(f"record {lineno}: no pred_mask:<model> columns")
    label = str(row.get("class") or "").strip() or None
    return ImageRecord(
        id=str(row["id"]).strip(),
        image_path=base / str(row["image"]).strip(),
        gt_mask_path=base / str(row["gt_mask"]).strip(),
        pred_mask_paths=preds,
        class_label=label,
    )


def load_manifest(path, resize_target: tuple[int, int] = (224, 224)) -> AuditManifest:
    """Parse a CSV or JSON manifest. Syntactic validation only: duplicate
    ids and missing fields fail here, missing files fail at load_record.
    """
    path = Path(path)
    if not path.exists():
        raise ManifestError(f"manifest not found: {path}")
    base = path.parent
    rows = []
    try:
        if path.suffix.lower() == ".json":
            data = json.loads(path.read_text(encoding="utf-8"))
            if not isinstance(data, list):
                raise ManifestError("JSON manifest must be an array of objects")
            rows = [(i + 1, dict(obj)) for i, obj in enumerate(data)]
        else:
            with open(path, newline="", encoding="utf-8") as fh:
                reader = csv.DictReader(fh)
                if reader.fieldnames is None:
                    raise ManifestError("manifest has no header row")
                rows = [(i + 2, row) for i, row in enumerate(reader)]
    except (json.JSONDecodeError, csv.Error, UnicodeDecodeError) as exc:
        raise ManifestError(f"cannot parse manifest {path}: {exc}") from exc
    if not rows:
        raise ManifestError(f"manifest {path} contains no records")
    records = [_build_record(row, lineno, base) for lineno, row in rows]
    return AuditManifest(records=records, resize_target=resize_target)


def _read_rgb(path: Path) -> np.ndarray:
    if not path.exists():
        raise DataError(f"image file not found: {path}")
    bgr = cv2.imread(str(path), cv2.IMREAD_COLOR)
    if bgr is None:
        raise DataError(f"cannot decode image: {path}")
    return cv2.cvtColor(bgr, cv2.COLOR_BGR2RGB)


def _read_mask_raster(path: Path) -> np.ndarray:
    if not path.exists():
        raise DataError(f"mask file not found: {path}")
    raw = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise DataError(f"cannot decode mask: {path}")
    if raw.ndim == 3:
        # tolerate RGB-saved masks only when all channels agree
        if not (raw[..., 0] == raw[..., 1]).all() or not (raw[..., 0] == raw[..., 2]).all():
            raise DataError(f"mask is not single-channel: {path}")
        raw = raw[..., 0]
    if raw.dtype != np.uint8:
        raise DataError(f"mask is not 8-bit: {path} ({raw.dtype})")
    return raw


def binarize_mask(raster: np.ndarray) -> np.ndarray:
    """8-bit raster -> boolean lesion mask using the > 127 midpoint rule."""
    return raster > MASK_THRESHOLD


def _resize(img: np.ndarray, target: tuple[int, int], interpolation) -> np.ndarray:
    w, h = target
    if img.shape[1] == w and img.shape[0] == h:
        return img
    return cv2.resize(img, (w, h), interpolation=interpolation)


def load_record(
    rec: ImageRecord, target: tuple[int, int] = (224, 224)
) -> LoadedRecord:
    """Load and align one record's rasters.

    RGB is resized bilinearly; masks nearest-neighbor then binarized, so
    aliased boundary values cannot leak values outside {False, True}.
    Fully empty or fully covered GT masks are flagged, not rejected.
    """
    image = _resize(_read_rgb(rec.image_path), target, cv2.INTER_LINEAR)
    gt = binarize_mask(_resize(_read_mask_raster(rec.gt_mask_path), target, cv2.INTER_NEAREST))
    preds = {
        model: binarize_mask(_resize(_read_mask_raster(p), target, cv2.INTER_NEAREST))
        for model, p in sorted(rec.pred_mask_paths.items())
    }
    flags = set()
    if not gt.any():
        flags.add("gt_empty")
    if gt.all():
        flags.add("gt_full")
    loaded = LoadedRecord(record=rec, image=image, gt_mask=gt, pred_masks=preds, flags=flags)
    for model, mask in loaded.pred_masks.items():
        if mask.shape != gt.shape or image.shape[:2] != gt.shape:
            raise DataError(f"record {rec.id}: mask for {model!r} cannot be aligned")
    return loaded
