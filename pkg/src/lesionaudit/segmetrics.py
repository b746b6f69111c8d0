"""The nine segmentation scores computed from a GT/predicted mask pair.

Higher is better for IoU, DC, ST, SP, PA, AUC, CK; lower is better for
FPR, FNR. Any score whose denominator is zero for a given image is
degenerate: reported as NaN and flagged, never silently coerced to 0 or 1.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DataError

METRIC_NAMES = ("iou", "dc", "st", "sp", "pa", "auc", "ck", "fpr", "fnr")


@dataclass(frozen=True)
class ConfusionCounts:
    """Pixelwise confusion counts with lesion as the positive class."""

    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class MetricVector:
    """The nine Table-style scores; degenerate entries are NaN and listed."""

    iou: float
    dc: float
    st: float
    sp: float
    pa: float
    auc: float
    ck: float
    fpr: float
    fnr: float
    degenerate: frozenset[str] = frozenset()

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in METRIC_NAMES}


def confusion(gt: np.ndarray, pred: np.ndarray) -> ConfusionCounts:
    """Count tp/fp/tn/fn between two boolean masks of equal shape."""
    gt = np.asarray(gt, dtype=bool)
    pred = np.asarray(pred, dtype=bool)
    if gt.shape != pred.shape:
        raise DataError(f"mask shapes differ: gt {gt.shape} vs pred {pred.shape}")
    tp = int(np.count_nonzero(gt & pred))
    fp = int(np.count_nonzero(~gt & pred))
    fn = int(np.count_nonzero(gt & ~pred))
    tn = int(np.count_nonzero(~gt & ~pred))
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)


def metrics(c: ConfusionCounts) -> MetricVector:
    """All nine scores from confusion counts.

    AUC here is balanced accuracy (st + sp) / 2, the hard-mask reading;
    use :func:`roc_auc` when a model supplies soft probability maps.
    """
    if c.total <= 0:
        raise DataError("confusion counts sum to zero")
    tp, fp, tn, fn = c.tp, c.fp, c.tn, c.fn
    total = c.total
    degenerate = set()

    def ratio(num, den, name):
        if den == 0:
            degenerate.add(name)
            return float("nan")
        return num / den

    iou = ratio(tp, tp + fp + fn, "iou")
    dc = ratio(2 * tp, 2 * tp + fp + fn, "dc")
    st = ratio(tp, tp + fn, "st")
    sp = ratio(tn, tn + fp, "sp")
    pa = (tp + tn) / total
    fpr = ratio(fp, fp + tn, "fpr")
    fnr = ratio(fn, fn + tp, "fnr")
    if "st" in degenerate or "sp" in degenerate:
        degenerate.add("auc")
        auc = float("nan")
    else:
        auc = (st + sp) / 2.0
    po = (tp + tn) / total
    pe = ((tp + fp) * (tp + fn) + (fn + tn) * (fp + tn)) / (total * total)
    if pe == 1.0:
        degenerate.add("ck")
        ck = float("nan")
    else:
        ck = (po - pe) / (1.0 - pe)
    return MetricVector(
        iou=iou, dc=dc, st=st, sp=sp, pa=pa, auc=auc, ck=ck, fpr=fpr, fnr=fnr,
        degenerate=frozenset(degenerate),
    )


def roc_auc(gt: np.ndarray, scores: np.ndarray) -> float:
    """Threshold-swept ROC AUC (trapezoid rule) for soft prediction maps.

    ``scores`` holds per-pixel lesion probabilities or logits; only their
    ordering matters. NaN when gt contains a single class.
    """
    gt = np.asarray(gt, dtype=bool).ravel()
    scores = np.asarray(scores, dtype=np.float64).ravel()
    if gt.shape != scores.shape:
        raise DataError("gt and score shapes differ")
    n_pos = int(gt.sum())
    n_neg = gt.size - n_pos
    if n_pos == 0 or n_neg == 0:
        return float("nan")
    order = np.argsort(-scores, kind="stable")
    sorted_gt = gt[order]
    sorted_scores = scores[order]
    tps = np.cumsum(sorted_gt)
    fps = np.cumsum(~sorted_gt)
    # keep only the last index of each tied score block
    keep = np.append(sorted_scores[1:] != sorted_scores[:-1], True)
    tpr = np.concatenate([[0.0], tps[keep] / n_pos])
    fpr = np.concatenate([[0.0], fps[keep] / n_neg])
    return float(np.trapezoid(tpr, fpr))
