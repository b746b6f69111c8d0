"""The nine segmentation scores, including how degenerate cases surface.

Lesion pixels are the positive class. Scores with a zero denominator for
a given image (e.g. sensitivity when the GT mask is empty) come back as
NaN with the metric name listed in ``degenerate`` -- they are missing
data, not zeros.
"""

import numpy as np

from lesionaudit import ConfusionCounts, confusion, metrics, roc_auc

rng = np.random.default_rng(0)

gt = np.zeros((64, 64), bool)
gt[20:44, 18:46] = True
pred = np.zeros_like(gt)
pred[24:48, 14:42] = True  # shifted prediction

c = confusion(gt, pred)
print(f"confusion: tp={c.tp} fp={c.fp} fn={c.fn} tn={c.tn}")
mv = metrics(c)
for name, value in mv.as_dict().items():
    print(f"  {name:>4} = {value:.4f}")

print()
print("identities that hold by construction:")
print(f"  fnr == 1 - st : {mv.fnr} == {1 - mv.st}")
print(f"  dc == 2*iou/(1+iou) : {mv.dc:.12f} == {2 * mv.iou / (1 + mv.iou):.12f}")

print()
print("degenerate case: empty GT, empty prediction")
mv = metrics(confusion(np.zeros((8, 8), bool), np.zeros((8, 8), bool)))
print(f"  defined:    sp={mv.sp}, pa={mv.pa}, fpr={mv.fpr}")
print(f"  degenerate: {sorted(mv.degenerate)}")

print()
print("the balanced 2x2 table scores at chance everywhere:")
mv = metrics(ConfusionCounts(tp=1, fn=1, fp=1, tn=1))
print(f"  iou={mv.iou:.4f} dc={mv.dc} pa={mv.pa} ck={mv.ck}")

# soft predictions: threshold-swept ROC AUC instead of balanced accuracy
print()
scores = np.where(gt, 0.7, 0.3) + rng.normal(0, 0.25, gt.shape)
print(f"soft-map ROC AUC on noisy scores: {roc_auc(gt, scores):.4f}")
print(f"hard-mask AUC (balanced accuracy) for comparison: {metrics(confusion(gt, scores > 0.5)).auc:.4f}")
