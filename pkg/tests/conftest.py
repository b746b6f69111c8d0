import csv

import cv2
import numpy as np
import pytest

from lesionaudit import SynthSpec, generate, reference_segmenter


def write_fixture_dataset(
    root,
    specs,
    models=("reference",),
    seg_noise=4.0,
    class_labels=None,
    fmt="csv",
):
    """Render synthetic fixtures to disk and return a manifest path.

    ``specs`` is a list of SynthSpec (one batch each); every image gets a
    prediction from the reference segmenter per model (models beyond the
    first get extra noise so they differ).
    """
    (root / "data").mkdir(parents=True, exist_ok=True)
    rows = []
    idx = 0
    for spec_no, spec in enumerate(specs):
        for img in generate(spec):
            ident = f"img{idx:04d}"
            img_path = root / "data" / f"{ident}.png"
            gt_path = root / "data" / f"{ident}_gt.png"
            cv2.imwrite(str(img_path), cv2.cvtColor(img.image, cv2.COLOR_RGB2BGR))
            cv2.imwrite(str(gt_path), img.gt_mask.astype(np.uint8) * 255)
            row = {"id": ident, "image": f"data/{ident}.png", "gt_mask": f"data/{ident}_gt.png"}
            for m, model in enumerate(models):
                pred = reference_segmenter(
                    img.image, noise_sd=seg_noise * (1 + m), seed=1000 * m + idx
                )
                pred_path = root / "data" / f"{ident}_{model}.png"
                cv2.imwrite(str(pred_path), pred.astype(np.uint8) * 255)
                row[f"pred_mask:{model}"] = f"data/{ident}_{model}.png"
            row["class"] = class_labels[spec_no % len(class_labels)] if class_labels else ""
            rows.append(row)
            idx += 1
    header = ["id", "image", "gt_mask"] + [f"pred_mask:{m}" for m in models] + ["class"]
    if fmt == "json":
        import json

        path = root / "manifest.json"
        path.write_text(json.dumps(rows, indent=1), encoding="utf-8")
    else:
        path = root / "manifest.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=header)
            writer.writeheader()
            writer.writerows(rows)
    return path


@pytest.fixture
def small_manifest(tmp_path):
    """Three 64 px two-tone records with one reference model."""
    specs = [
        SynthSpec(count=1, size=64, skin_ita_mean=45, lesion_ita_mean=5,
                  ita_noise_sd=2.0, seed=i)
        for i in range(3)
    ]
    return write_fixture_dataset(tmp_path, specs, class_labels=["MEL", "BCC", "NV"])
