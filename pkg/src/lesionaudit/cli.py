"""The ``audit`` command line: run a batch audit, generate synthetic
fixtures, or dump a debug hair mask.

Exit codes: 0 success, 1 configuration error, 2 data error.
"""

import argparse
import csv
import json
import sys
from pathlib import Path

from .errors import AuditError, ManifestError
from .hairmask import HairParams, hair_mask, write_mask_png
from .ingest import _read_rgb
from .report import AuditConfig, run_audit
from .synthgen import SynthSpec, generate, reference_segmenter
from .tonedist import ReferenceDistribution, ReferenceKind

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="audit",
        description="Skin tone / lesion contrast audit for segmentation outputs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the full audit over a manifest")
    run.add_argument("--manifest", required=True, type=Path)
    run.add_argument("--out", required=True, type=Path)
    run.add_argument("--ref", choices=["point", "uniform"], default="point")
    run.add_argument("--anchor", type=float, default=-30.0)
    run.add_argument("--upper", type=float, default=90.0,
                     help="upper bound of the uniform reference")
    run.add_argument("--resamples", type=int, default=1000)
    run.add_argument("--level", type=float, default=0.95)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--pvalue", choices=["t", "perm"], default="t")
    run.add_argument("--skip-bad", action="store_true",
                     help="skip unreadable records instead of aborting")
    run.add_argument("--plots", action="store_true")
    run.add_argument("--strata", default="class",
                     help="comma list of class,fitzpatrick (or 'none')")
    run.add_argument("--resize", type=int, nargs=2, default=(224, 224),
                     metavar=("W", "H"))
    run.add_argument("--hair-threshold", type=int, default=10)

    synth = sub.add_parser("synth", help="generate synthetic fixtures")
    synth.add_argument("--spec", required=True, type=Path,
                       help="JSON file with SynthSpec fields")
    synth.add_argument("--out", required=True, type=Path)
    synth.add_argument("--segment", action="store_true",
                       help="also emit reference-segmenter predictions")
    synth.add_argument("--seg-noise", type=float, default=0.0)
    synth.add_argument("--seg-seed", type=int, default=0)

    hm = sub.add_parser("hairmask", help="write the debug hair mask for one image")
    hm.add_argument("--image", required=True, type=Path)
    hm.add_argument("--out", required=True, type=Path)
    hm.add_argument("--threshold", type=int, default=10)
    hm.add_argument("--open-kernel", type=int, default=3)
    hm.add_argument("--blackhat-kernel", type=int, default=8)
    hm.add_argument("--clahe-clip", type=float, default=2.0)
    return parser


def _cmd_run(args) -> int:
    strata = []
    for token in str(args.strata).split(","):
        token = token.strip().lower()
        if token in ("", "none"):
            continue
        if token == "class":
            strata.append("disease_class")
        elif token == "fitzpatrick":
            strata.append("fitzpatrick")
        else:
            print(f"audit: unknown stratum {token!r}", file=sys.stderr)
            return EXIT_CONFIG
    kind = ReferenceKind.POINT_MASS if args.ref == "point" else ReferenceKind.UNIFORM
    try:
        cfg = AuditConfig(
            manifest=args.manifest,
            out_dir=args.out,
            hair=HairParams(threshold=args.hair_threshold),
            reference=ReferenceDistribution(kind=kind, anchor=args.anchor, upper=args.upper),
            resize_target=tuple(args.resize),
            resamples=args.resamples,
            ci_level=args.level,
            seed=args.seed,
            p_method="t_approx" if args.pvalue == "t" else "permutation",
            strata=tuple(strata),
            plots=args.plots,
            skip_bad=args.skip_bad,
        )
    except ValueError as exc:
        print(f"audit: bad configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        result = run_audit(cfg)
    except ManifestError as exc:
        print(f"audit: manifest error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except AuditError as exc:
        print(f"audit: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    print(
        f"audit: wrote {len(result.rows)} rows, "
        f"{len(result.correlations)} correlation cells to {cfg.out_dir}"
    )
    if result.skipped:
        print(f"audit: skipped records: {', '.join(result.skipped)}")
    return EXIT_OK


def _cmd_synth(args) -> int:
    try:
        spec_dict = json.loads(args.spec.read_text(encoding="utf-8"))
        spec = SynthSpec(**spec_dict)
    except (OSError, json.JSONDecodeError, TypeError, ValueError) as exc:
        print(f"audit: bad synth spec: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    outdir = args.out
    (outdir / "images").mkdir(parents=True, exist_ok=True)
    (outdir / "masks").mkdir(exist_ok=True)
    if args.segment:
        (outdir / "preds").mkdir(exist_ok=True)
    import cv2

    header = ["id", "image", "gt_mask"]
    if args.segment:
        header.append("pred_mask:reference")
    header.append("class")
    rows = []
    for img in generate(spec):
        ident = f"synth_{img.meta['index']:04d}"
        img_path = outdir / "images" / f"{ident}.png"
        gt_path = outdir / "masks" / f"{ident}.png"
        cv2.imwrite(str(img_path), cv2.cvtColor(img.image, cv2.COLOR_RGB2BGR))
        cv2.imwrite(str(gt_path), img.gt_mask.astype("uint8") * 255)
        row = [ident, f"images/{ident}.png", f"masks/{ident}.png"]
        if args.segment:
            pred = reference_segmenter(img.image, noise_sd=args.seg_noise,
                                       seed=args.seg_seed + img.meta["index"])
            pred_path = outdir / "preds" / f"{ident}.png"
            cv2.imwrite(str(pred_path), pred.astype("uint8") * 255)
            row.append(f"preds/{ident}.png")
        row.append("synthetic")
        rows.append(row)
    with open(outdir / "manifest.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    with open(outdir / "meta.json", "w", encoding="utf-8") as fh:
        json.dump({"spec": spec_dict, "count": spec.count}, fh, indent=2, sort_keys=True)
    print(f"audit: wrote {spec.count} fixtures to {outdir}")
    return EXIT_OK


def _cmd_hairmask(args) -> int:
    try:
        params = HairParams(
            open_kernel=args.open_kernel,
            blackhat_kernel=args.blackhat_kernel,
            clahe_clip=args.clahe_clip,
            threshold=args.threshold,
        )
    except ValueError as exc:
        print(f"audit: bad parameters: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        img = _read_rgb(args.image)
    except AuditError as exc:
        print(f"audit: {exc}", file=sys.stderr)
        return EXIT_DATA
    mask = hair_mask(img, params)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_mask_png(mask, args.out)
    frac = 100.0 * mask.mean()
    print(f"audit: wrote {args.out} ({frac:.2f}% of pixels flagged as hair)")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "synth":
        return _cmd_synth(args)
    return _cmd_hairmask(args)


if __name__ == "__main__":
    sys.exit(main())
