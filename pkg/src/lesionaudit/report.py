"""Batch audit orchestration: per-image rows, correlation tables, and the
run manifest.

Row and correlation CSV layouts are fixed (see ROWS_HEADER and
CORR_HEADER); numbers are serialized as shortest round-trip decimals
capped at 9 significant digits, missing values as empty cells. Two runs
with the same config and seed produce byte-identical CSVs.
"""

import csv
import json
import os
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict
from pathlib import Path

from . import __version__
from .errors import AuditError, ConstantSeriesError, InsufficientDataError
from .hairmask import HairParams, hair_mask
from .ingest import LoadedRecord, load_manifest, load_record
from .color import ita_map
from .segmetrics import METRIC_NAMES, confusion, metrics
from .stats import PairedSeries, bootstrap_ci, p_value, stratify
from .tonedist import (
    Fitzpatrick,
    Pattern,
    ReferenceDistribution,
    tone_summary,
)

ROWS_HEADER = (
    "id,class,model,mean_ita,fitzpatrick,"
    "p1,p2,p3,p4,p5,p6,iou,dc,st,sp,pa,auc,ck,fpr,fnr,flags"
)
CORR_HEADER = "stratum,measure,metric,model,rho,ci_low,ci_high,p,n"
MEASURES = ("mean_ita", "fitzpatrick", "p1", "p2", "p3", "p4", "p5", "p6")


@dataclass
class AuditConfig:
    manifest: Path
    out_dir: Path
    hair: HairParams = field(default_factory=HairParams)
    reference: ReferenceDistribution = field(default_factory=ReferenceDistribution)
    resize_target: tuple[int, int] = (224, 224)
    resamples: int = 1000
    ci_level: float = 0.95
    seed: int = 0
    p_method: str = "t_approx"
    strata: tuple[str, ...] = ("disease_class",)
    min_stratum_n: int = 10
    plots: bool = False
    skip_bad: bool = False

    def __post_init__(self):
        self.manifest = Path(self.manifest)
        self.out_dir = Path(self.out_dir)
        if self.resamples < 1:
            raise ValueError("resamples must be >= 1")
        if not 0.0 < self.ci_level < 1.0:
            raise ValueError("ci_level must be within (0, 1)")
        if self.p_method not in ("t_approx", "permutation"):
            raise ValueError("p_method must be 't_approx' or 'permutation'")


@dataclass
class AuditRow:
    """One (image, model) result row, exactly what rows.csv serializes."""

    id: str
    class_label: str | None
    model: str
    mean_ita: float | None
    fitzpatrick: Fitzpatrick | None
    patterns: dict[str, float | None]
    metrics: dict[str, float]
    flags: tuple[str, ...]

    def measure(self, name: str) -> float:
        """Numeric value of a tone measure column (NaN when missing)."""
        if name == "mean_ita":
            return float("nan") if self.mean_ita is None else self.mean_ita
        if name == "fitzpatrick":
            return float("nan") if self.fitzpatrick is None else float(int(self.fitzpatrick))
        val = self.patterns.get(name)
        return float("nan") if val is None else val


@dataclass
class CorrelationRow:
    stratum: str
    measure: str
    metric: str
    model: str
    rho: float | None
    ci_low: float | None
    ci_high: float | None
    p: float | None
    n: int


@dataclass
class AuditResult:
    rows: list[AuditRow]
    correlations: list[CorrelationRow]
    out_dir: Path
    skipped: list[str] = field(default_factory=list)
    low_power: list[str] = field(default_factory=list)


def fmt(value) -> str:
    """Shortest round-trip decimal capped at 9 significant digits."""
    if value is None:
        return ""
    if isinstance(value, float):
        if value != value:  # NaN means missing
            return ""
        return f"{value:.9g}"
    return str(value)


def audit_record(loaded: LoadedRecord, cfg: AuditConfig) -> list[AuditRow]:
    """Tone summary plus metric vector for each model of one loaded record."""
    hair = hair_mask(loaded.image, cfg.hair)
    imap = ita_map(loaded.image, exclude=hair)
    tone = tone_summary(imap, loaded.gt_mask, cfg.reference)
    rows = []
    for model, pred in sorted(loaded.pred_masks.items()):
        mv = metrics(confusion(loaded.gt_mask, pred))
        flags = set(loaded.flags) | set(tone.flags)
        flags.update(f"deg_{name}" for name in sorted(mv.degenerate))
        rows.append(
            AuditRow(
                id=loaded.record.id,
                class_label=loaded.record.class_label,
                model=model,
                mean_ita=tone.mean_ita,
                fitzpatrick=tone.fitzpatrick,
                patterns={
                    pat.value: dist.value for pat, dist in tone.patterns.items()
                },
                metrics=mv.as_dict(),
                flags=tuple(sorted(flags)),
            )
        )
    return rows


def _cell_seed(master: int, *parts: str) -> list[int]:
    # stable per-cell RNG stream regardless of evaluation order
    return [master, zlib.crc32("|".join(parts).encode("utf-8"))]


def compute_correlations(rows: list[AuditRow], cfg: AuditConfig) -> tuple[list[CorrelationRow], list[str]]:
    """One correlation row per (stratum x measure x metric x model).

    Cells with fewer than 3 complete pairs, or a constant series, are
    emitted with empty statistics but a recorded n. Returns the rows plus
    the labels of low-power strata.
    """
    strata: dict[str, list[AuditRow]] = {"all": rows}
    low_power: list[str] = []
    for key in cfg.strata:
        prefix = "class" if key == "disease_class" else "fitzpatrick"
        for label, stratum in stratify(rows, by=key, min_n=cfg.min_stratum_n).items():
            name = f"{prefix}:{label}"
            strata[name] = stratum.items
            if stratum.low_power:
                low_power.append(name)
    models = sorted({r.model for r in rows})
    out = []
    for stratum_name in sorted(strata):
        in_stratum = strata[stratum_name]
        for measure in MEASURES:
            for metric in METRIC_NAMES:
                for model in models:
                    sub = [r for r in in_stratum if r.model == model]
                    pairs = PairedSeries.from_values(
                        [r.measure(measure) for r in sub],
                        [r.metrics[metric] for r in sub],
                        ids=[r.id for r in sub],
                    )
                    cell = CorrelationRow(
                        stratum_name, measure, metric, model,
                        None, None, None, None, pairs.n,
                    )
                    try:
                        seed = _cell_seed(cfg.seed, stratum_name, measure, metric, model)
                        est = bootstrap_ci(
                            pairs, resamples=cfg.resamples, level=cfg.ci_level, seed=seed
                        )
                        cell.rho = est.rho
                        cell.ci_low = est.ci_low
                        cell.ci_high = est.ci_high
                        cell.p = p_value(pairs, method=cfg.p_method, seed=seed)
                    except (InsufficientDataError, ConstantSeriesError):
                        pass
                    out.append(cell)
    return out, low_power


def write_rows_csv(rows: list[AuditRow], path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ROWS_HEADER.split(","))
        for r in rows:
            fitz = "" if r.fitzpatrick is None else str(int(r.fitzpatrick))
            writer.writerow(
                [
                    r.id,
                    r.class_label or "",
                    r.model,
                    fmt(r.mean_ita),
                    fitz,
                    *[fmt(r.patterns[p.value]) for p in Pattern],
                    *[fmt(r.metrics[m]) for m in METRIC_NAMES],
                    "|".join(r.flags),
                ]
            )


def write_correlations_csv(cells: list[CorrelationRow], path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CORR_HEADER.split(","))
        for c in cells:
            writer.writerow(
                [
                    c.stratum,
                    c.measure,
                    c.metric,
                    c.model,
                    fmt(c.rho),
                    fmt(c.ci_low),
                    fmt(c.ci_high),
                    fmt(c.p),
                    str(c.n),
                ]
            )


def _config_dict(cfg: AuditConfig) -> dict:
    d = asdict(cfg)
    d["manifest"] = str(cfg.manifest)
    d["out_dir"] = str(cfg.out_dir)
    d["reference"] = {
        "kind": cfg.reference.kind.value,
        "anchor": cfg.reference.anchor,
        "upper": cfg.reference.upper,
    }
    d["resize_target"] = list(cfg.resize_target)
    d["strata"] = list(cfg.strata)
    return d


def write_run_json(cfg: AuditConfig, result: AuditResult, path: Path, started: str) -> None:
    payload = {
        "tool": "lesionaudit",
        "version": __version__,
        "config": _config_dict(cfg),
        "seed": cfg.seed,
        "started": started,
        "finished": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "n_rows": len(result.rows),
        "skipped_records": result.skipped,
        "low_power_strata": result.low_power,
    }
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def run_audit(cfg: AuditConfig) -> AuditResult:
    """Run the full audit over a manifest and write rows.csv,
    correlations.csv, run.json, and (optionally) plots into cfg.out_dir.

    Record-level hard errors abort unless ``cfg.skip_bad`` is set, in
    which case the offending records are listed in run.json. Parallelism
    is capped by the AUDIT_THREADS environment variable; output is
    byte-identical either way because aggregation happens in one sorted
    pass.
    """
    started = time.strftime("%Y-%m-%dT%H:%M:%S%z")
    manifest = load_manifest(cfg.manifest, resize_target=cfg.resize_target)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)

    def process(rec):
        return audit_record(load_record(rec, manifest.resize_target), cfg)

    threads = int(os.environ.get("AUDIT_THREADS", "0") or 0)
    rows: list[AuditRow] = []
    skipped: list[str] = []
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = {pool.submit(process, rec): rec for rec in manifest.records}
            for fut, rec in futures.items():
                try:
                    rows.extend(fut.result())
                except AuditError as exc:
                    if not cfg.skip_bad:
                        raise AuditError(f"record {rec.id!r}: {exc}") from exc
                    skipped.append(rec.id)
    else:
        for rec in manifest.records:
            try:
                rows.extend(process(rec))
            except AuditError as exc:
                if not cfg.skip_bad:
                    raise AuditError(f"record {rec.id!r}: {exc}") from exc
                skipped.append(rec.id)
    rows.sort(key=lambda r: (r.id, r.model))
    correlations, low_power = compute_correlations(rows, cfg)
    result = AuditResult(
        rows=rows,
        correlations=correlations,
        out_dir=cfg.out_dir,
        skipped=sorted(skipped),
        low_power=low_power,
    )
    write_rows_csv(rows, cfg.out_dir / "rows.csv")
    write_correlations_csv(correlations, cfg.out_dir / "correlations.csv")
    write_run_json(cfg, result, cfg.out_dir / "run.json", started)
    if cfg.plots:
        from .plots import emit_plots

        emit_plots(rows, correlations, cfg.out_dir, provenance={"seed": cfg.seed})
    return result
