"""lesionaudit: distribution-based skin tone and lesion-skin contrast
auditing for dermoscopic segmentation outputs.

The pipeline per image: load and align rasters, mask hair, compute a
per-pixel ITA map, split it into whole/skin/lesion pixel samples, measure
six signed-Wasserstein pattern distances plus scalar tone baselines, score
each model's mask on nine metrics, then correlate measures against scores
with bootstrap confidence intervals, optionally per stratum.
"""

__version__ = "0.1.0"

from .color import (
    ItaMap,
    LabPixel,
    ita_map,
    ita_pixel,
    lab_to_srgb_array,
    srgb_to_lab,
    srgb_to_lab_array,
)
from .errors import (
    AuditError,
    ConstantSeriesError,
    DataError,
    EmptySampleError,
    InsufficientDataError,
    ManifestError,
)
from .hairmask import HairParams, blackhat, clahe, hair_mask, morph_open
from .ingest import (
    AuditManifest,
    ImageRecord,
    LoadedRecord,
    binarize_mask,
    load_manifest,
    load_record,
)
from .report import AuditConfig, AuditResult, AuditRow, run_audit
from .segmetrics import ConfusionCounts, MetricVector, confusion, metrics, roc_auc
from .stats import (
    CorrelationEstimate,
    PairedSeries,
    Stratum,
    bootstrap_ci,
    p_value,
    spearman,
    stratify,
)
from .synthgen import SynthImage, SynthSpec, generate, reference_segmenter
from .tonedist import (
    Fitzpatrick,
    Pattern,
    PatternDistance,
    PixelSample,
    ReferenceDistribution,
    ReferenceKind,
    Region,
    ToneSummary,
    fitzpatrick_of_ita,
    mean_ita,
    region_samples,
    signed_w1,
    six_patterns,
    tone_summary,
)

__all__ = [
    "__version__",
    "AuditConfig", "AuditError", "AuditManifest", "AuditResult", "AuditRow",
    "ConfusionCounts", "ConstantSeriesError", "CorrelationEstimate",
    "DataError", "EmptySampleError", "Fitzpatrick", "HairParams",
    "ImageRecord", "InsufficientDataError", "ItaMap", "LabPixel",
    "LoadedRecord", "ManifestError", "MetricVector", "PairedSeries",
    "Pattern", "PatternDistance", "PixelSample", "ReferenceDistribution",
    "ReferenceKind", "Region", "Stratum", "SynthImage", "SynthSpec",
    "ToneSummary",
    "binarize_mask", "blackhat", "bootstrap_ci", "clahe", "confusion",
    "fitzpatrick_of_ita", "generate", "hair_mask", "ita_map", "ita_pixel",
    "lab_to_srgb_array", "load_manifest", "load_record", "mean_ita",
    "metrics", "morph_open", "p_value", "reference_segmenter",
    "region_samples", "roc_auc", "run_audit", "signed_w1", "six_patterns",
    "spearman", "srgb_to_lab", "srgb_to_lab_array", "stratify",
    "tone_summary",
]
