"""Spearman rank correlations with bootstrap confidence intervals,
p-values, and per-stratum grouping.

Everything here is deterministic under a fixed seed: bootstrap resample
indices are drawn up front from one seeded generator, so serial and
parallel evaluation of the resamples give bit-identical intervals.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import permutations as iter_permutations

import numpy as np
from scipy.stats import rankdata
from scipy.stats import t as t_dist

from .errors import ConstantSeriesError, InsufficientDataError

# n <= this bound makes the permutation test exhaust all n! orderings
# instead of sampling; 7! = 5040 orderings is still instant.
_EXHAUSTIVE_PERMUTATION_MAX_N = 7

# tail-count tolerance so 1-ulp float noise cannot flip a >= comparison
_TAIL_TOL = 1e-9


@dataclass
class PairedSeries:
    """Aligned (x, y) observations with missing pairs already dropped."""

    x: np.ndarray
    y: np.ndarray
    ids: tuple = ()

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=np.float64).ravel()
        self.y = np.asarray(self.y, dtype=np.float64).ravel()
        if self.x.size != self.y.size:
            raise ValueError("x and y lengths differ")
        if self.ids and len(self.ids) != self.x.size:
            raise ValueError("ids length differs from data length")
        if np.isnan(self.x).any() or np.isnan(self.y).any():
            raise ValueError("PairedSeries must not contain NaN; use from_values")

    @property
    def n(self) -> int:
        return self.x.size

    @classmethod
    def from_values(cls, x, y, ids=None) -> "PairedSeries":
        """Build a series by pairwise deletion of entries with a NaN side."""
        x = np.asarray(x, dtype=np.float64).ravel()
        y = np.asarray(y, dtype=np.float64).ravel()
        if x.size != y.size:
            raise ValueError("x and y lengths differ")
        keep = ~(np.isnan(x) | np.isnan(y))
        kept_ids = tuple(i for i, k in zip(ids, keep) if k) if ids is not None else ()
        return cls(x[keep], y[keep], kept_ids)


@dataclass
class CorrelationEstimate:
    """Spearman rho with a percentile-bootstrap CI for one cell."""

    rho: float
    ci_low: float
    ci_high: float
    n: int
    resamples: int = 1000
    ci_level: float = 0.95
    p_value: float = float("nan")


def _rank_corr(rx: np.ndarray, ry: np.ndarray) -> float:
    """Pearson correlation of two rank vectors; NaN if either is constant."""
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    sxx = dx @ dx
    syy = dy @ dy
    if sxx == 0.0 or syy == 0.0:
        return float("nan")
    return float((dx @ dy) / math.sqrt(sxx * syy))


def spearman(s: PairedSeries, y=None) -> float:
    """Spearman rank correlation: Pearson correlation of average ranks.

    Ties receive the mean of their rank range. Accepts a PairedSeries or
    two raw arrays. Raises for n < 3 or a constant series, where the
    coefficient is undefined.
    """
    if y is not None:
        s = PairedSeries(np.asarray(s), np.asarray(y))
    if s.n < 3:
        raise InsufficientDataError(f"need at least 3 pairs, got {s.n}")
    rho = _rank_corr(rankdata(s.x), rankdata(s.y))
    if math.isnan(rho):
        raise ConstantSeriesError("rank correlation undefined for a constant series")
    return rho


def bootstrap_ci(
    s: PairedSeries,
    resamples: int = 1000,
    level: float = 0.95,
    seed=0,
    workers: int | None = None,
) -> CorrelationEstimate:
    """Percentile-bootstrap CI for Spearman rho over pair resamples.

    Resamples whose x or y side comes out constant are skipped (rho is
    undefined there). ``workers`` > 1 evaluates resamples in a thread
    pool; results are identical to the serial path because the index
    matrix is drawn before any evaluation.
    """
    rho = spearman(s)
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, s.n, size=(resamples, s.n))

    def rho_of(rows) -> list[float]:
        out = []
        for r in rows:
            val = _rank_corr(rankdata(s.x[idx[r]]), rankdata(s.y[idx[r]]))
            if not math.isnan(val):
                out.append(val)
        return out

    if workers and workers > 1:
        chunks = np.array_split(np.arange(resamples), workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(rho_of, chunks))
        rhos = [v for part in parts for v in part]
    else:
        rhos = rho_of(range(resamples))
    if not rhos:
        return CorrelationEstimate(rho, float("nan"), float("nan"), s.n, resamples, level)
    alpha = (1.0 - level) / 2.0
    lo, hi = np.quantile(rhos, [alpha, 1.0 - alpha])
    return CorrelationEstimate(rho, float(lo), float(hi), s.n, resamples, level)


def _exhaustive_permutation_p(rx: np.ndarray, ry: np.ndarray, observed: float) -> float:
    total = 0
    tail = 0
    target = abs(observed) - _TAIL_TOL
    for perm in iter_permutations(ry):
        val = _rank_corr(rx, np.asarray(perm))
        if math.isnan(val):
            val = 0.0
        total += 1
        if abs(val) >= target:
            tail += 1
    return tail / total


def p_value(
    s: PairedSeries,
    method: str = "t_approx",
    seed=0,
    permutations: int = 10000,
) -> float:
    """Two-sided p-value for the observed Spearman rho.

    't_approx' uses the standard t statistic rho * sqrt((n-2)/(1-rho^2))
    on n-2 degrees of freedom. 'permutation' shuffles y: exact enumeration
    of all n! orderings when n <= 7, otherwise seeded Monte Carlo with
    add-one smoothing.
    """
    rho = spearman(s)
    n = s.n
    if method == "t_approx":
        if abs(rho) >= 1.0:
            return 0.0
        t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
        return float(min(1.0, 2.0 * t_dist.sf(abs(t), n - 2)))
    if method == "permutation":
        rx, ry = rankdata(s.x), rankdata(s.y)
        if n <= _EXHAUSTIVE_PERMUTATION_MAX_N:
            return _exhaustive_permutation_p(rx, ry, rho)
        rng = np.random.default_rng(seed)
        target = abs(rho) - _TAIL_TOL
        tail = 0
        for _ in range(permutations):
            val = _rank_corr(rx, rng.permutation(ry))
            if not math.isnan(val) and abs(val) >= target:
                tail += 1
        return (1 + tail) / (1 + permutations)
    raise ValueError(f"unknown p-value method: {method!r}")


@dataclass
class Stratum:
    """Rows belonging to one stratum, flagged when underpowered."""

    label: str
    items: list
    low_power: bool = False

    @property
    def n(self) -> int:
        return len(self.items)


STRATIFY_KEYS = ("disease_class", "fitzpatrick")


def stratify(records, by: str, min_n: int = 10) -> dict[str, Stratum]:
    """Partition audit rows by disease class or Fitzpatrick type.

    Rows without a label land in an 'unlabeled' stratum so the union of
    strata is always the full input. Strata with fewer than ``min_n`` rows
    are flagged low-power rather than dropped.
    """
    if by not in STRATIFY_KEYS:
        raise ValueError(f"stratify key must be one of {STRATIFY_KEYS}, got {by!r}")
    groups: dict[str, list] = {}
    for rec in records:
        if by == "disease_class":
            label = getattr(rec, "class_label", None)
        else:
            fitz = getattr(rec, "fitzpatrick", None)
            label = fitz.name if fitz is not None else None
        groups.setdefault(label if label is not None else "unlabeled", []).append(rec)
    return {
        label: Stratum(label, items, low_power=len(items) < min_n)
        for label, items in sorted(groups.items())
    }
