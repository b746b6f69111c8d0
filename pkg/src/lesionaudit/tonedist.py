"""ITA pixel distributions, signed 1-D Wasserstein pattern distances, and
scalar tone baselines (mean ITA, Fitzpatrick type).

The six comparison patterns relate a per-image ITA distribution triple
(whole image, skin-only, lesion-only) to a fixed reference and to each
other:

    P1 = reference vs whole    P4 = whole vs skin
    P2 = reference vs skin     P5 = whole vs lesion
    P3 = reference vs lesion   P6 = skin vs lesion

Each distance is the area between the two CDFs (the 1-D W1 transport
cost), signed by comparing medians: negative when the left argument's
median is >= the right's, positive otherwise. For the usual darker-lesion
image, P6 therefore comes out negative, and |P6| is the lesion-skin
contrast.
"""

from dataclasses import dataclass, field
from enum import Enum, IntEnum

import numpy as np
from scipy.stats import wasserstein_distance

from .color import ItaMap
from .errors import DataError, EmptySampleError


class Region(Enum):
    WHOLE_IMAGE = "whole"
    SKIN_ONLY = "skin"
    LESION_ONLY = "lesion"


@dataclass
class PixelSample:
    """A multiset of ITA values drawn from one masked region of one image."""

    values: np.ndarray
    region: Region

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64).ravel()

    @property
    def n(self) -> int:
        return self.values.size


class ReferenceKind(Enum):
    POINT_MASS = "point"
    UNIFORM = "uniform"


@dataclass(frozen=True)
class ReferenceDistribution:
    """Fixed reference for patterns 1-3, anchored at the dark-tone bound.

    POINT_MASS puts all mass at ``anchor`` (distances become mean absolute
    deviations from the anchor); UNIFORM spreads it over
    [``anchor``, ``upper``].
    """

    kind: ReferenceKind = ReferenceKind.POINT_MASS
    anchor: float = -30.0
    upper: float = 90.0

    def __post_init__(self):
        if not -90.0 <= self.anchor <= 90.0:
            raise ValueError("anchor must lie within [-90, 90] degrees")
        if self.kind is ReferenceKind.UNIFORM and self.anchor > self.upper:
            raise ValueError("uniform reference needs anchor <= upper")

    @property
    def median(self) -> float:
        if self.kind is ReferenceKind.POINT_MASS:
            return self.anchor
        return 0.5 * (self.anchor + self.upper)


class Pattern(Enum):
    P1 = "p1"
    P2 = "p2"
    P3 = "p3"
    P4 = "p4"
    P5 = "p5"
    P6 = "p6"


@dataclass(frozen=True)
class PatternDistance:
    """One signed-W1 scalar; ``value`` is None when an operand was empty."""

    pattern: Pattern
    value: float | None
    n_left: int
    n_right: int

    @property
    def missing(self) -> bool:
        return self.value is None


class Fitzpatrick(IntEnum):
    I = 1
    II = 2
    III = 3
    IV = 4
    V = 5
    VI = 6


@dataclass
class ToneSummary:
    """Scalar baselines plus the six pattern distances for one image."""

    mean_ita: float | None
    fitzpatrick: Fitzpatrick | None
    patterns: dict[Pattern, PatternDistance]
    flags: set[str] = field(default_factory=set)


def region_samples(
    ita: ItaMap, lesion: np.ndarray
) -> tuple[PixelSample, PixelSample, PixelSample]:
    """Split an ITA map's valid pixels into (whole, skin, lesion) samples.

    ``lesion`` is the ground-truth boolean mask. Hair exclusion is already
    baked into the map's validity, so the whole-image multiset is exactly
    the disjoint union of the skin-only and lesion-only multisets.
    """
    lesion = np.asarray(lesion, dtype=bool)
    if lesion.shape != ita.ita.shape:
        raise DataError(
            f"lesion mask shape {lesion.shape} does not match ITA map {ita.ita.shape}"
        )
    whole = PixelSample(ita.ita[ita.valid], Region.WHOLE_IMAGE)
    skin = PixelSample(ita.ita[ita.valid & ~lesion], Region.SKIN_ONLY)
    les = PixelSample(ita.ita[ita.valid & lesion], Region.LESION_ONLY)
    return whole, skin, les


def lower_median(values: np.ndarray) -> float:
    """Generalized-inverse median: smallest x with F(x) >= 1/2.

    For a sorted sample this is element (n - 1) // 2; no interpolation, so
    the median-comparison sign rule stays unambiguous for even n.
    """
    values = np.asarray(values)
    if values.size == 0:
        raise EmptySampleError("median of an empty sample")
    return float(np.partition(values, (values.size - 1) // 2)[(values.size - 1) // 2])


def _uniform_vs_sample_w1(anchor: float, upper: float, values: np.ndarray) -> float:
    """Exact integral of |F_uniform - F_empirical| over the real line.

    The integrand is piecewise linear between breakpoints (sample values
    plus the uniform's endpoints), so each segment integrates in closed
    form, splitting at sign crossings.
    """
    if upper == anchor:
        return float(np.abs(values - anchor).mean())
    v = np.sort(values)
    n = v.size
    pts = np.unique(np.concatenate([v, [anchor, upper]]))
    width = upper - anchor
    total = 0.0
    for t1, t2 in zip(pts[:-1], pts[1:]):
        c = np.searchsorted(v, t1, side="right") / n  # empirical CDF on (t1, t2]
        u1 = min(max((t1 - anchor) / width, 0.0), 1.0)
        u2 = min(max((t2 - anchor) / width, 0.0), 1.0)
        g1, g2 = c - u1, c - u2
        seg = t2 - t1
        if g1 * g2 >= 0:
            total += 0.5 * (abs(g1) + abs(g2)) * seg
        else:
            cross = seg * g1 / (g1 - g2)
            total += 0.5 * (abs(g1) * cross + abs(g2) * (seg - cross))
    return total


def signed_w1(x0, xi: PixelSample) -> float:
    """Signed 1-D Wasserstein distance from ``x0`` to ``xi``.

    ``x0`` is a PixelSample or a ReferenceDistribution; ``xi`` must be a
    nonempty PixelSample. Magnitude is the L1 distance between the two
    CDFs; the sign is -1 when median(x0) >= median(xi) and +1 otherwise,
    so "darker right-hand side" comes out negative.
    """
    if xi.n == 0:
        raise EmptySampleError("signed_w1 right operand has no pixels")
    if isinstance(x0, ReferenceDistribution):
        if x0.kind is ReferenceKind.POINT_MASS:
            mag = float(np.abs(xi.values - x0.anchor).mean())
        else:
            mag = _uniform_vs_sample_w1(x0.anchor, x0.upper, xi.values)
        med0 = x0.median
    else:
        if x0.n == 0:
            raise EmptySampleError("signed_w1 left operand has no pixels")
        mag = float(wasserstein_distance(x0.values, xi.values))
        med0 = lower_median(x0.values)
    sign = -1.0 if med0 >= lower_median(xi.values) else 1.0
    return sign * mag + 0.0  # + 0.0 folds -0.0 into 0.0


def six_patterns(
    whole: PixelSample,
    skin: PixelSample,
    lesion: PixelSample,
    ref: ReferenceDistribution,
) -> dict[Pattern, PatternDistance]:
    """All six pattern distances for one image.

    Patterns whose operands include an empty sample are emitted as missing
    (value None) rather than raising: empty skin or lesion regions are
    data, not failures.
    """
    pairs = {
        Pattern.P1: (ref, whole),
        Pattern.P2: (ref, skin),
        Pattern.P3: (ref, lesion),
        Pattern.P4: (whole, skin),
        Pattern.P5: (whole, lesion),
        Pattern.P6: (skin, lesion),
    }
    out = {}
    for pat, (left, right) in pairs.items():
        n_left = 0 if isinstance(left, ReferenceDistribution) else left.n
        n_right = right.n
        left_ok = isinstance(left, ReferenceDistribution) or left.n > 0
        if left_ok and right.n > 0:
            value = signed_w1(left, right)
        else:
            value = None
        out[pat] = PatternDistance(pat, value, n_left, n_right)
    return out


def mean_ita(s: PixelSample) -> float:
    """Arithmetic mean ITA of a nonempty sample, in degrees."""
    if s.n == 0:
        raise EmptySampleError("mean of an empty sample")
    return float(s.values.mean())


# Scalar-ITA thresholds of the standard six-type convention (degrees);
# not part of the measurement pipeline itself, external colorimetry lore.
_FITZPATRICK_BINS = (
    (55.0, Fitzpatrick.I),
    (41.0, Fitzpatrick.II),
    (28.0, Fitzpatrick.III),
    (10.0, Fitzpatrick.IV),
    (-30.0, Fitzpatrick.V),
)


def fitzpatrick_of_ita(mean: float) -> Fitzpatrick:
    """Bin a scalar mean ITA into Fitzpatrick types I (lightest) .. VI.

    Half-open bins: a value exactly on a boundary belongs to the darker
    category, e.g. 55.0 -> II and -30.0 -> VI.
    """
    for lo, cat in _FITZPATRICK_BINS:
        if mean > lo:
            return cat
    return Fitzpatrick.VI


def tone_summary(
    ita: ItaMap, lesion: np.ndarray, ref: ReferenceDistribution
) -> ToneSummary:
    """Patterns plus scalar baselines for one image.

    The scalar mean ITA is taken over skin-only pixels (the patient-tone
    proxy); when the lesion mask covers every valid pixel it falls back to
    the whole-image mean and the row is flagged.
    """
    whole, skin, les = region_samples(ita, lesion)
    flags = set()
    if whole.n == 0:
        flags.add("no_valid_pixels")
    if skin.n == 0:
        flags.add("skin_sample_empty")
    if les.n == 0:
        flags.add("lesion_sample_empty")
    patterns = six_patterns(whole, skin, les, ref)
    for pat, dist in patterns.items():
        if dist.missing:
            flags.add(f"{pat.value}_missing")
    if skin.n > 0:
        mean = mean_ita(skin)
    elif whole.n > 0:
        mean = mean_ita(whole)
        flags.add("mean_ita_whole_fallback")
    else:
        mean = None
    fitz = fitzpatrick_of_ita(mean) if mean is not None else None
    return ToneSummary(mean_ita=mean, fitzpatrick=fitz, patterns=patterns, flags=flags)
