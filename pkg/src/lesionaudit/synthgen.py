"""Synthetic skin/lesion fixtures with controlled ITA contrast, plus a
deliberately contrast-sensitive reference segmenter.

Pixel colors are built by inverting the ITA formula at fixed a* = b* = 15:
L* = 50 + b* * tan(ita), which keeps the tested ITA range in the sRGB
gamut and makes the target angle exactly recoverable up to 8-bit
quantization (about a degree at the extremes).
"""

import math
from dataclasses import dataclass, field

import cv2
import numpy as np

from .color import lab_to_srgb_array

_B_STAR = 15.0
_A_STAR = 15.0
# noise draws are clipped here; tan() blows up approaching +/-90
_ITA_CLIP = 80.0
_HAIR_LAB = (14.0, 4.0, 4.0)  # very dark, slightly warm stroke color


@dataclass
class SynthSpec:
    """Parameters for one batch of synthetic images."""

    count: int
    size: int = 128
    skin_ita_mean: float = 40.0
    lesion_ita_mean: float = 10.0
    ita_noise_sd: float = 0.0
    lesion_radius_frac: float = 0.25
    hair_strokes: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if self.size < 8:
            raise ValueError("size must be >= 8 px")
        for mean in (self.skin_ita_mean, self.lesion_ita_mean):
            if not -90.0 < mean < 90.0:
                raise ValueError("ITA means must lie in (-90, 90)")
        if not 0.0 < self.lesion_radius_frac <= 0.5:
            raise ValueError("lesion_radius_frac must be in (0, 0.5]")
        if self.ita_noise_sd < 0 or self.hair_strokes < 0:
            raise ValueError("noise sd and stroke count must be >= 0")


@dataclass
class SynthImage:
    """One generated fixture: RGB image, GT lesion mask, and ground truth
    about how it was built (intended per-region ITA and their gap)."""

    image: np.ndarray
    gt_mask: np.ndarray
    meta: dict = field(default_factory=dict)


def ita_to_rgb(ita_deg) -> np.ndarray:
    """Map ITA angles (degrees) to sRGB pixels along the fixed a*/b* plane."""
    ita = np.clip(np.asarray(ita_deg, dtype=np.float64), -_ITA_CLIP, _ITA_CLIP)
    L = 50.0 + _B_STAR * np.tan(np.radians(ita))
    lab = np.stack([L, np.full_like(L, _A_STAR), np.full_like(L, _B_STAR)], axis=-1)
    return lab_to_srgb_array(lab)


def generate(spec: SynthSpec) -> list[SynthImage]:
    """Build ``spec.count`` fixtures, each with a circular lesion at a
    random center, per-pixel Gaussian ITA noise, and optional dark hair
    strokes. Deterministic per seed; image i uses substream (seed, i).
    """
    out = []
    for i in range(spec.count):
        rng = np.random.default_rng([spec.seed, i])
        size = spec.size
        radius = spec.lesion_radius_frac * size
        margin = int(math.ceil(radius)) + 1
        cx = rng.integers(margin, size - margin) if size - 2 * margin > 0 else size // 2
        cy = rng.integers(margin, size - margin) if size - 2 * margin > 0 else size // 2
        yy, xx = np.ogrid[:size, :size]
        gt = (xx - cx) ** 2 + (yy - cy) ** 2 <= radius**2

        ita = np.where(gt, spec.lesion_ita_mean, spec.skin_ita_mean)
        if spec.ita_noise_sd > 0:
            ita = ita + rng.normal(0.0, spec.ita_noise_sd, size=ita.shape)
        img = ita_to_rgb(ita)

        hair = np.zeros((size, size), dtype=np.uint8)
        for _ in range(spec.hair_strokes):
            p1 = tuple(int(v) for v in rng.integers(0, size, 2))
            p2 = tuple(int(v) for v in rng.integers(0, size, 2))
            cv2.line(hair, p1, p2, 255, thickness=int(rng.integers(1, 3)))
        if spec.hair_strokes:
            stroke_rgb = lab_to_srgb_array(np.array(_HAIR_LAB))
            img = np.where(hair[..., None] > 0, stroke_rgb, img).astype(np.uint8)

        meta = {
            "index": i,
            "skin_ita": spec.skin_ita_mean,
            "lesion_ita": spec.lesion_ita_mean,
            "contrast": spec.lesion_ita_mean - spec.skin_ita_mean,
            "hair_strokes": spec.hair_strokes,
        }
        out.append(SynthImage(image=img, gt_mask=gt, meta=meta))
    return out


def reference_segmenter(img: np.ndarray, noise_sd: float = 0.0, seed: int = 0) -> np.ndarray:
    """Otsu threshold on lightness plus seeded pixel noise.

    A deliberately naive model: its masks collapse toward chance as the
    lesion-skin contrast approaches zero. The smaller-area side of the
    threshold is taken as the lesion, so it works for lesions both darker
    and lighter than the surrounding skin.
    """
    gray = cv2.cvtColor(img, cv2.COLOR_RGB2GRAY).astype(np.float64)
    if noise_sd > 0:
        gray = gray + np.random.default_rng(seed).normal(0.0, noise_sd, gray.shape)
    gray8 = np.clip(np.round(gray), 0, 255).astype(np.uint8)
    _, th = cv2.threshold(gray8, 0, 255, cv2.THRESH_BINARY + cv2.THRESH_OTSU)
    dark = th == 0
    return dark if dark.sum() <= dark.size / 2 else ~dark
