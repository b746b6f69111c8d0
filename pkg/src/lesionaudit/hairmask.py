"""Hair/artifact mask generation for dermoscopic images.

Four-stage morphological pipeline: grayscale -> opening (small-noise
removal) -> black-hat (dark thin-structure emphasis) -> CLAHE (local
contrast boost) -> binary threshold. The resulting mask (True = hair) is
used to exclude pixels from pigment statistics, never to inpaint them.
"""

from dataclasses import dataclass

import cv2
import numpy as np


@dataclass
class HairParams:
    """Tunable parameters of the hair-masking pipeline.

    Kernel sizes and the threshold were tuned on visual samples; the
    defaults below are pinned for reproducibility.
    """

    open_kernel: int = 3
    blackhat_kernel: int = 8
    clahe_clip: float = 2.0
    clahe_tiles: tuple[int, int] = (8, 8)
    threshold: int = 10

    def __post_init__(self):
        if self.open_kernel < 1 or self.blackhat_kernel < 1:
            raise ValueError("kernel sizes must be >= 1")
        if self.clahe_clip <= 0:
            raise ValueError("clahe_clip must be > 0")
        if min(self.clahe_tiles) < 1:
            raise ValueError("clahe_tiles must be >= 1 in both directions")
        if not 0 <= self.threshold <= 255:
            raise ValueError("threshold must be within [0, 255]")


def to_gray(img: np.ndarray) -> np.ndarray:
    """RGB (H, W, 3) uint8 -> single-channel uint8 via standard luma weights."""
    return cv2.cvtColor(img, cv2.COLOR_RGB2GRAY)


def morph_open(gray: np.ndarray, k: int) -> np.ndarray:
    """Morphological opening (erosion then dilation) with a k x k rectangle."""
    return cv2.morphologyEx(gray, cv2.MORPH_OPEN, np.ones((k, k), np.uint8))


def blackhat(gray: np.ndarray, k: int) -> np.ndarray:
    """Black-hat transform: closing minus input, clamped to >= 0.

    Highlights dark structures thinner than the k x k element (hair,
    shadows) as positive values on a zero background.
    """
    return cv2.morphologyEx(gray, cv2.MORPH_BLACKHAT, np.ones((k, k), np.uint8))


def clahe(gray: np.ndarray, p: HairParams) -> np.ndarray:
    """Contrast-limited adaptive histogram equalization, output in [0, 255]."""
    eq = cv2.createCLAHE(clipLimit=p.clahe_clip, tileGridSize=p.clahe_tiles)
    return eq.apply(gray)


def hair_mask(img: np.ndarray, p: HairParams | None = None) -> np.ndarray:
    """Boolean hair mask (True = hair) for an RGB image.

    A pixel is hair iff its contrast-enhanced black-hat response exceeds
    ``p.threshold`` strictly, so threshold 255 always yields an empty mask.
    """
    if p is None:
        p = HairParams()
    gray = to_gray(img)
    opened = morph_open(gray, p.open_kernel)
    emphasized = blackhat(opened, p.blackhat_kernel)
    enhanced = clahe(emphasized, p)
    return enhanced > p.threshold


def write_mask_png(mask: np.ndarray, path) -> None:
    """Save a boolean mask as an 8-bit PNG, hair in white on black."""
    cv2.imwrite(str(path), mask.astype(np.uint8) * 255)
