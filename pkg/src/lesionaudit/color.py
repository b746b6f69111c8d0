"""sRGB -> CIELab conversion and per-pixel individual typology angle (ITA).

ITA = arctan((L* - 50) / b*) * 180 / pi, in degrees. Higher values mean
lighter skin. Pixels whose b* is (near) zero are achromatic on the
blue-yellow axis and carry no pigment signal, so their ITA is marked
invalid instead of being forced to +/-90 degrees.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DataError

# sRGB (linear) -> XYZ for D65, 2 degree observer, and its inverse.
# http://www.brucelindbloom.com/Eqn_RGB_XYZ_Matrix.html
_RGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
_XYZ_TO_RGB = np.array(
    [
        [3.2404542, -1.5371385, -0.4985314],
        [-0.9692660, 1.8760108, 0.0415560],
        [0.0556434, -0.2040259, 1.0572252],
    ]
)
_WHITE_D65 = np.array([0.95047, 1.0, 1.08883])
_DELTA = 6.0 / 29.0

# |b*| at or below this is treated as achromatic: ITA undefined. All pure
# grays land around |b*| ~ 7e-6 with the matrices above; real skin pixels
# sit at |b*| ~ 5-30.
ACHROMATIC_B_TOL = 1e-4


@dataclass(frozen=True)
class LabPixel:
    """One pixel in CIELab. L in [0, 100] for in-gamut sRGB inputs."""

    L: float
    a: float
    b: float


@dataclass
class ItaMap:
    """Per-pixel ITA angles (degrees) with a validity mask.

    ``ita`` values are meaningful only where ``valid`` is True.
    """

    ita: np.ndarray
    valid: np.ndarray

    @property
    def height(self) -> int:
        return self.ita.shape[0]

    @property
    def width(self) -> int:
        return self.ita.shape[1]

    def values(self) -> np.ndarray:
        """All valid ITA values as a flat float array."""
        return self.ita[self.valid]


def srgb_to_lab_array(rgb) -> np.ndarray:
    """Vectorized sRGB -> CIELab. ``rgb`` is (..., 3) with channels in 0..255.

    Decodes the standard piecewise sRGB gamma (linear below 0.04045),
    converts through XYZ under D65, then applies the cube-root/linear-split
    Lab transfer.
    """
    c = np.asarray(rgb, dtype=np.float64) / 255.0
    lin = np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)
    xyz = lin @ _RGB_TO_XYZ.T / _WHITE_D65
    f = np.where(xyz > _DELTA**3, np.cbrt(xyz), xyz / (3 * _DELTA**2) + 4.0 / 29.0)
    out = np.empty_like(f)
    out[..., 0] = 116.0 * f[..., 1] - 16.0
    out[..., 1] = 500.0 * (f[..., 0] - f[..., 1])
    out[..., 2] = 200.0 * (f[..., 1] - f[..., 2])
    return out


def lab_to_srgb_array(lab) -> np.ndarray:
    """Inverse of :func:`srgb_to_lab_array`, returning uint8 in 0..255.

    Out-of-gamut colors are clipped channelwise before quantization.
    """
    lab = np.asarray(lab, dtype=np.float64)
    fy = (lab[..., 0] + 16.0) / 116.0
    fx = fy + lab[..., 1] / 500.0
    fz = fy - lab[..., 2] / 200.0
    f = np.stack([fx, fy, fz], axis=-1)
    xyz = np.where(f > _DELTA, f**3, 3 * _DELTA**2 * (f - 4.0 / 29.0)) * _WHITE_D65
    lin = xyz @ _XYZ_TO_RGB.T
    c = np.where(lin <= 0.0031308, lin * 12.92, 1.055 * np.clip(lin, 0, None) ** (1 / 2.4) - 0.055)
    return np.clip(np.round(c * 255.0), 0, 255).astype(np.uint8)


def srgb_to_lab(r: float, g: float, b: float) -> LabPixel:
    """Convert one sRGB pixel (channels in 0..255) to CIELab."""
    lab = srgb_to_lab_array([r, g, b])
    return LabPixel(float(lab[0]), float(lab[1]), float(lab[2]))


def ita_pixel(p: LabPixel) -> float | None:
    """ITA of one Lab pixel in degrees, or None where it is undefined.

    Undefined means |b*| <= ACHROMATIC_B_TOL (the arctan has no meaningful
    value on the achromatic axis). The arctan principal branch is used, so
    every defined result lies strictly inside (-90, 90).
    """
    if abs(p.b) <= ACHROMATIC_B_TOL:
        return None
    return float(np.degrees(np.arctan((p.L - 50.0) / p.b)))


def ita_map(img: np.ndarray, exclude: np.ndarray | None = None) -> ItaMap:
    """Per-pixel ITA for an RGB image, excluding masked (e.g. hair) pixels.

    ``img`` is (H, W, 3) uint8; ``exclude`` is an optional (H, W) boolean
    mask of pixels to invalidate. Achromatic pixels are invalid regardless.
    """
    img = np.asarray(img)
    if img.ndim != 3 or img.shape[2] != 3:
        raise DataError(f"expected (H, W, 3) RGB image, got shape {img.shape}")
    lab = srgb_to_lab_array(img)
    L, b = lab[..., 0], lab[..., 2]
    valid = np.abs(b) > ACHROMATIC_B_TOL
    ita = np.zeros(L.shape, dtype=np.float64)
    np.divide(L - 50.0, b, out=ita, where=valid)
    ita = np.degrees(np.arctan(ita))
    if exclude is not None:
        exclude = np.asarray(exclude, dtype=bool)
        if exclude.shape != L.shape:
            raise DataError(
                f"exclusion mask shape {exclude.shape} does not match image {L.shape}"
            )
        valid &= ~exclude
    ita[~valid] = np.nan
    return ItaMap(ita=ita, valid=valid)
