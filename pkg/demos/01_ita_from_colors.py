"""Per-pixel ITA: from sRGB triples to CIELab to pigment angles.

ITA (individual typology angle) rises with lightness: deeply pigmented
skin sits below 10 degrees, very light skin above 55. Achromatic pixels
(grays, specular highlights) have no defined angle and are excluded.
"""

import numpy as np

from lesionaudit import LabPixel, fitzpatrick_of_ita, ita_map, ita_pixel, srgb_to_lab

swatches = {
    "very light": (240, 200, 170),
    "light": (220, 180, 150),
    "intermediate": (200, 150, 120),
    "tan": (180, 120, 90),
    "brown": (150, 100, 80),
    "dark": (100, 70, 55),
    "deeply pigmented": (70, 45, 35),
}

print(f"{'swatch':>18}  {'L*':>7} {'a*':>7} {'b*':>7}  {'ITA':>7}  type")
for name, rgb in swatches.items():
    lab = srgb_to_lab(*rgb)
    ita = ita_pixel(lab)
    fitz = fitzpatrick_of_ita(ita)
    print(f"{name:>18}  {lab.L:7.2f} {lab.a:7.2f} {lab.b:7.2f}  {ita:7.2f}  {fitz.name}")

print()
print("achromatic pixels have no ITA:")
for rgb in [(255, 255, 255), (128, 128, 128)]:
    lab = srgb_to_lab(*rgb)
    print(f"  rgb{rgb} -> b* = {lab.b:+.6f} -> ita_pixel = {ita_pixel(lab)}")

# the analytic anchors: the angle is 0 at L*=50 and +/-45 when |L*-50| = b*
print()
for L, b in [(50, 10), (60, 10), (40, 10)]:
    print(f"  ita(L*={L}, b*={b}) = {ita_pixel(LabPixel(L, 0, b))}")

# a whole-image map: constant mid-tone patch, every pixel valid and equal
img = np.full((32, 32, 3), swatches["intermediate"], dtype=np.uint8)
m = ita_map(img)
print()
print(f"constant 32x32 patch: {m.valid.sum()} valid pixels, "
      f"ITA {m.values().min():.3f}..{m.values().max():.3f}")
