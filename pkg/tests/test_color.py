import numpy as np
import pytest

from lesionaudit import DataError, ItaMap, LabPixel, ita_map, ita_pixel, srgb_to_lab
from lesionaudit.color import lab_to_srgb_array, srgb_to_lab_array

from tests.oracles import LAB_REFERENCE


def test_white_maps_to_reference_white():
    p = srgb_to_lab(255, 255, 255)
    assert p.L == pytest.approx(100.0, abs=1e-4)
    assert abs(p.a) < 0.01
    assert abs(p.b) < 0.01


def test_black_maps_to_origin():
    p = srgb_to_lab(0, 0, 0)
    assert (p.L, p.a, p.b) == (0.0, 0.0, 0.0)


def test_pinned_colors_match_colorimetric_reference():
    for (r, g, b), expected in LAB_REFERENCE.items():
        p = srgb_to_lab(r, g, b)
        for got, want in zip((p.L, p.a, p.b), expected):
            assert got == pytest.approx(want, abs=0.05), (r, g, b)


def test_lightness_in_range_for_all_inputs():
    rng = np.random.default_rng(3)
    rgb = rng.integers(0, 256, size=(2000, 3))
    lab = srgb_to_lab_array(rgb)
    assert lab[:, 0].min() >= 0.0
    assert lab[:, 0].max() <= 100.0 + 1e-4


def test_lab_round_trip_within_quantization():
    rng = np.random.default_rng(4)
    rgb = rng.integers(0, 256, size=(500, 3)).astype(np.uint8)
    back = lab_to_srgb_array(srgb_to_lab_array(rgb))
    assert np.abs(back.astype(int) - rgb.astype(int)).max() <= 1


def test_ita_analytic_anchors_exact():
    assert ita_pixel(LabPixel(50, 0, 10)) == 0.0
    assert ita_pixel(LabPixel(60, 0, 10)) == 45.0
    assert ita_pixel(LabPixel(40, 0, 10)) == -45.0


def test_ita_undefined_on_achromatic_axis():
    assert ita_pixel(LabPixel(60, 0, 0)) is None
    assert ita_pixel(LabPixel(60, 0, 1e-6)) is None


def test_ita_odd_in_lightness_about_50():
    rng = np.random.default_rng(5)
    for _ in range(200):
        d = rng.uniform(0, 49)
        b = rng.uniform(0.1, 60)
        up = ita_pixel(LabPixel(50 + d, 0, b))
        down = ita_pixel(LabPixel(50 - d, 0, b))
        assert up == pytest.approx(-down, abs=1e-12)


def test_ita_monotone_in_lightness():
    b = 12.0
    values = [ita_pixel(LabPixel(L, 0, b)) for L in np.linspace(0, 100, 41)]
    assert all(v1 < v2 for v1, v2 in zip(values, values[1:]))


def test_ita_range_is_open_interval():
    rng = np.random.default_rng(6)
    rgb = rng.integers(0, 256, size=(64, 64, 3)).astype(np.uint8)
    m = ita_map(rgb)
    vals = m.values()
    assert vals.size > 0
    assert vals.min() > -90.0
    assert vals.max() < 90.0


def test_ita_map_constant_image_matches_pixel():
    img = np.full((20, 30, 3), (150, 100, 80), dtype=np.uint8)
    m = ita_map(img)
    assert m.valid.all()
    p = srgb_to_lab(150, 100, 80)
    expected = ita_pixel(p)
    assert np.allclose(m.ita, expected, atol=1e-12)


def test_ita_map_white_image_is_invalid():
    img = np.full((8, 8, 3), 255, dtype=np.uint8)
    m = ita_map(img)
    assert not m.valid.any()


def test_ita_map_full_exclusion_leaves_no_valid_pixels():
    img = np.full((10, 10, 3), (150, 100, 80), dtype=np.uint8)
    m = ita_map(img, exclude=np.ones((10, 10), dtype=bool))
    assert m.values().size == 0


def test_ita_map_rejects_mismatched_mask():
    img = np.full((10, 10, 3), (150, 100, 80), dtype=np.uint8)
    with pytest.raises(DataError):
        ita_map(img, exclude=np.ones((5, 10), dtype=bool))


def test_ita_map_shape_accessors():
    img = np.full((7, 11, 3), (150, 100, 80), dtype=np.uint8)
    m = ita_map(img)
    assert isinstance(m, ItaMap)
    assert (m.height, m.width) == (7, 11)
