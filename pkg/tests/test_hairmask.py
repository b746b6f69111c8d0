import numpy as np
import pytest

from lesionaudit import HairParams, blackhat, clahe, hair_mask, morph_open
from lesionaudit.hairmask import to_gray

from tests.oracles import blackhat_brute, clahe_single_tile, open_brute


def stroke_fixture(size=128, n_strokes=6, seed=0):
    """Bright field with thin dark strokes; returns (rgb, stroke mask)."""
    import cv2

    rng = np.random.default_rng(seed)
    gray = np.full((size, size), 185, np.uint8)
    gray = (gray.astype(np.int16) + rng.integers(-2, 3, gray.shape)).astype(np.uint8)
    strokes = np.zeros((size, size), np.uint8)
    for _ in range(n_strokes):
        p1 = tuple(int(v) for v in rng.integers(5, size - 5, 2))
        p2 = tuple(int(v) for v in rng.integers(5, size - 5, 2))
        cv2.line(strokes, p1, p2, 255, thickness=2)
    gray[strokes > 0] = 55
    return np.stack([gray] * 3, axis=-1), strokes > 0


class TestMorphOpen:
    def test_identity_on_constant(self):
        img = np.full((16, 16), 90, np.uint8)
        assert np.array_equal(morph_open(img, 3), img)

    def test_removes_isolated_bright_pixel(self):
        img = np.full((16, 16), 40, np.uint8)
        img[8, 8] = 250
        assert morph_open(img, 3).max() == 40

    def test_anti_extensive(self):
        rng = np.random.default_rng(1)
        img = rng.integers(0, 256, (32, 32)).astype(np.uint8)
        assert (morph_open(img, 3) <= img).all()

    def test_matches_brute_force(self):
        rng = np.random.default_rng(2)
        for k in (3, 4):
            img = rng.integers(0, 256, (16, 16)).astype(np.uint8)
            assert np.array_equal(morph_open(img, k), open_brute(img, k))


class TestBlackhat:
    def test_zero_on_constant(self):
        img = np.full((20, 20), 120, np.uint8)
        assert blackhat(img, 8).max() == 0

    def test_highlights_dark_line(self):
        img = np.full((24, 24), 200, np.uint8)
        img[12, :] = 30
        bh = blackhat(img, 8)
        assert (bh[12, 4:20] > 0).all()

    def test_matches_brute_force_closing_oracle(self):
        rng = np.random.default_rng(3)
        for k in (3, 8):
            for _ in range(10):
                img = rng.integers(0, 256, (16, 16)).astype(np.uint8)
                assert np.array_equal(blackhat(img, k), blackhat_brute(img, k))

    def test_response_confined_to_stroke_neighborhood(self):
        import cv2

        img = np.full((16, 16), 220, np.uint8)
        img[4:12, 7] = 40  # vertical dark stroke
        bh = blackhat_brute(img, 8)
        stroke = np.zeros_like(img, bool)
        stroke[4:12, 7] = True
        reach = cv2.dilate(stroke.astype(np.uint8), np.ones((17, 17), np.uint8)) > 0
        assert (bh[~reach] == 0).all()
        assert np.array_equal(blackhat(img, 8), bh)


class TestClahe:
    def test_constant_maps_to_constant(self):
        p = HairParams()
        for v in (0, 90, 255):
            out = clahe(np.full((64, 64), v, np.uint8), p)
            assert np.unique(out).size == 1

    def test_output_stays_in_byte_range(self):
        rng = np.random.default_rng(4)
        p = HairParams()
        img = rng.integers(0, 256, (64, 64)).astype(np.uint8)
        out = clahe(img, p)
        assert out.dtype == np.uint8

    def test_two_level_contrast_non_decreasing_vs_reference(self):
        img = np.where(np.arange(64).reshape(8, 8) % 2 == 0, 100, 140).astype(np.uint8)
        p = HairParams(clahe_tiles=(1, 1))
        out = clahe(img, p)
        ref = clahe_single_tile(img, p.clahe_clip)
        assert np.array_equal(out, ref)
        assert np.ptp(out) >= np.ptp(img)

    def test_single_tile_matches_reference_on_random_images(self):
        rng = np.random.default_rng(5)
        p = HairParams(clahe_tiles=(1, 1))
        for _ in range(20):
            img = rng.integers(0, 256, (8, 8)).astype(np.uint8)
            assert np.array_equal(clahe(img, p), clahe_single_tile(img, p.clahe_clip))


class TestHairMask:
    def test_clean_patch_yields_near_empty_mask(self):
        rng = np.random.default_rng(6)
        gray = (180 + rng.integers(-2, 3, (128, 128))).astype(np.uint8)
        img = np.stack([gray] * 3, axis=-1)
        mask = hair_mask(img)
        assert mask.mean() < 0.01

    def test_strokes_are_covered(self):
        img, strokes = stroke_fixture()
        mask = hair_mask(img)
        assert mask[strokes].mean() >= 0.90

    def test_threshold_255_gives_empty_mask(self):
        img, _ = stroke_fixture()
        assert not hair_mask(img, HairParams(threshold=255)).any()

    def test_monotone_in_threshold(self):
        img, _ = stroke_fixture()
        sizes = [hair_mask(img, HairParams(threshold=t)).sum() for t in (5, 10, 40, 120, 255)]
        assert all(a >= b for a, b in zip(sizes, sizes[1:]))

    def test_deterministic_and_shape_preserving(self):
        img, _ = stroke_fixture(seed=7)
        m1 = hair_mask(img)
        m2 = hair_mask(img)
        assert np.array_equal(m1, m2)
        assert m1.shape == img.shape[:2]

    def test_gray_conversion_weights(self):
        img = np.zeros((1, 1, 3), np.uint8)
        img[0, 0] = (100, 200, 50)
        expected = round(0.299 * 100 + 0.587 * 200 + 0.114 * 50)
        assert abs(int(to_gray(img)[0, 0]) - expected) <= 1


def test_param_validation():
    with pytest.raises(ValueError):
        HairParams(open_kernel=0)
    with pytest.raises(ValueError):
        HairParams(clahe_clip=0.0)
    with pytest.raises(ValueError):
        HairParams(threshold=300)
