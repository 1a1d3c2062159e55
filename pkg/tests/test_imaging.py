import numpy as np
import pytest

from oxkit.annotations import BoxAnnotation, PointLabel
from oxkit.errors import InputError
from oxkit.imaging import (
    AugmentConfig,
    augment,
    estimate_scale,
    load_png,
    read_tensor,
    resize_bilinear,
    save_png,
    scale_points,
    write_tensor,
)
from oxkit.imaging.augment import (
    center_crop,
    flip_raster_labels,
    pad_to_min,
    rot90_raster_labels,
)

from conftest import random_raster


def _box(long_side: float) -> BoxAnnotation:
    return BoxAnnotation("img", 0, 0, long_side, long_side / 2)


class TestEstimateScale:
    def test_single_element_median(self):
        assert estimate_scale([_box(200)], 100) == pytest.approx(0.5)

    def test_even_count_mean_of_central(self):
        assert estimate_scale([_box(80), _box(120)], 100) == pytest.approx(1.0)

    def test_odd_count_middle(self):
        assert estimate_scale([_box(50), _box(100), _box(400)], 70) == pytest.approx(0.7)

    def test_empty_is_error(self):
        with pytest.raises(InputError, match="no animals"):
            estimate_scale([], 100)


class TestResize:
    def test_identity_scale_byte_identical(self, rng):
        img = random_raster(rng, 37, 49)
        out = resize_bilinear(img, 1.0)
        assert np.array_equal(out, img)

    def test_upscale_convex_hull(self):
        img = np.zeros((2, 2, 3), dtype=np.uint8)
        img[1, 1] = 100
        out = resize_bilinear(img, 2.0)
        assert out.shape == (4, 4, 3)
        assert out.max() <= 100 and out.min() >= 0

    def test_downscale_dims_and_label_map(self):
        img = np.zeros((100, 100, 3), dtype=np.uint8)
        out = resize_bilinear(img, 0.5)
        assert out.shape == (50, 50, 3)
        (p,) = scale_points([PointLabel(40, 80)], 0.5)
        assert (p.x, p.y) == (20.0, 40.0)

    def test_zero_output_dimension_is_error(self):
        img = np.zeros((2, 2, 3), dtype=np.uint8)
        with pytest.raises(InputError):
            resize_bilinear(img, 0.1)

    def test_bright_pixel_tracks_label(self, rng):
        img = np.zeros((64, 64, 3), dtype=np.uint8)
        img[20, 31] = 255
        for scale in (0.6, 0.9, 1.3, 2.0):
            out = resize_bilinear(img, scale)
            peak = np.unravel_index(out[:, :, 0].argmax(), out[:, :, 0].shape)
            assert abs(peak[1] - 31 * scale) <= 1.0
            assert abs(peak[0] - 20 * scale) <= 1.0


class TestGeometryHelpers:
    def test_horizontal_flip_label_map(self):
        img = np.zeros((512, 512, 3), dtype=np.uint8)
        pts = np.array([[10.0, 20.0]])
        _, flipped = flip_raster_labels(img, pts, horizontal=True, vertical=False)
        assert flipped.tolist() == [[501.0, 20.0]]
        _, back = flip_raster_labels(img, flipped, horizontal=True, vertical=False)
        assert back.tolist() == [[10.0, 20.0]]

    def test_flip_twice_identity(self, rng):
        img = random_raster(rng, 40, 60)
        pts = rng.uniform(0, 39, (5, 2))
        out, moved = flip_raster_labels(*flip_raster_labels(img, pts, True, True), True, True)
        assert np.array_equal(out, img)
        assert np.allclose(moved, pts)

    def test_rot90_four_times_identity(self, rng):
        img = random_raster(rng, 40, 60)
        pts = rng.uniform(0, 39, (5, 2))
        out, moved = img, pts
        for _ in range(4):
            out, moved = rot90_raster_labels(out, moved, 1)
        assert np.array_equal(out, img)
        assert np.allclose(moved, pts)

    def test_rot90_tracks_bright_pixel(self):
        img = np.zeros((30, 50, 3), dtype=np.uint8)
        img[4, 41] = 255
        pts = np.array([[41.0, 4.0]])
        for k in range(4):
            out, moved = rot90_raster_labels(img, pts, k)
            peak = np.unravel_index(out[:, :, 0].argmax(), out[:, :, 0].shape)
            assert abs(peak[1] - moved[0, 0]) < 1e-9
            assert abs(peak[0] - moved[0, 1]) < 1e-9

    def test_pad_and_center_crop(self):
        img = np.full((100, 200, 3), 7, dtype=np.uint8)
        padded = pad_to_min(img, 512, 512)
        assert padded.shape == (512, 512, 3)
        assert np.array_equal(padded[:100, :200], img)
        assert padded[100:, :].max() == 0

        big = np.zeros((600, 700, 3), dtype=np.uint8)
        pts = np.array([[350.0, 300.0], [10.0, 10.0]])
        cropped, moved, keep = center_crop(big, pts, 512)
        assert cropped.shape == (512, 512, 3)
        assert moved[0].tolist() == [350.0 - 94, 300.0 - 44]
        assert keep.tolist() == [True, False]


class TestAugment:
    def test_all_probabilities_zero_is_pad_crop_normalize(self, rng):
        img = random_raster(rng, 300, 400)
        labels = [PointLabel(10, 20), PointLabel(399, 299)]
        cfg = AugmentConfig(probability=0.0, seed=7)
        result = augment(img, labels, cfg)
        assert result.raster_u8.shape == (512, 512, 3)
        assert np.array_equal(result.raster_u8[:300, :400], img)
        assert [(p.x, p.y) for p in result.labels] == [(10.0, 20.0), (399.0, 299.0)]
        expected = (img[0, 0].astype(np.float32) / 255.0 - np.array([0.485, 0.456, 0.406], dtype=np.float32)) / np.array(
            [0.229, 0.224, 0.225], dtype=np.float32
        )
        assert np.allclose(result.tensor[0, 0], expected, atol=1e-6)

    def test_fixed_seed_bit_identical(self, rng):
        img = random_raster(rng, 512, 512)
        labels = [PointLabel(100, 200), PointLabel(400, 50)]
        cfg = AugmentConfig(seed=123)
        a = augment(img, labels, cfg, patch_id="p1")
        b = augment(img, labels, cfg, patch_id="p1")
        assert a.raster_u8.tobytes() == b.raster_u8.tobytes()
        assert a.tensor.tobytes() == b.tensor.tobytes()
        assert [(p.x, p.y) for p in a.labels] == [(p.x, p.y) for p in b.labels]

    def test_patch_id_changes_stream(self, rng):
        img = random_raster(rng, 512, 512)
        cfg = AugmentConfig(seed=123)
        a = augment(img, [], cfg, patch_id="p1")
        b = augment(img, [], cfg, patch_id="p2")
        assert a.raster_u8.tobytes() != b.raster_u8.tobytes()

    def test_labels_stay_inside_crop(self, rng):
        for trial in range(20):
            h = int(rng.integers(64, 800))
            w = int(rng.integers(64, 800))
            img = random_raster(rng, h, w)
            labels = [
                PointLabel(float(rng.uniform(0, w - 1)), float(rng.uniform(0, h - 1)))
                for _ in range(10)
            ]
            result = augment(img, labels, AugmentConfig(seed=trial), patch_id=f"t{trial}")
            for p in result.labels:
                assert 0 <= p.x < 512 and 0 <= p.y < 512

    def test_brightness_contrast_saturates(self, rng):
        img = random_raster(rng, 64, 64)
        cfg = AugmentConfig(
            probability=1.0, seed=5,
            enable_hsv=False, enable_flip=False, enable_rotate90=False,
            enable_scale=False, enable_blur=False,
        )
        result = augment(img, [], cfg)
        assert result.raster_u8.min() >= 0 and result.raster_u8.max() <= 255

    def test_geometric_stage_tracks_bright_pixel(self):
        # single bright pixel, geometry-only pipeline: label must track it
        img = np.zeros((512, 512, 3), dtype=np.uint8)
        img[200, 300] = 255
        labels = [PointLabel(300.0, 200.0)]
        cfg = AugmentConfig(
            probability=1.0, seed=11,
            enable_brightness_contrast=False, enable_hsv=False, enable_blur=False,
        )
        for pid in ("a", "b", "c", "d", "e"):
            result = augment(img, labels, cfg, patch_id=pid)
            if not result.labels:
                continue
            peak = np.unravel_index(result.raster_u8[:, :, 0].argmax(), (512, 512))
            p = result.labels[0]
            assert abs(peak[1] - p.x) <= 1.0
            assert abs(peak[0] - p.y) <= 1.0


class TestRasterIO:
    def test_png_round_trip(self, tmp_path, rng):
        img = random_raster(rng, 33, 44)
        save_png(tmp_path / "x.png", img)
        assert np.array_equal(load_png(tmp_path / "x.png"), img)

    def test_tensor_round_trip(self, tmp_path, rng):
        t = rng.standard_normal((16, 24, 3)).astype(np.float32)
        write_tensor(tmp_path / "x.oxt", t)
        back = read_tensor(tmp_path / "x.oxt")
        assert np.array_equal(back, t)

    def test_tensor_header_layout(self, tmp_path):
        t = np.zeros((2, 3, 3), dtype=np.float32)
        write_tensor(tmp_path / "x.oxt", t)
        raw = (tmp_path / "x.oxt").read_bytes()
        assert raw[:4] == b"OXTN"
        assert int.from_bytes(raw[4:8], "little") == 1
        assert int.from_bytes(raw[8:12], "little") == 2
        assert int.from_bytes(raw[12:16], "little") == 3
        assert int.from_bytes(raw[16:20], "little") == 3
        assert raw[20:24] == b"HWC\x00"
        assert len(raw) == 24 + 2 * 3 * 3 * 4

    def test_tensor_bad_magic_rejected(self, tmp_path):
        (tmp_path / "bad.oxt").write_bytes(b"NOPE" + b"\x00" * 40)
        with pytest.raises(InputError, match="magic"):
            read_tensor(tmp_path / "bad.oxt")
