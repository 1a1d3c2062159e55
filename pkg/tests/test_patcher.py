from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oxkit.annotations import BoxAnnotation
from oxkit.errors import InputError
from oxkit.patcher import (
    Patch,
    TileConfig,
    box_tile_overlap_fraction,
    extract_patches,
    filter_nonempty,
    plan_tiles,
    points_from_csv,
    points_to_csv,
    retained_points_for_tile,
)

CFG = TileConfig()


class TestPlanTiles:
    def test_1024_gives_nine_tiles(self):
        tiles = plan_tiles(1024, 1024, CFG)
        assert len(tiles) == 9
        assert sorted({x for x, _ in tiles}) == [0, 256, 512]
        assert sorted({y for _, y in tiles}) == [0, 256, 512]

    def test_exact_fit_single_tile(self):
        assert plan_tiles(512, 512, CFG) == [(0, 0)]

    def test_clamped_extra_origin(self):
        tiles = plan_tiles(800, 512, CFG)
        assert tiles == [(0, 0), (256, 0), (288, 0)]

    def test_row_major_and_unique(self):
        tiles = plan_tiles(1300, 900, CFG)
        assert len(set(tiles)) == len(tiles)
        assert tiles == sorted(tiles, key=lambda t: (t[1], t[0]))

    def test_too_small_is_error(self):
        with pytest.raises(InputError):
            plan_tiles(511, 512, CFG)

    @given(w=st.integers(512, 3000), h=st.integers(512, 3000))
    @settings(max_examples=200)
    def test_coverage_property(self, w, h):
        tiles = plan_tiles(w, h, CFG)
        xs = sorted({x for x, _ in tiles})
        ys = sorted({y for _, y in tiles})
        # every pixel column/row falls inside some tile interval
        assert xs[0] == 0 and xs[-1] + CFG.patch_w >= w
        for a, b in zip(xs, xs[1:]):
            assert b <= a + CFG.patch_w  # no horizontal gap
        assert ys[0] == 0 and ys[-1] + CFG.patch_h >= h
        for a, b in zip(ys, ys[1:]):
            assert b <= a + CFG.patch_h


class TestRetention:
    def test_half_overlap_boundary_retained(self):
        box = BoxAnnotation("img", 448, 0, 128, 64)
        assert box_tile_overlap_fraction(box, 0, 0, CFG) == pytest.approx(0.5)
        points = retained_points_for_tile([box], 0, 0, CFG)
        assert len(points) == 1
        # full-box centroid (512, 32) clamps into the patch
        assert points[0].x == pytest.approx(511.999)
        assert points[0].y == pytest.approx(32.0)

    def test_contained_box_retained_with_centroid(self):
        box = BoxAnnotation("img", 100, 100, 50, 40)
        assert box_tile_overlap_fraction(box, 0, 0, CFG) == 1.0
        (p,) = retained_points_for_tile([box], 0, 0, CFG)
        assert (p.x, p.y) == (125.0, 120.0)

    def test_small_overlap_dropped(self):
        box = BoxAnnotation("img", 500, 500, 100, 100)
        frac = box_tile_overlap_fraction(box, 0, 0, CFG)
        assert frac == pytest.approx(144 / 10000)
        assert retained_points_for_tile([box], 0, 0, CFG) == []

    @given(
        bx=st.fractions(0, 1500), by=st.fractions(0, 1500),
        bw=st.fractions(Fraction(1, 100), 600), bh=st.fractions(Fraction(1, 100), 600),
        ox=st.integers(0, 1024), oy=st.integers(0, 1024),
    )
    @settings(max_examples=300)
    def test_retention_matches_exact_rational_oracle(self, bx, by, bw, bh, ox, oy):
        box = BoxAnnotation("img", float(bx), float(by), float(bw), float(bh))
        # exact rational arithmetic on the same float values the code sees
        fx = [Fraction(v) for v in (box.x_min, box.y_min, box.box_w, box.box_h)]
        iw = max(Fraction(0), min(fx[0] + fx[2], Fraction(ox + 512)) - max(fx[0], Fraction(ox)))
        ih = max(Fraction(0), min(fx[1] + fx[3], Fraction(oy + 512)) - max(fx[1], Fraction(oy)))
        exact = (iw * ih) / (fx[2] * fx[3])
        retained = len(retained_points_for_tile([box], ox, oy, CFG)) == 1
        if exact > Fraction(1, 2) + Fraction(1, 10**9):
            assert retained
        elif exact < Fraction(1, 2) - Fraction(1, 10**9):
            assert not retained
        if retained:
            # geometry lemma: full-box centroid inside or on the tile boundary
            cx = fx[0] + fx[2] / 2
            cy = fx[1] + fx[3] / 2
            assert Fraction(ox) <= cx <= Fraction(ox + 512)
            assert Fraction(oy) <= cy <= Fraction(oy + 512)


class TestExtractAndFilter:
    def test_filter_preserves_order(self):
        p = lambda n: Patch("i", 0, 0, labels=[None] * n)  # noqa: E731
        kept = filter_nonempty([p(2), p(0), p(1)])
        assert [len(q.labels) for q in kept] == [2, 1]
        assert filter_nonempty([p(0), p(0)]) == []

    def test_centered_animal_keeps_expected_tiles(self):
        raster = np.zeros((1024, 1024, 3), dtype=np.uint8)
        box = BoxAnnotation("img", 462, 462, 100, 100)  # centered 100x100
        patches = extract_patches("img", raster, [box])
        assert len(patches) == 9
        kept = filter_nonempty(patches)
        kept_origins = {(p.origin_x, p.origin_y) for p in kept}
        expected = {
            (ox, oy)
            for ox, oy in plan_tiles(1024, 1024, CFG)
            if box_tile_overlap_fraction(box, ox, oy, CFG) >= 0.5
        }
        assert kept_origins == expected
        assert (256, 256) in kept_origins  # center tile fully contains it

    def test_small_image_zero_padded(self):
        raster = np.full((300, 400, 3), 9, dtype=np.uint8)
        box = BoxAnnotation("img", 10, 10, 60, 40)
        patches = extract_patches("img", raster, [box])
        assert len(patches) == 1
        assert patches[0].raster.shape == (512, 512, 3)
        assert patches[0].raster[299, 399, 0] == 9
        assert patches[0].raster[300:, :].max() == 0

    def test_patch_id_format(self):
        raster = np.zeros((512, 512, 3), dtype=np.uint8)
        patches = extract_patches("imgX", raster, [])
        assert patches[0].id == "imgX_0_0"

    def test_duplicate_labels_across_overlapping_tiles_kept(self):
        raster = np.zeros((512, 768, 3), dtype=np.uint8)
        # animal in the 256..512 x-band, overlapped by both x-origins 0 and 256
        box = BoxAnnotation("img", 300, 100, 80, 60)
        kept = filter_nonempty(extract_patches("img", raster, [box]))
        assert len(kept) == 2
        assert {p.origin_x for p in kept} == {0, 256}


class TestPointsCsv:
    def test_round_trip(self):
        raster = np.zeros((512, 512, 3), dtype=np.uint8)
        box = BoxAnnotation("img", 100, 100, 50, 40)
        patches = filter_nonempty(extract_patches("img", raster, [box]))
        text = points_to_csv(patches)
        grouped = points_from_csv(text)
        assert list(grouped) == ["img_0_0"]
        assert (grouped["img_0_0"][0].x, grouped["img_0_0"][0].y) == (125.0, 120.0)

    def test_bad_header_rejected(self):
        with pytest.raises(InputError):
            points_from_csv("a,b,c\n")
