import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from interlock.assembly import (
    Assembly,
    Placement,
    assembly_from_dict,
    assembly_to_dict,
    claim_margin,
    inset_region,
    lozenge_blockset,
    orbit_assembly,
    select_frame,
    snub_square_assembly,
    square_blockset,
    tiling_to_assembly,
    verify_space_filling,
)
from interlock.blocks import canonical_block, canonical_block_pair, loft
from interlock.euclid import Isometry2
from interlock.lozenge import enumerate_lozenge_tilings, random_decoration
from interlock.truchet import (
    BI,
    OCTA_SYM,
    QUAD,
    Tile,
    Tiling,
    enumerate_tilings,
    random_tiling,
)
from interlock.wallpaper import make_group

SQUARE = np.array([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])


def worked_tiling():
    return Tiling([[Tile(BI, 3), Tile(QUAD, 1), Tile(BI, 2)],
                   [Tile(QUAD, 0), Tile(BI, 3), Tile(BI, 3)],
                   [Tile(BI, 1), Tile(BI, 2), Tile(QUAD, 0)]])


def fourfold_bi_tiling(n):
    """Quarter-turned bi tiles repeating with period two, the pattern
    produced by the fourfold orbit of a single block."""
    base = [[2, 1], [3, 0]]
    return Tiling([[Tile(BI, base[r % 2][c % 2]) for c in range(n)]
                   for r in range(n)])


def placement_keys(assembly, decimals=9):
    return sorted((p.label,) + tuple(np.round(p.matrix().ravel(), decimals))
                  for p in assembly.placements)


def cube_block(label="cube"):
    return loft(SQUARE, SQUARE, 1.0, label=label)


class TestBlocksets:
    def test_square_blockset_margins(self):
        bs = square_blockset()
        assert abs(claim_margin(bs[BI]) - 0.5) < 1e-9
        assert abs(claim_margin(bs[QUAD]) - 0.5) < 1e-9

    def test_square_blockset_volumes(self):
        bs = square_blockset()
        assert abs(bs[BI].volume() - 1.0) < 1e-9
        assert abs(bs[QUAD].volume() - 1.0) < 1e-9

    def test_lozenge_blockset_margin(self):
        bs = lozenge_blockset()
        for block in bs.values():
            assert abs(claim_margin(block) - np.sqrt(3) / 6) < 1e-9

    def test_cube_has_no_margin(self):
        assert claim_margin(cube_block()) == 0.0


class TestGridAssembly:
    def test_worked_example_passes(self):
        report = verify_space_filling(tiling_to_assembly(worked_tiling()))
        assert report["pass"]
        assert report["deficit"] < 1e-6
        assert report["max_overlap"] < 1e-6

    def test_single_quad_tile(self):
        a = tiling_to_assembly(Tiling([[Tile(QUAD, 0)]]))
        assert len(a.placements) == 1
        assert a.placements[0].label == "bisquare_unit"
        assert np.allclose(a.placements[0].transform.translation, (0, 0))
        assert a.frame == {0}
        assert verify_space_filling(a)["pass"]

    def test_invalid_tiling_rejected(self):
        bad = Tiling([[Tile(QUAD, 0), Tile(QUAD, 0)]])
        with pytest.raises(ValueError, match="invalid tiling"):
            tiling_to_assembly(bad)

    def test_octagonal_tiles_rejected(self):
        t = Tiling([[Tile(OCTA_SYM, 0)] * 2] * 2)
        with pytest.raises(ValueError, match="octagonal"):
            tiling_to_assembly(t)

    def test_region_is_cell_centre_rectangle(self):
        a = tiling_to_assembly(worked_tiling())
        xs = a.region[:, 0]
        ys = a.region[:, 1]
        assert abs(xs.min()) < 1e-9 and abs(xs.max() - 2) < 1e-9
        assert abs(ys.min()) < 1e-9 and abs(ys.max() - 2) < 1e-9

    def test_six_by_six_frame_is_perimeter(self):
        a = tiling_to_assembly(fourfold_bi_tiling(6))
        assert len(a.frame) == 20
        for i in a.frame:
            r, c = a.placements[i].index
            assert r in (0, 5) or c in (0, 5)

    def test_all_three_by_three_sampled(self):
        zs = [0.0, 0.25, 0.5, 0.75, 1.0]
        for t in enumerate_tilings(3, 3)[::100]:
            a = tiling_to_assembly(t)
            assert verify_space_filling(a, z_samples=zs)["pass"]

    @given(st.integers(0, 2 ** 32 - 1))
    @settings(max_examples=10, deadline=None)
    def test_random_five_by_five(self, seed):
        rng = np.random.default_rng(seed)
        a = tiling_to_assembly(random_tiling(5, 5, rng))
        assert verify_space_filling(a, seed=seed)["pass"]


class TestOrbitAssembly:
    def test_fourfold_orbit_matches_tiling(self):
        a = tiling_to_assembly(fourfold_bi_tiling(6))
        window = [(-0.5, -0.5), (5.5, -0.5), (5.5, 5.5), (-0.5, 5.5)]
        orbit = orbit_assembly(make_group("p4"),
                               canonical_block("versatile"), window)
        assert len(orbit.placements) == 36
        assert placement_keys(orbit) == placement_keys(a)

    def test_fourfold_orbit_verifies(self):
        window = [(-0.5, -0.5), (5.5, -0.5), (5.5, 5.5), (-0.5, 5.5)]
        orbit = orbit_assembly(make_group("p4"),
                               canonical_block("versatile"), window)
        assert len(orbit.frame) == 20
        assert verify_space_filling(orbit)["pass"]

    def test_threefold_homogeneous(self):
        window = [(-2, -2), (3, -2), (3, 2), (-2, 2)]
        a = orbit_assembly(make_group("p3"), canonical_block("rhom"),
                           window)
        assert {p.label for p in a.placements} == {"rhom"}
        assert verify_space_filling(a)["pass"]

    def test_glide_needs_partner(self):
        window = [(0, 0), (3, 0), (3, 3), (0, 3)]
        with pytest.raises(ValueError, match="partner"):
            orbit_assembly(make_group("pg"),
                           canonical_block("pg_pair"), window)

    @pytest.mark.parametrize("name,group", [("pg_pair", "pg"),
                                            ("p2gg_pair", "p2gg")])
    def test_glide_pair_verifies(self, name, group):
        window = [(-0.5, -0.5), (3.5, -0.5), (3.5, 3.5), (-0.5, 3.5)]
        pair = canonical_block_pair(name)
        a = orbit_assembly(make_group(group), pair, window)
        assert {p.label for p in a.placements} == {pair[0].label,
                                                  pair[1].label}
        assert verify_space_filling(a)["pass"]


class TestLozengeAssembly:
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_random_decorations_verify(self, seed):
        rng = np.random.default_rng(seed)
        tilings = enumerate_lozenge_tilings(2, 2, 2)
        t = tilings[int(rng.integers(len(tilings)))]
        d = random_decoration(t.polygons(), rng)
        a = tiling_to_assembly((t, d))
        report = verify_space_filling(a, seed=seed)
        assert report["pass"]

    def test_blocks_used_match_splits(self):
        rng = np.random.default_rng(5)
        t = enumerate_lozenge_tilings(2, 2, 2)[3]
        d = random_decoration(t.polygons(), rng)
        a = tiling_to_assembly((t, d))
        assert {p.label for p in a.placements} <= {
            "rhom", "rhom_obverse", "rhom_obverse_mirror"}

    def test_invalid_decoration_rejected(self):
        from itertools import product

        from interlock.lozenge import DECORATIONS, decoration_is_valid
        t = enumerate_lozenge_tilings(1, 1, 1)[0]
        polys = t.polygons()
        bad = next(list(d) for d in product(DECORATIONS, repeat=len(polys))
                   if not decoration_is_valid(polys, list(d)))
        with pytest.raises(ValueError, match="decoration"):
            tiling_to_assembly((t, bad))

    def test_length_mismatch_rejected(self):
        t = enumerate_lozenge_tilings(1, 1, 1)[0]
        with pytest.raises(ValueError):
            tiling_to_assembly((t, []))


class TestSnubAssembly:
    @pytest.mark.parametrize("variant", [1, 2])
    def test_variants_verify(self, variant):
        a = snub_square_assembly(2, variant)
        report = verify_space_filling(a)
        assert report["pass"]

    def test_variant_two_square_tops_match_fourfold_block(self):
        # Deep-amplitude square faces produce blocks congruent to the
        # four-way interlocking square-cell block: same footprint areas
        # and same volume.
        a = snub_square_assembly(1, 2)
        versatile = square_blockset()[BI]
        squares = [a.blocks[p.label] for p in a.placements
                   if len(a.blocks[p.label].bottom[0]) == 4
                   and abs(a.blocks[p.label].volume() - 1.0) < 1e-9]
        assert squares
        for block in squares:
            assert abs(block.volume() - versatile.volume()) < 1e-9

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            snub_square_assembly(1, 3)


class TestVerifyFailures:
    def test_overlapping_cubes(self):
        cube = cube_block()
        placements = [
            Placement("cube", Isometry2.identity(), 0),
            Placement("cube", Isometry2.translation_by((0.5, 0.0)), 1),
        ]
        region = inset_region([SQUARE, SQUARE + (0.5, 0.0)], 0.0)
        a = Assembly({"cube": cube}, placements, region, 1.0)
        report = verify_space_filling(a, z_samples=[0.0, 0.5, 1.0])
        assert not report["pass"]
        assert abs(report["max_overlap"] - 0.5) < 1e-9

    def test_missing_block_leaves_deficit(self):
        a = tiling_to_assembly(worked_tiling())
        centre = next(i for i, p in enumerate(a.placements)
                      if p.index == (1, 1))
        placements = [p for i, p in enumerate(a.placements) if i != centre]
        broken = Assembly(a.blocks, placements, a.region, a.height)
        report = verify_space_filling(broken, z_samples=[0.0, 0.5, 1.0])
        assert not report["pass"]
        assert abs(report["deficit"] - 1.0) < 1e-6


class TestFrame:
    def test_select_frame_idempotent(self):
        a = tiling_to_assembly(fourfold_bi_tiling(4))
        assert select_frame(a).frame == a.frame

    def test_degenerate_region_all_frame(self):
        a = tiling_to_assembly(Tiling([[Tile(BI, 0)]]))
        assert a.frame == {0}


class TestSerialization:
    def test_roundtrip(self):
        a = tiling_to_assembly(worked_tiling())
        data = assembly_to_dict(a)
        back = assembly_from_dict(data, a.blocks)
        assert back.frame == a.frame
        assert abs(back.height - a.height) < 1e-12
        assert np.allclose(back.region, a.region)
        for p, q in zip(a.placements, back.placements):
            assert p.is_close(q)

    def test_frame_flags_in_dict(self):
        a = tiling_to_assembly(fourfold_bi_tiling(4))
        data = assembly_to_dict(a)
        flagged = {i for i, entry in enumerate(data["placements"])
                   if entry["frame"]}
        assert flagged == a.frame


class TestPlacement:
    def test_matrix_lifts_isometry(self):
        iso = Isometry2.rotation(np.pi / 2, (1.0, 2.0))
        p = Placement("x", iso, 0)
        m = p.matrix()
        point = np.array([3.0, 4.0, 0.5, 1.0])
        moved = m @ point
        assert np.allclose(moved[:2], iso.apply([(3.0, 4.0)])[0])
        assert moved[2] == 0.5

    def test_improper_transform_rejected(self):
        with pytest.raises(ValueError):
            Placement("x", Isometry2.mirror_x(0.0), 0)
