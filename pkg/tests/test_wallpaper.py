import numpy as np
import pytest
from shapely.geometry import Polygon as ShapelyPolygon

from interlock.euclid import polygon_area
from interlock.wallpaper import (
    FEASIBLE_GROUPS,
    canonical_domain,
    make_group,
    orbit_in_window,
)


def cell_window(group, anchor=(0.0, 0.0), n=1):
    t1, t2 = group.translations
    a = np.asarray(anchor, dtype=float)
    return np.array([a, a + n * t1, a + n * (t1 + t2), a + n * t2])


def rotation_angles(group):
    angles = []
    for rep in group.representatives:
        if rep.proper:
            angles.append(np.arctan2(rep.linear[1, 0], rep.linear[0, 0]))
    return angles


class TestMakeGroup:
    def test_unknown_name_raises(self):
        with pytest.raises(ValueError):
            make_group("p31m")

    def test_p1_trivial_point_group(self):
        g = make_group("p1")
        assert len(g.representatives) == 1
        assert g.representatives[0].proper

    def test_p4_has_quarter_turn(self):
        angles = rotation_angles(make_group("p4"))
        assert any(abs(a - np.pi / 2) < 1e-12 for a in angles)

    def test_p3_has_third_turn_no_reflection(self):
        g = make_group("p3")
        assert all(rep.proper for rep in g.representatives)
        angles = rotation_angles(g)
        assert any(abs(a - 2 * np.pi / 3) < 1e-12 for a in angles)

    def test_p6_has_sixth_turn(self):
        angles = rotation_angles(make_group("p6"))
        assert any(abs(a - np.pi / 3) < 1e-12 for a in angles)

    def test_pg_has_glide(self):
        g = make_group("pg")
        assert any(not rep.proper for rep in g.representatives)

    def test_p2gg_structure(self):
        g = make_group("p2gg")
        impropers = [rep for rep in g.representatives if not rep.proper]
        assert len(impropers) == 2
        assert any(rep.proper and np.allclose(rep.linear, -np.eye(2))
                   for rep in g.representatives)

    def test_p2_has_half_turn(self):
        g = make_group("p2")
        assert any(np.allclose(rep.linear, -np.eye(2))
                   for rep in g.representatives)


class TestCanonicalDomain:
    @pytest.mark.parametrize("name", FEASIBLE_GROUPS)
    def test_pairing_covers_all_edges(self, name):
        dom = canonical_domain(make_group(name))
        covered = set()
        for pair in dom.pairs:
            covered.add(pair.rep)
            covered.add(pair.partner)
        assert covered == {0, 1, 2, 3}

    @pytest.mark.parametrize("name", FEASIBLE_GROUPS)
    def test_pairing_maps_edges_exactly(self, name):
        dom = canonical_domain(make_group(name))
        for pair in dom.pairs:
            a, b = dom.edge(pair.rep)
            c, d = dom.edge(pair.partner)
            image = pair.iso.apply(np.array([a, b]))
            direct = np.linalg.norm(image - np.array([c, d]))
            flipped = np.linalg.norm(image - np.array([d, c]))
            assert min(direct, flipped) < 1e-12

    def test_p2_self_pairs_reverse_edges(self):
        dom = canonical_domain(make_group("p2"))
        for pair in dom.pairs:
            assert pair.self_paired
            a, b = dom.edge(pair.rep)
            assert np.linalg.norm(pair.iso.apply(a) - b) < 1e-12
            assert np.linalg.norm(pair.iso.apply(b) - a) < 1e-12

    def test_p4_domain_matches_reference_square(self):
        dom = canonical_domain(make_group("p4"))
        assert set(map(tuple, np.round(dom.polygon, 12))) == {
            (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5), (-0.5, -0.5)}

    def test_p3_domain_is_unit_lozenge(self):
        dom = canonical_domain(make_group("p3"))
        assert abs(dom.area() - np.sqrt(3) / 2) < 1e-12
        lengths = [np.linalg.norm(dom.edge(i)[1] - dom.edge(i)[0])
                   for i in range(4)]
        assert np.allclose(lengths, 1.0, atol=1e-12)

    @pytest.mark.parametrize("name", FEASIBLE_GROUPS)
    def test_domain_area_divides_cell_area(self, name):
        group = make_group(name)
        dom = canonical_domain(group)
        ratio = group.cell_area() / dom.area()
        assert abs(ratio - round(ratio)) < 1e-9
        assert round(ratio) == len(group.representatives)


class TestOrbit:
    @pytest.mark.parametrize("name", FEASIBLE_GROUPS)
    def test_orbit_partitions_cell(self, name):
        group = make_group(name)
        dom = canonical_domain(group)
        window = cell_window(group, anchor=(0.13, -0.07))
        copies = orbit_in_window(group, dom, window)
        shapely_window = ShapelyPolygon(window)
        total = 0.0
        clipped = []
        for _, image in copies:
            inter = ShapelyPolygon(image).intersection(shapely_window)
            total += inter.area
            clipped.append(inter)
        assert abs(total - shapely_window.area) < 1e-6 * shapely_window.area
        for i in range(len(clipped)):
            for j in range(i + 1, len(clipped)):
                assert clipped[i].intersection(clipped[j]).area < 1e-9

    def test_p4_cell_contains_four_copies(self):
        group = make_group("p4")
        dom = canonical_domain(group)
        window = np.array([(-0.5, -0.5), (1.5, -0.5), (1.5, 1.5), (-0.5, 1.5)])
        copies = orbit_in_window(group, dom, window)
        assert len(copies) == 4

    def test_p1_two_by_two(self):
        group = make_group("p1")
        dom = canonical_domain(group)
        window = np.array([(0, 0), (2, 0), (2, 2), (0, 2)])
        copies = orbit_in_window(group, dom, window)
        assert len(copies) == 4

    def test_p3_area_quotient_three(self):
        group = make_group("p3")
        dom = canonical_domain(group)
        window = cell_window(group)
        copies = orbit_in_window(group, dom, window)
        shapely_window = ShapelyPolygon(window)
        total = sum(ShapelyPolygon(img).intersection(shapely_window).area
                    for _, img in copies)
        assert abs(total / dom.area() - 3.0) < 1e-6

    def test_orbit_accepts_bare_polygon(self):
        group = make_group("p1")
        tri = np.array([(0.1, 0.1), (0.4, 0.1), (0.2, 0.3)])
        window = np.array([(0, 0), (1, 0), (1, 1), (0, 1)])
        copies = orbit_in_window(group, tri, window)
        assert len(copies) == 1
        assert abs(polygon_area(copies[0][1]) - polygon_area(tri)) < 1e-12
