import numpy as np
import pytest

from interlock.escher import (
    DeformedDomain,
    INWARD,
    OUTWARD,
    apply_escher,
    canonical_assignment,
    classify_polarity,
    midpoint_peak,
    obverse,
    place_curve,
    quadratic,
    random_assignment,
    validate_orbit_disjoint,
    zigzag,
)
from interlock.wallpaper import canonical_domain, make_group

S2 = np.sqrt(2)
S3 = np.sqrt(3)

CANONICAL_NAMES = [
    "versatile", "bisquare", "rhom", "rhom_obverse",
    "p6_versatile", "p6_bilozenge", "p1p2_zigzag", "p1p2_zigzag_obverse",
    "p2_zigzag", "pg_pair", "p2gg_pair", "abeille", "abeille_obverse",
]


def ring_matches(boundary, expected, tol=1e-12):
    """Cyclic comparison of a boundary ring against expected coordinates."""
    expected = np.asarray(expected, dtype=float)
    if len(boundary) != len(expected):
        return False
    for shift in range(len(boundary)):
        rolled = np.roll(boundary, shift, axis=0)
        if np.abs(rolled - expected).max() < tol:
            return True
    return False


class TestClassifyPolarity:
    def test_versatile_e1_inward(self):
        dom = canonical_domain(make_group("p4"))
        path = [(-0.5, -0.5), (0, 0), (0.5, -0.5)]
        assert classify_polarity(path, 3, dom) == INWARD

    def test_outward_mirror(self):
        dom = canonical_domain(make_group("p4"))
        path = [(-0.5, -0.5), (0, -1), (0.5, -0.5)]
        assert classify_polarity(path, 3, dom) == OUTWARD

    def test_straight_edge_raises(self):
        dom = canonical_domain(make_group("p4"))
        with pytest.raises(ValueError, match="undeformed"):
            classify_polarity([(-0.5, -0.5), (0.5, -0.5)], 3, dom)

    @pytest.mark.parametrize("name", ["p4", "p3", "p6"])
    def test_rotation_pairing_flips_polarity(self, name):
        group = make_group(name)
        dom = canonical_domain(group)
        for pair in dom.pairs:
            p, q = dom.edge(pair.rep)
            world = place_curve(midpoint_peak(0.2), p, q, INWARD)
            assert classify_polarity(world, pair.rep, dom) == INWARD
            image = pair.iso.apply(world)
            assert classify_polarity(image, pair.partner, dom) == OUTWARD


class TestObverse:
    def test_involution(self):
        _, _, a = canonical_assignment("versatile")
        assert obverse(obverse(a, 1), 1) == a

    def test_versatile_to_bisquare_polarities(self):
        _, _, versatile = canonical_assignment("versatile")
        flipped = obverse(versatile, 0)
        _, _, bisquare = canonical_assignment("bisquare")
        assert [p for _, p in flipped] == [p for _, p in bisquare]


class TestApplyEscher:
    @pytest.mark.parametrize("name", CANONICAL_NAMES)
    def test_canonical_assignments_area_preserved(self, name):
        group, dom, assignment = canonical_assignment(name)
        deformed = apply_escher(dom, group, assignment)
        assert abs(deformed.area() - dom.area()) < 1e-9

    def test_versatile_is_rectangle(self):
        group, dom, assignment = canonical_assignment("versatile")
        deformed = apply_escher(dom, group, assignment)
        expected = [(0, 0), (0.5, 0.5), (0, 1),
                    (-0.5, 0.5), (-1, 0), (-0.5, -0.5)]
        assert ring_matches(deformed.boundary, expected)

    def test_bisquare_is_pinched_octagon(self):
        group, dom, assignment = canonical_assignment("bisquare")
        deformed = apply_escher(dom, group, assignment)
        h = S2 / 2
        expected = [(h, -h), (0, 0), (h, h), (0, S2),
                    (-h, h), (0, 0), (-h, -h), (0, -S2)]
        assert ring_matches(deformed.boundary, expected)

    def test_rhom_is_hexagon(self):
        group, dom, assignment = canonical_assignment("rhom")
        deformed = apply_escher(dom, group, assignment)
        expected = [(0, 0), (0, -S3 / 3), (0.5, -S3 / 2),
                    (1, -S3 / 3), (1, 0), (0.5, S3 / 6)]
        assert ring_matches(deformed.boundary, expected)

    def test_p2_matches_p1_zigzag_boundary(self):
        g1, d1, a1 = canonical_assignment("p1p2_zigzag")
        g2, d2, a2 = canonical_assignment("p2_zigzag")
        b1 = apply_escher(d1, g1, a1).boundary
        b2 = apply_escher(d2, g2, a2).boundary
        assert ring_matches(b1, b2)

    def test_quadratic_bisquare_points_valid(self):
        group, dom, _ = canonical_assignment("bisquare")
        assignment = [(quadratic(0.5), OUTWARD), (quadratic(0.5), INWARD)]
        deformed = apply_escher(dom, group, assignment)
        assert abs(deformed.area() - 2.0) < 1e-9

    @pytest.mark.parametrize("pair_index", [0, 1])
    def test_quadratic_bisquare_obverse_rejected(self, pair_index):
        group, dom, _ = canonical_assignment("bisquare")
        assignment = [(quadratic(0.5), OUTWARD), (quadratic(0.5), INWARD)]
        with pytest.raises(ValueError, match="paths intersect"):
            apply_escher(dom, group, obverse(assignment, pair_index))

    def test_p2_requires_symmetric_curve(self):
        group = make_group("p2")
        dom = canonical_domain(group)
        assignment = [(midpoint_peak(0.2), INWARD)] * 4
        with pytest.raises(ValueError, match="symmetric"):
            apply_escher(dom, group, assignment)

    def test_overtall_zigzag_rejected(self):
        group = make_group("p1")
        dom = canonical_domain(group)
        assignment = [(zigzag(2.0), INWARD), (zigzag(0.25), OUTWARD)]
        with pytest.raises(ValueError):
            apply_escher(dom, group, assignment)


class TestOrbitValidation:
    def test_versatile_orbit_disjoint(self):
        group, dom, assignment = canonical_assignment("versatile")
        deformed = apply_escher(dom, group, assignment)
        assert validate_orbit_disjoint(deformed, group)

    def test_crossing_orbit_detected(self):
        # Build the over-tall zig-zag domain by hand so the crossing
        # reaches the orbit validator instead of the earlier checks.
        group = make_group("p1")
        dom = canonical_domain(group)
        assignment = [(zigzag(2.0), INWARD), (zigzag(0.25), OUTWARD)]
        edge_curves = [None] * 4
        for pair, (curve, polarity) in zip(dom.pairs, assignment):
            p, q = dom.edge(pair.rep)
            world = place_curve(curve, p, q, polarity)
            edge_curves[pair.rep] = world
            image = pair.iso.apply(world)
            c, _ = dom.edge(pair.partner)
            if np.linalg.norm(image[0] - c) > np.linalg.norm(image[-1] - c):
                image = image[::-1]
            edge_curves[pair.partner] = image
        deformed = DeformedDomain(dom, assignment, edge_curves)
        assert not validate_orbit_disjoint(deformed, group)

    def test_undeformed_domain_window_variant(self):
        group, dom, assignment = canonical_assignment("versatile")
        deformed = apply_escher(dom, group, assignment)
        window = np.array([(-2, -2), (2, -2), (2, 2), (-2, 2)])
        assert validate_orbit_disjoint(deformed, group, window)


class TestRandomAssignments:
    @pytest.mark.parametrize("name", ["p1", "p2", "pg", "p2gg", "p3", "p4",
                                      "p6"])
    def test_random_assignment_valid(self, name):
        rng = np.random.default_rng(7)
        for _ in range(3):
            group, dom, _, deformed = random_assignment(name, rng)
            assert abs(deformed.area() - dom.area()) < 1e-9
            assert validate_orbit_disjoint(deformed, group)
