"""The seven interlocking-feasible wallpaper groups and their domains.

Each group carries a translation lattice and point-group coset
representatives; each canonical fundamental domain is a 4-gon whose edges
are paired by group elements (or self-paired by a half-turn about the
edge midpoint in the p2 case).
"""

import numpy as np

from .euclid import GEOM_TOL, Isometry2, compose, polygon_area

FEASIBLE_GROUPS = ("p1", "p2", "pg", "p2gg", "p3", "p4", "p6")

_S3 = np.sqrt(3.0)


class WallpaperGroup:
    """Wallpaper group as a lattice plus coset representatives."""

    def __init__(self, name, translations, representatives):
        self.name = name
        self.translations = np.asarray(translations, dtype=float)
        self.representatives = list(representatives)
        if abs(np.linalg.det(self.translations)) < GEOM_TOL:
            raise ValueError("translations must be linearly independent")

    def cell_area(self):
        return abs(float(np.linalg.det(self.translations)))

    def element(self, i, j, rep_index):
        """Group element: translate by i*t1 + j*t2 after the representative."""
        shift = i * self.translations[0] + j * self.translations[1]
        return compose(Isometry2.translation_by(shift),
                       self.representatives[rep_index])


class EdgePair:
    """A paired edge of a fundamental domain.

    ``iso`` is the group element carrying the representative edge onto the
    partner edge (as point sets).  A self-paired edge has rep == partner
    and ``iso`` equal to the half-turn about the edge midpoint.
    """

    def __init__(self, rep, partner, iso):
        self.rep = rep
        self.partner = partner
        self.iso = iso

    @property
    def self_paired(self):
        return self.rep == self.partner


class FundamentalDomain:
    """A 4-gon fundamental domain with its edge pairing."""

    def __init__(self, group_name, polygon, pairs):
        self.group_name = group_name
        self.polygon = np.asarray(polygon, dtype=float)
        self.pairs = list(pairs)
        if len(self.polygon) != 4:
            raise ValueError("canonical domains have four boundary edges")
        if polygon_area(self.polygon) <= 0:
            raise ValueError("polygon must be counter-clockwise")

    def edge(self, i):
        return self.polygon[i], self.polygon[(i + 1) % 4]

    def area(self):
        return polygon_area(self.polygon)

    def pair_of_edge(self, i):
        for pair in self.pairs:
            if pair.rep == i or pair.partner == i:
                return pair
        raise ValueError("edge %d is not paired" % i)


def make_group(name):
    """Instantiate one of the seven interlocking-feasible groups."""
    ident = Isometry2.identity()
    if name == "p1":
        return WallpaperGroup("p1", [(1, 0), (0, 1)], [ident])
    if name == "p2":
        # Unit-square domain with all four edges self-paired by half-turns;
        # the lattice is the even sublattice spanned by (1,1) and (1,-1).
        return WallpaperGroup(
            "p2", [(1, 1), (1, -1)],
            [ident, Isometry2.rotation(np.pi, (0.5, 0.0))])
    if name == "pg":
        return WallpaperGroup(
            "pg", [(1, 0), (0, 2)],
            [ident, Isometry2.glide(0.5, 1.0)])
    if name == "p2gg":
        g1 = Isometry2.glide(0.5, 1.0)
        g2 = Isometry2(np.array([[1.0, 0.0], [0.0, -1.0]]),
                       np.array([1.0, 1.0]))
        return WallpaperGroup(
            "p2gg", [(2, 0), (0, 2)], [ident, g1, g2, compose(g2, g1)])
    if name == "p4":
        center = (-0.5, -0.5)
        reps = [Isometry2.rotation(k * np.pi / 2, center) for k in range(4)]
        return WallpaperGroup("p4", [(2, 0), (0, 2)], reps)
    if name == "p3":
        reps = [Isometry2.rotation(k * 2 * np.pi / 3) for k in range(3)]
        return WallpaperGroup(
            "p3", [(1.5, _S3 / 2), (1.5, -_S3 / 2)], reps)
    if name == "p6":
        reps = [Isometry2.rotation(k * np.pi / 3) for k in range(6)]
        return WallpaperGroup("p6", [(_S3, 3), (-_S3, 3)], reps)
    raise ValueError("unknown or infeasible wallpaper group: %r" % (name,))


def canonical_domain(group):
    """Canonical 4-edge fundamental domain with its edge pairing."""
    name = group.name if isinstance(group, WallpaperGroup) else group
    if name in ("p1", "pg", "p2gg", "p2"):
        square = [(0, 0), (1, 0), (1, 1), (0, 1)]
        if name == "p1":
            pairs = [EdgePair(0, 2, Isometry2.translation_by((0, 1))),
                     EdgePair(3, 1, Isometry2.translation_by((1, 0)))]
        elif name == "pg":
            pairs = [EdgePair(0, 2, Isometry2.glide(0.5, 1.0)),
                     EdgePair(3, 1, Isometry2.translation_by((1, 0)))]
        elif name == "p2gg":
            g2 = Isometry2(np.array([[1.0, 0.0], [0.0, -1.0]]),
                           np.array([1.0, 1.0]))
            pairs = [EdgePair(0, 2, Isometry2.glide(0.5, 1.0)),
                     EdgePair(3, 1, g2)]
        else:  # p2: every edge self-paired by the half-turn at its midpoint
            mids = [(0.5, 0.0), (1.0, 0.5), (0.5, 1.0), (0.0, 0.5)]
            pairs = [EdgePair(i, i, Isometry2.rotation(np.pi, mids[i]))
                     for i in range(4)]
        return FundamentalDomain(name, square, pairs)
    if name == "p4":
        v1, v4 = (0.5, -0.5), (0.5, 0.5)
        v3, v2 = (-0.5, 0.5), (-0.5, -0.5)
        polygon = [v1, v4, v3, v2]
        pairs = [EdgePair(3, 2, Isometry2.rotation(np.pi / 2, v2)),
                 EdgePair(0, 1, Isometry2.rotation(-np.pi / 2, v4))]
        return FundamentalDomain(name, polygon, pairs)
    if name == "p3":
        a, d = (0.0, 0.0), (0.5, -_S3 / 2)
        c, b = (1.0, 0.0), (0.5, _S3 / 2)
        polygon = [a, d, c, b]
        pairs = [EdgePair(0, 3, Isometry2.rotation(2 * np.pi / 3, a)),
                 EdgePair(1, 2, Isometry2.rotation(-2 * np.pi / 3, c))]
        return FundamentalDomain(name, polygon, pairs)
    if name == "p6":
        a, b = (0.0, 0.0), (_S3 / 2, 1.5)
        c, d = (0.0, 2.0), (-_S3 / 2, 1.5)
        polygon = [a, b, c, d]
        pairs = [EdgePair(0, 3, Isometry2.rotation(np.pi / 3, a)),
                 EdgePair(2, 1, Isometry2.rotation(2 * np.pi / 3, c))]
        return FundamentalDomain(name, polygon, pairs)
    raise ValueError("unknown or infeasible wallpaper group: %r" % (name,))


def _overlap_area(poly_a, poly_b):
    from shapely.geometry import Polygon as ShapelyPolygon
    pa = ShapelyPolygon(poly_a)
    pb = ShapelyPolygon(poly_b)
    if not pa.intersects(pb):
        return 0.0
    return pa.intersection(pb).area


def orbit_in_window(group, domain, window):
    """All orbit copies of the domain polygon overlapping the window.

    Returns (isometry, image polygon) pairs ordered lexicographically by
    translation indices, then representative index.  Overlap means
    positive intersection area; boundary contact does not count.
    """
    polygon = domain.polygon if isinstance(domain, FundamentalDomain) \
        else np.asarray(domain, dtype=float)
    window = np.asarray(window, dtype=float)
    lattice = group.translations
    inv = np.linalg.inv(lattice.T)
    results = []
    ranges = []
    for rep in group.representatives:
        image = rep.apply(polygon)
        # Translation coefficients that could bring the image near the window.
        deltas = (window[:, None, :] - image[None, :, :]).reshape(-1, 2)
        coeffs = deltas @ inv.T
        lo = np.floor(coeffs.min(axis=0)).astype(int) - 1
        hi = np.ceil(coeffs.max(axis=0)).astype(int) + 1
        ranges.append((lo, hi))
    lo = np.min([r[0] for r in ranges], axis=0)
    hi = np.max([r[1] for r in ranges], axis=0)
    for i in range(lo[0], hi[0] + 1):
        for j in range(lo[1], hi[1] + 1):
            for rep_index in range(len(group.representatives)):
                g = group.element(i, j, rep_index)
                image = g.apply(polygon)
                if _overlap_area(image, window) > 1e-12:
                    results.append((g, image))
    return results
