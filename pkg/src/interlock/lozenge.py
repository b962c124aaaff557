"""Lozenge tilings of hexagons and decorated-face complexes.

A lozenge tiling of an a x b x c hexagon is encoded as a plane
partition: heights over an a x b grid, nonincreasing along rows and
columns, bounded by c.  The stepped surface of the boxes projects to
the tiling; the three face directions give the three lozenge
orientations.  Lozenges can be decorated with a two-triangle split or
a four-triangle split, and decorations of any polygonal complex are
enumerated under the opposite-colour adjacency condition.
"""

from fractions import Fraction

import numpy as np

from .euclid import polygon_area
from .truchet import BLACK, WHITE

SQRT3 = np.sqrt(3.0)

# Projections of the three lattice directions.
AVEC = np.array([SQRT3 / 2.0, 0.5])
BVEC = np.array([-SQRT3 / 2.0, 0.5])
CVEC = np.array([0.0, -1.0])

BI_SPLIT = "bi"
QUAD_SPLIT = "quad"

# Lozenge corners are listed so that corners 0 and 2 carry the 120
# degree angles (the short diagonal).  The two-triangle split cuts
# along that diagonal; its black triangle covers the two edges that
# meet at one 60 degree corner.  The four-triangle split cuts along
# both diagonals and blackens one pair of opposite edge triangles.
_BLACK_EDGES = {
    (BI_SPLIT, 0): frozenset({0, 1}),
    (BI_SPLIT, 1): frozenset({2, 3}),
    (QUAD_SPLIT, 0): frozenset({0, 2}),
    (QUAD_SPLIT, 1): frozenset({1, 3}),
}

DECORATIONS = tuple(sorted(_BLACK_EDGES))


def lozenge_polygon(u, v, orient):
    """Corner coordinates of a lozenge on the triangular lattice.

    (u, v) locate the anchor corner at u*AVEC + v*BVEC; the orientation
    selects which pair of lattice directions spans the face.
    """
    p = u * AVEC + v * BVEC
    if orient == 0:
        return np.array([p, p + AVEC, p + AVEC + BVEC, p + BVEC])
    if orient == 1:
        return np.array([p, p + BVEC, p + BVEC + CVEC, p + CVEC])
    if orient == 2:
        return np.array([p, p + CVEC, p + CVEC + AVEC, p + AVEC])
    raise ValueError("orientation must be 0, 1 or 2")


class LozengeTiling:
    """A lozenge tiling of an a x b x c hexagon."""

    def __init__(self, a, b, c, lozenges):
        self.a = int(a)
        self.b = int(b)
        self.c = int(c)
        self.lozenges = [(int(u), int(v), int(o)) for u, v, o in lozenges]
        expected = self.a * self.b + self.b * self.c + self.c * self.a
        if len(self.lozenges) != expected:
            raise ValueError("lozenge count does not cover the hexagon")

    def polygons(self):
        return [lozenge_polygon(u, v, o) for u, v, o in self.lozenges]

    def __eq__(self, other):
        return (isinstance(other, LozengeTiling)
                and (self.a, self.b, self.c) == (other.a, other.b, other.c)
                and sorted(self.lozenges) == sorted(other.lozenges))

    def __repr__(self):
        return "LozengeTiling(%d, %d, %d)" % (self.a, self.b, self.c)


def hexagon_vertices(a, b, c):
    """Corners of the a x b x c hexagon in projected coordinates."""
    return np.array([a * AVEC, a * AVEC + b * BVEC, b * BVEC,
                     b * BVEC + c * CVEC, c * CVEC, c * CVEC + a * AVEC])


def _plane_partitions(a, b, c):
    """All height grids, nonincreasing in both directions, bounded by c."""
    grid = [[0] * b for _ in range(a)]
    out = []

    def fill(pos):
        if pos == a * b:
            out.append([row[:] for row in grid])
            return
        i, j = divmod(pos, b)
        hi = c
        if i > 0:
            hi = min(hi, grid[i - 1][j])
        if j > 0:
            hi = min(hi, grid[i][j - 1])
        for h in range(hi, -1, -1):
            grid[i][j] = h
            fill(pos + 1)

    fill(0)
    return out


def _partition_to_tiling(a, b, c, heights):
    lozenges = []
    for i in range(a):
        for j in range(b):
            k = heights[i][j]
            lozenges.append((i - k, j - k, 0))
    for j in range(b):
        for k in range(c):
            i = sum(1 for r in range(a) if heights[r][j] > k)
            lozenges.append((i - k, j - k, 1))
    for i in range(a):
        for k in range(c):
            j = sum(1 for r in range(b) if heights[i][r] > k)
            lozenges.append((i - k, j - k, 2))
    return LozengeTiling(a, b, c, lozenges)


def enumerate_lozenge_tilings(a, b, c, max_area=60):
    """All lozenge tilings of the a x b x c hexagon, deterministic order."""
    if min(a, b, c) < 1:
        raise ValueError("hexagon sides must be positive")
    if a * b + b * c + c * a > max_area:
        raise ValueError(
            "hexagon too large to enumerate; "
            "use count_lozenge_tilings for the count")
    return [_partition_to_tiling(a, b, c, h)
            for h in _plane_partitions(a, b, c)]


def random_lozenge_tiling(a, b, c, rng):
    """A tiling from a randomly grown plane partition."""
    grid = [[0] * b for _ in range(a)]
    for pos in range(a * b):
        i, j = divmod(pos, b)
        hi = c
        if i > 0:
            hi = min(hi, grid[i - 1][j])
        if j > 0:
            hi = min(hi, grid[i][j - 1])
        grid[i][j] = int(rng.integers(0, hi + 1))
    return _partition_to_tiling(a, b, c, grid)


def count_lozenge_tilings(a, b, c):
    """MacMahon's exact product count of lozenge tilings."""
    if min(a, b, c) < 1:
        raise ValueError("hexagon sides must be positive")
    total = Fraction(1)
    for i in range(1, a + 1):
        for j in range(1, b + 1):
            for k in range(1, c + 1):
                total *= Fraction(i + j + k - 1, i + j + k - 2)
    if total.denominator != 1:
        raise ArithmeticError("product did not reduce to an integer")
    return total.numerator


def constant_factor_count(a, b, c):
    """The same triple product with the factor frozen at the outer sizes.

    Returns an exact fraction; already non-integral at (2, 2, 2), which
    shows this variant cannot count tilings.
    """
    return Fraction(a + b + c - 1, a + b + c - 2) ** (a * b * c)


def _edge_key(p, q):
    return tuple(sorted((tuple(np.round(p, 9)), tuple(np.round(q, 9)))))


def _face_edges(polygon):
    n = len(polygon)
    return [(polygon[i], polygon[(i + 1) % n]) for i in range(n)]


def adjacency_from_polygons(polygons):
    """Symmetric neighbour links between faces sharing a full edge.

    Returns a list of (face_a, edge_a, face_b, edge_b) quadruples.
    """
    seen = {}
    links = []
    for f, poly in enumerate(polygons):
        for e, (p, q) in enumerate(_face_edges(poly)):
            key = _edge_key(p, q)
            if key in seen:
                g, d = seen.pop(key)
                links.append((g, d, f, e))
            else:
                seen[key] = (f, e)
    return links


def decoration_black_edges(split, orient):
    """Indices of the black edges of a decorated lozenge."""
    return _BLACK_EDGES[(split, int(orient))]


def decoration_is_valid(polygons, decorations):
    """Opposite-colour adjacency over all shared edges of a complex."""
    colour_sets = [decoration_black_edges(s, o) for s, o in decorations]
    for fa, ea, fb, eb in adjacency_from_polygons(polygons):
        a_black = ea in colour_sets[fa]
        b_black = eb in colour_sets[fb]
        if a_black == b_black:
            return False
    return True


def enumerate_decorations(tiling, max_faces=16):
    """All decorations of a tiling satisfying opposite-colour adjacency."""
    polygons = tiling.polygons() if isinstance(tiling, LozengeTiling) \
        else [np.asarray(p, dtype=float) for p in tiling]
    if len(polygons) > max_faces:
        raise ValueError(
            "decoration enumeration limited to %d faces" % max_faces)
    links = adjacency_from_polygons(polygons)
    constraints = [[] for _ in polygons]
    for fa, ea, fb, eb in links:
        constraints[max(fa, fb)].append((fa, ea, fb, eb))
    chosen = [None] * len(polygons)
    out = []

    def fill(f):
        if f == len(polygons):
            out.append(list(chosen))
            return
        for split, orient in DECORATIONS:
            black = decoration_black_edges(split, orient)
            ok = True
            for fa, ea, fb, eb in constraints[f]:
                if fa == f:
                    a_black = ea in black
                    b_black = eb in decoration_black_edges(*chosen[fb])
                else:
                    a_black = ea in decoration_black_edges(*chosen[fa])
                    b_black = eb in black
                if a_black == b_black:
                    ok = False
                    break
            if ok:
                chosen[f] = (split, orient)
                fill(f + 1)
        chosen[f] = None

    fill(0)
    return out


def random_decoration(polygons, rng):
    """A decoration found by randomized backtracking, or an error."""
    if hasattr(polygons, "polygons"):
        polygons = polygons.polygons()
    links = adjacency_from_polygons(polygons)
    constraints = [[] for _ in polygons]
    for fa, ea, fb, eb in links:
        constraints[max(fa, fb)].append((fa, ea, fb, eb))
    chosen = [None] * len(polygons)

    def fill(f):
        if f == len(polygons):
            return True
        order = [DECORATIONS[i] for i in rng.permutation(len(DECORATIONS))]
        for split, orient in order:
            black = decoration_black_edges(split, orient)
            ok = True
            for fa, ea, fb, eb in constraints[f]:
                if fa == f:
                    clash = (ea in black) == \
                        (eb in decoration_black_edges(*chosen[fb]))
                else:
                    clash = (ea in decoration_black_edges(*chosen[fa])) == \
                        (eb in black)
                if clash:
                    ok = False
                    break
            if ok:
                chosen[f] = (split, orient)
                if fill(f + 1):
                    return True
        chosen[f] = None
        return False

    if not fill(0):
        raise ValueError("complex admits no valid decoration")
    return chosen


SNUB_SPACING = (1.0 + SQRT3) / 2.0


class TilingComplex:
    """A list of polygonal faces with geometric neighbour links."""

    def __init__(self, faces, kinds):
        self.faces = [np.asarray(f, dtype=float) for f in faces]
        self.kinds = list(kinds)
        if len(self.faces) != len(self.kinds):
            raise ValueError("one kind per face required")
        self.links = adjacency_from_polygons(self.faces)

    def area(self):
        return sum(abs(polygon_area(f)) for f in self.faces)


def _rot(deg):
    t = np.radians(deg)
    return np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])


def _snub_square(i, j):
    """Unit square of the snub square tiling at lattice position (i, j)."""
    centre = np.array([i * SNUB_SPACING, j * SNUB_SPACING])
    r = _rot(30.0 if (i + j) % 2 == 0 else -30.0)
    half = 0.5
    corners = np.array([(half, half), (-half, half),
                        (-half, -half), (half, -half)])
    return centre + corners @ r.T


def _shared_vertex(sq_a, sq_b):
    for p in sq_a:
        for q in sq_b:
            if np.linalg.norm(p - q) < 1e-9:
                return p
    raise ValueError("squares share no vertex")


def _snub_lozenge_vertical(i, j):
    """Lozenge over the gap between squares (i,j)-(i+1,j), i+j even.

    Its lower 60 degree corner is the vertex shared by the lower square
    pair, the upper one is shared by the pair one row up.
    """
    lo = _shared_vertex(_snub_square(i, j), _snub_square(i + 1, j))
    hi = _shared_vertex(_snub_square(i, j + 1), _snub_square(i + 1, j + 1))
    mid = hi - lo
    left = lo + 0.5 * mid + 0.5 * np.array([-mid[1], mid[0]]) / SQRT3
    right = lo + 0.5 * mid - 0.5 * np.array([-mid[1], mid[0]]) / SQRT3
    # corners 0 and 2 carry the 120 degree angles
    return np.array([left, lo, right, hi])


def _snub_lozenge_horizontal(i, j):
    """Lozenge between columns i and i+1 at row gap j, i+j odd."""
    left = _shared_vertex(_snub_square(i, j), _snub_square(i, j + 1))
    right = _shared_vertex(_snub_square(i + 1, j), _snub_square(i + 1, j + 1))
    mid = right - left
    lo = left + 0.5 * mid - 0.5 * np.array([-mid[1], mid[0]]) / SQRT3
    hi = left + 0.5 * mid + 0.5 * np.array([-mid[1], mid[0]]) / SQRT3
    return np.array([lo, left, hi, right])


def snub_square_complex(n):
    """Squares and lozenges of n x n translation cells of the snub
    square tiling.

    Each cell contributes two squares and two lozenges (four triangles
    paired across their shared edges).
    """
    if n < 1:
        raise ValueError("cell count must be positive")
    faces = []
    kinds = []
    for u in range(n):
        for v in range(n):
            i, j = u + v, v - u
            faces.append(_snub_square(i, j))
            kinds.append("square")
            faces.append(_snub_square(i + 1, j))
            kinds.append("square")
            faces.append(_snub_lozenge_vertical(i, j))
            kinds.append("lozenge")
            faces.append(_snub_lozenge_horizontal(i + 1, j))
            kinds.append("lozenge")
    return TilingComplex(faces, kinds)


def tiling_to_dict(tiling):
    return {"a": tiling.a, "b": tiling.b, "c": tiling.c,
            "lozenges": [{"x": u, "y": v, "orient": o}
                         for u, v, o in tiling.lozenges]}


def tiling_from_dict(data):
    lozenges = [(d["x"], d["y"], d["orient"]) for d in data["lozenges"]]
    return LozengeTiling(data["a"], data["b"], data["c"], lozenges)


def decoration_to_dict(tiling, decorations):
    data = tiling_to_dict(tiling)
    for entry, (split, orient) in zip(data["lozenges"], decorations):
        entry["split"] = split
        entry["decoration_orient"] = int(orient)
    return data
