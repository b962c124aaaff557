"""Planar isometries, polygons, polylines and triangle meshes.

Two-level tolerance scheme: geometric equality is decided at ``GEOM_TOL``
(1e-9 absolute), while coordinates entering orientation predicates are
snapped to a 1e-12 grid first, so modelling error and floating noise stay
separated.
"""

import numpy as np

GEOM_TOL = 1e-9
SNAP_DECIMALS = 12
ANGLE_TOL = 1e-7


def snap(points):
    """Snap coordinates to the 1e-12 grid used by the predicates."""
    return np.round(np.asarray(points, dtype=float), SNAP_DECIMALS)


class Isometry2:
    """A planar isometry x -> linear @ x + translation.

    ``proper`` is True for rotations/translations and False for
    reflections and glide reflections.
    """

    def __init__(self, linear, translation):
        self.linear = np.asarray(linear, dtype=float)
        self.translation = np.asarray(translation, dtype=float)
        if self.linear.shape != (2, 2) or self.translation.shape != (2,):
            raise ValueError("isometry needs a 2x2 matrix and a 2-vector")
        if not np.allclose(self.linear.T @ self.linear, np.eye(2), atol=1e-12):
            raise ValueError("linear part is not orthogonal")
        self.proper = float(np.linalg.det(self.linear)) > 0.0

    @classmethod
    def identity(cls):
        return cls(np.eye(2), np.zeros(2))

    @classmethod
    def rotation(cls, angle, center=(0.0, 0.0)):
        c, s = np.cos(angle), np.sin(angle)
        lin = np.array([[c, -s], [s, c]])
        center = np.asarray(center, dtype=float)
        return cls(lin, center - lin @ center)

    @classmethod
    def translation_by(cls, v):
        return cls(np.eye(2), np.asarray(v, dtype=float))

    @classmethod
    def mirror_x(cls, axis_x=0.0):
        """Reflection across the vertical line x = axis_x."""
        lin = np.array([[-1.0, 0.0], [0.0, 1.0]])
        return cls(lin, np.array([2.0 * axis_x, 0.0]))

    @classmethod
    def glide(cls, mirror_line_x, shift_y):
        """Glide reflection: mirror across x = mirror_line_x, shift along y."""
        g = cls.mirror_x(mirror_line_x)
        return cls(g.linear, g.translation + np.array([0.0, shift_y]))

    def apply(self, points):
        pts = np.asarray(points, dtype=float)
        return pts @ self.linear.T + self.translation

    def inverse(self):
        inv = self.linear.T
        return Isometry2(inv, -(inv @ self.translation))

    def is_close(self, other, tol=GEOM_TOL):
        return (np.abs(self.linear - other.linear).max() < tol
                and np.abs(self.translation - other.translation).max() < tol)

    def __repr__(self):
        return "Isometry2(%r, %r)" % (self.linear.tolist(),
                                      self.translation.tolist())


def compose(a, b):
    """The isometry applying b first, then a."""
    return Isometry2(a.linear @ b.linear,
                     a.linear @ b.translation + a.translation)


def polygon_area(vertices):
    """Positive shoelace area of a simple counter-clockwise polygon."""
    v = np.asarray(vertices, dtype=float)
    x, y = v[:, 0], v[:, 1]
    area = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
    if abs(area) < 1e-12:
        raise ValueError("degenerate polygon")
    return float(area)


def _segment_point_distance(points, seg_a, seg_b):
    """Distances from each point to each segment, broadcast (k, m)."""
    p = np.asarray(points, dtype=float)[:, None, :]
    a = np.asarray(seg_a, dtype=float)[None, :, :]
    b = np.asarray(seg_b, dtype=float)[None, :, :]
    d = b - a
    denom = np.maximum(np.sum(d * d, axis=2), 1e-300)
    t = np.clip(np.sum((p - a) * d, axis=2) / denom, 0.0, 1.0)
    closest = a + t[:, :, None] * d
    return np.linalg.norm(p - closest, axis=2)


def _proper_segment_crossings(a, b):
    """True if any segment of a crosses a segment of b transversally."""
    p1, p2 = a[:-1], a[1:]
    q1, q2 = b[:-1], b[1:]
    ra = p2 - p1
    rb = q2 - q1
    la = np.linalg.norm(ra, axis=1)
    lb = np.linalg.norm(rb, axis=1)
    dq1 = q1[None, :, :] - p1[:, None, :]
    dq2 = q2[None, :, :] - p1[:, None, :]
    d1 = ra[:, None, 0] * dq1[:, :, 1] - ra[:, None, 1] * dq1[:, :, 0]
    d2 = ra[:, None, 0] * dq2[:, :, 1] - ra[:, None, 1] * dq2[:, :, 0]
    dp1 = p1[:, None, :] - q1[None, :, :]
    dp2 = p2[:, None, :] - q1[None, :, :]
    d3 = rb[None, :, 0] * dp1[:, :, 1] - rb[None, :, 1] * dp1[:, :, 0]
    d4 = rb[None, :, 0] * dp2[:, :, 1] - rb[None, :, 1] * dp2[:, :, 0]
    ea = GEOM_TOL * la[:, None]
    eb = GEOM_TOL * lb[None, :]
    straddle_a = ((d1 > ea) & (d2 < -ea)) | ((d1 < -ea) & (d2 > ea))
    straddle_b = ((d3 > eb) & (d4 < -eb)) | ((d3 < -eb) & (d4 > eb))
    return bool(np.any(straddle_a & straddle_b))


def _strands(poly, c, tol=GEOM_TOL):
    """Direction pairs of full local passages of the polyline through c.

    A passage through a vertex or a segment interior contributes the two
    directions leaving c; passages at the polyline's own endpoints only
    contribute one direction and cannot cross, so they are dropped.
    """
    strands = []
    n = len(poly)
    vertex_hit = np.linalg.norm(poly - c, axis=1) < tol
    for j in np.nonzero(vertex_hit)[0]:
        dirs = []
        if j > 0 and not vertex_hit[j - 1]:
            dirs.append(poly[j - 1] - c)
        if j < n - 1 and not vertex_hit[j + 1]:
            dirs.append(poly[j + 1] - c)
        if len(dirs) == 2:
            strands.append((dirs[0], dirs[1]))
    seg_a, seg_b = poly[:-1], poly[1:]
    dist = _segment_point_distance(c[None, :], seg_a, seg_b)[0]
    for i in np.nonzero(dist < tol)[0]:
        if vertex_hit[i] or vertex_hit[i + 1]:
            continue
        strands.append((poly[i] - c, poly[i + 1] - c))
    return strands


def _strand_pair_crosses(sa, sb):
    """Whether two local passages through a shared point cross there."""
    ang_a = [np.arctan2(d[1], d[0]) for d in sa]
    ang_b = [np.arctan2(d[1], d[0]) for d in sb]
    for x in ang_a:
        for y in ang_b:
            diff = abs((x - y + np.pi) % (2 * np.pi) - np.pi)
            if diff < ANGLE_TOL:
                return False  # tangential or overlapping: touching
    span = (ang_a[1] - ang_a[0]) % (2 * np.pi)
    in_arc = [((y - ang_a[0]) % (2 * np.pi)) < span for y in ang_b]
    return in_arc[0] != in_arc[1]


def polylines_cross(a, b):
    """True iff the two polylines cross transversally.

    Shared endpoints, tangential contacts and collinear overlaps count as
    touching and return False.
    """
    a = snap(a)
    b = snap(b)
    lo = np.maximum(a.min(axis=0), b.min(axis=0))
    hi = np.minimum(a.max(axis=0), b.max(axis=0))
    if np.any(lo - hi > GEOM_TOL):
        return False
    if _proper_segment_crossings(a, b):
        return True
    contacts = []
    for pts, other in ((a, b), (b, a)):
        d = _segment_point_distance(pts, other[:-1], other[1:]).min(axis=1)
        contacts.extend(pts[d < GEOM_TOL])
    if not contacts:
        return False
    seen = set()
    for c in contacts:
        key = tuple(np.round(c, 8))
        if key in seen:
            continue
        seen.add(key)
        for sa in _strands(a, c):
            for sb in _strands(b, c):
                if _strand_pair_crosses(sa, sb):
                    return True
    return False


def polyline_is_simple(points, closed=False):
    """True if the polyline (or closed loop) does not cross itself."""
    pts = snap(points)
    if np.linalg.norm(pts[0] - pts[-1]) < GEOM_TOL:
        pts = pts[:-1]
        closed = True
    if not closed:
        return not polylines_cross(pts, pts)
    # Check twice with rotated seams so the closure vertex is interior once.
    first = np.vstack([pts, pts[:1]])
    rolled = np.roll(pts, -(len(pts) // 2), axis=0)
    second = np.vstack([rolled, rolled[:1]])
    return not (polylines_cross(first, first)
                or polylines_cross(second, second))


class TriMesh:
    """Triangle mesh with 3D vertices and outward-oriented faces."""

    def __init__(self, vertices, faces):
        self.vertices = np.asarray(vertices, dtype=float)
        self.faces = [tuple(int(i) for i in f) for f in faces]
        if self.vertices.ndim != 2 or self.vertices.shape[1] != 3:
            raise ValueError("vertices must be n x 3")
        for f in self.faces:
            if len(f) != 3:
                raise ValueError("faces must be triangles")

    def edge_count(self):
        edges = set()
        for i, j, k in self.faces:
            for e in ((i, j), (j, k), (k, i)):
                edges.add(frozenset(e))
        return len(edges)

    def euler_characteristic(self):
        return len(self.vertices) - self.edge_count() + len(self.faces)

    def is_closed(self):
        directed = {}
        for i, j, k in self.faces:
            for e in ((i, j), (j, k), (k, i)):
                if e in directed:
                    return False
                directed[e] = True
        for i, j in directed:
            if (j, i) not in directed:
                return False
        return True

    def transformed(self, matrix):
        """Apply a 4x4 homogeneous transform; flips faces if it mirrors."""
        m = np.asarray(matrix, dtype=float)
        v = self.vertices @ m[:3, :3].T + m[:3, 3]
        faces = self.faces
        if np.linalg.det(m[:3, :3]) < 0:
            faces = [(i, k, j) for i, j, k in faces]
        return TriMesh(v, faces)


def mesh_volume(mesh):
    """Signed volume by the divergence theorem; requires a closed mesh."""
    if not mesh.is_closed():
        raise ValueError("open mesh")
    v = mesh.vertices
    total = 0.0
    for i, j, k in mesh.faces:
        total += np.linalg.det(np.stack([v[i], v[j], v[k]]))
    return total / 6.0


def _chain_segments(segments):
    """Chain directed 2D segments into closed loops by endpoint matching."""
    by_start = {}
    for idx, seg in enumerate(segments):
        key = tuple(np.round(seg[0], 8))
        by_start.setdefault(key, []).append(idx)
    loops = []
    used = set()
    for idx in range(len(segments)):
        if idx in used:
            continue
        loop = [segments[idx][0]]
        current = idx
        while True:
            used.add(current)
            loop.append(segments[current][1])
            key = tuple(np.round(segments[current][1], 8))
            candidates = [i for i in by_start.get(key, []) if i not in used]
            if not candidates:
                break
            current = candidates[0]
        if np.linalg.norm(loop[0] - loop[-1]) < 1e-7:
            loops.append(np.asarray(loop[:-1]))
    return loops


def mesh_cross_section(mesh, z):
    """Planar slice of a closed mesh at height z.

    Returns a list of counter-clockwise polygons.  At the bottom/top plane
    the coplanar footprint faces are merged; at interior heights the
    triangle/plane segments are chained into loops.
    """
    from shapely.geometry import Polygon as ShapelyPolygon
    from shapely.ops import unary_union

    v = mesh.vertices
    zmin, zmax = v[:, 2].min(), v[:, 2].max()
    if z < zmin - GEOM_TOL or z > zmax + GEOM_TOL:
        raise ValueError("z outside slab")

    if abs(z - zmin) < GEOM_TOL or abs(z - zmax) < GEOM_TOL:
        target = zmin if abs(z - zmin) < GEOM_TOL else zmax
        tris = []
        for i, j, k in mesh.faces:
            if max(abs(v[t][2] - target) for t in (i, j, k)) < GEOM_TOL:
                tris.append(ShapelyPolygon([v[i][:2], v[j][:2], v[k][:2]]))
        merged = unary_union(tris)
        polys = ([merged] if merged.geom_type == "Polygon"
                 else list(merged.geoms))
        out = []
        for p in polys:
            ring = np.asarray(p.exterior.coords[:-1])
            if polygon_area(ring) < 0:
                ring = ring[::-1]
            out.append(ring)
        return out

    segments = []
    for i, j, k in mesh.faces:
        tri = v[[i, j, k]]
        dz = tri[:, 2] - z
        dz[np.abs(dz) < 1e-12] = 1e-12
        pts = []
        for a in range(3):
            b = (a + 1) % 3
            if dz[a] * dz[b] < 0:
                t = dz[a] / (dz[a] - dz[b])
                pts.append(tri[a][:2] + t * (tri[b][:2] - tri[a][:2]))
        if len(pts) != 2:
            continue
        p0, p1 = pts
        if np.linalg.norm(p1 - p0) < GEOM_TOL:
            continue
        n = np.cross(tri[1] - tri[0], tri[2] - tri[0])
        walk = np.array([-n[1], n[0]])  # z-hat cross normal, projected
        if np.dot(p1 - p0, walk) < 0:
            p0, p1 = p1, p0
        segments.append((p0, p1))
    loops = _chain_segments(segments)
    out = []
    for ring in loops:
        if len(ring) < 3:
            continue
        x, y = ring[:, 0], ring[:, 1]
        area = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
        if abs(area) < 1e-12:
            continue
        if area < 0:
            ring = ring[::-1]
        out.append(ring)
    return out
