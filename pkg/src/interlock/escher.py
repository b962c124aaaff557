"""Deforming paired fundamental-domain edges by curves.

A deformation curve lives in edge-local coordinates: the edge runs from
(0, 0) to (1, 0) and +y points to the interior side (left of the
counter-clockwise edge direction).  An assignment attaches one curve and
a polarity to each edge pair; partner edges carry the image of the
representative curve under the pairing isometry, which flips polarity.
"""

import numpy as np

from .euclid import (
    GEOM_TOL,
    Isometry2,
    polygon_area,
    polyline_is_simple,
    polylines_cross,
)
from .wallpaper import FundamentalDomain, WallpaperGroup, canonical_domain, \
    make_group, orbit_in_window

INWARD = "inward"
OUTWARD = "outward"


class DeformationCurve:
    """A deformation curve in edge-local coordinates.

    ``control`` rows are the local points for an inward deformation; the
    outward version is the mirror image across the edge.  Quadratic
    curves keep their Bezier control point for exact end tangents and are
    sampled before entering the geometric kernel.
    """

    def __init__(self, kind, control, samples=16):
        self.kind = kind
        self.control = np.asarray(control, dtype=float)
        self.samples = int(samples)
        if np.linalg.norm(self.control[0]) > 1e-12 or \
                np.linalg.norm(self.control[-1] - (1.0, 0.0)) > 1e-12:
            raise ValueError("curve endpoints must pin the edge endpoints")

    def local_points(self):
        if self.kind != "quadratic":
            return self.control.copy()
        p0, p1, p2 = np.array([0.0, 0.0]), self.control[1], \
            np.array([1.0, 0.0])
        t = np.linspace(0.0, 1.0, self.samples + 1)[:, None]
        return (1 - t) ** 2 * p0 + 2 * t * (1 - t) * p1 + t ** 2 * p2

    def local_end_tangents(self):
        """Exact outgoing tangent at t=0 and incoming tangent at t=1."""
        if self.kind == "quadratic":
            p1 = self.control[1]
            return p1 - (0.0, 0.0), (1.0, 0.0) - p1
        pts = self.control
        return pts[1] - pts[0], pts[-1] - pts[-2]

    def to_dict(self):
        return {"kind": self.kind,
                "control": [list(p) for p in self.control],
                "samples": self.samples}


def midpoint_peak(amplitude=0.5):
    """One intermediate point at the edge midpoint, shifted by amplitude."""
    return DeformationCurve(
        "midpoint_peak", [(0, 0), (0.5, amplitude), (1, 0)])


def zigzag(amplitude=0.25):
    """Symmetric zig-zag, invariant under the half-turn at the midpoint."""
    return DeformationCurve(
        "zigzag", [(0, 0), (0.25, amplitude), (0.75, -amplitude), (1, 0)])


def endpoint_peak(amplitude=0.25, end=0):
    """One intermediate point directly above an end vertex."""
    x = 0.0 if end == 0 else 1.0
    return DeformationCurve(
        "endpoint_peak", [(0, 0), (x, amplitude), (1, 0)])


def quadratic(control_y=0.25, samples=16):
    """Parabolic arc with one Bezier control point above the midpoint."""
    return DeformationCurve(
        "quadratic", [(0, 0), (0.5, control_y), (1, 0)], samples=samples)


def curve_from_dict(data):
    return DeformationCurve(data["kind"], data["control"],
                            data.get("samples", 16))


def _edge_map(p, q, polarity):
    """Linear map from edge-local to world coordinates."""
    u = np.asarray(q, dtype=float) - np.asarray(p, dtype=float)
    perp = np.array([-u[1], u[0]])
    sign = 1.0 if polarity == INWARD else -1.0
    m = np.column_stack([u, sign * perp])
    return m, np.asarray(p, dtype=float)


def place_curve(curve, p, q, polarity):
    """World polyline of a curve on the edge p -> q."""
    m, origin = _edge_map(p, q, polarity)
    return curve.local_points() @ m.T + origin


def classify_polarity(points, edge_index, domain):
    """Inward/outward by the curve's first departure off the edge line."""
    p, q = domain.edge(edge_index)
    u = q - p
    perp = np.array([-u[1], u[0]]) / np.dot(u, u)
    heights = (np.asarray(points, dtype=float) - p) @ perp
    for h in heights:
        if abs(h) > 1e-12:
            return INWARD if h > 0 else OUTWARD
    raise ValueError("undeformed edge")


class DeformedDomain:
    """A fundamental domain with deformed boundary edges."""

    def __init__(self, source, assignment, edge_curves):
        self.source = source
        self.assignment = assignment
        self.edge_curves = edge_curves

    @property
    def boundary(self):
        return np.vstack([c[:-1] for c in self.edge_curves])

    def area(self):
        return polygon_area(self.boundary)


def _world_tangents(curve, p, q, polarity):
    m, _ = _edge_map(p, q, polarity)
    t0, t1 = curve.local_end_tangents()
    return m @ t0, m @ t1


def obverse(assignment, pair_index=-1):
    """Flip the polarity of one edge pair (default: the last)."""
    flipped = []
    for i, (curve, polarity) in enumerate(assignment):
        if i == pair_index % len(assignment):
            polarity = INWARD if polarity == OUTWARD else OUTWARD
        flipped.append((curve, polarity))
    return flipped


def apply_escher(domain, group, assignment, validate=True):
    """Deform the domain's paired edges, validating the result.

    Raises ValueError("deformation paths intersect") when orbit curves
    cross or consecutive boundary tangents reverse into a cusp.
    """
    if len(assignment) != len(domain.pairs):
        raise ValueError("assignment must cover every edge pair")
    edge_curves = [None] * 4
    tangents = [None] * 4  # (outgoing at start, incoming at end)
    for pair, (curve, polarity) in zip(domain.pairs, assignment):
        if polarity not in (INWARD, OUTWARD):
            raise ValueError("polarity must be inward or outward")
        p, q = domain.edge(pair.rep)
        world = place_curve(curve, p, q, polarity)
        t0, t1 = _world_tangents(curve, p, q, polarity)
        if pair.self_paired:
            image = pair.iso.apply(world)[::-1]
            if np.abs(image - world).max() > GEOM_TOL:
                raise ValueError(
                    "self-paired edge needs a half-turn symmetric curve")
            edge_curves[pair.rep] = world
            tangents[pair.rep] = (t0, t1)
            continue
        edge_curves[pair.rep] = world
        tangents[pair.rep] = (t0, t1)
        image = pair.iso.apply(world)
        it0 = pair.iso.linear @ t0
        it1 = pair.iso.linear @ t1
        c, _ = domain.edge(pair.partner)
        if np.linalg.norm(image[0] - c) > np.linalg.norm(image[-1] - c):
            image = image[::-1]
            it0, it1 = -it1, -it0
        edge_curves[pair.partner] = image
        tangents[pair.partner] = (it0, it1)

    # Collapse spikes: a corner whose two incident curves immediately
    # retrace each other maps to the shared interior point.
    collapsed = [False] * 4
    for j in range(4):
        prev, nxt = edge_curves[j - 1], edge_curves[j]
        if len(prev) >= 2 and len(nxt) >= 2 and \
                np.linalg.norm(prev[-2] - nxt[1]) < GEOM_TOL:
            edge_curves[j - 1] = prev[:-1]
            edge_curves[j] = nxt[1:]
            collapsed[j] = True
    for j in range(4):
        if collapsed[j]:
            prev, nxt = edge_curves[j - 1], edge_curves[j]
            tangents[j - 1] = (tangents[j - 1][0], prev[-1] - prev[-2])
            tangents[j] = (nxt[1] - nxt[0], tangents[j][1])

    # Cusp check: reversed tangents at a surviving junction mean the two
    # deformation paths meet tangentially from opposite sides.
    for j in range(4):
        incoming = tangents[j - 1][1]
        outgoing = tangents[j][0]
        a = incoming / np.linalg.norm(incoming)
        b = outgoing / np.linalg.norm(outgoing)
        if abs(a[0] * b[1] - a[1] * b[0]) < 1e-9 and np.dot(a, b) < 0:
            raise ValueError("deformation paths intersect")

    dd = DeformedDomain(domain, assignment, edge_curves)
    boundary = dd.boundary
    if not polyline_is_simple(boundary, closed=True):
        raise ValueError("deformation paths intersect")
    if abs(polygon_area(boundary) - domain.area()) > 1e-9:
        raise ValueError("deformation does not preserve area")
    if validate and not validate_orbit_disjoint(dd, group):
        raise ValueError("deformation paths intersect")
    return dd


def validate_orbit_disjoint(dd, group, window=None):
    """True iff no two orbit copies of the boundary cross in the window.

    With no window, the identity copy is checked against every
    neighbouring copy, which suffices by group invariance.
    """
    boundary = dd.boundary
    closed = np.vstack([boundary, boundary[:1]])
    if window is None:
        lo = boundary.min(axis=0) - GEOM_TOL
        hi = boundary.max(axis=0) + GEOM_TOL
        window = np.array([lo, (hi[0], lo[1]), hi, (lo[0], hi[1])])
        copies = orbit_in_window(group, dd.source, window)
        identity = Isometry2.identity()
        for g, _ in copies:
            if g.is_close(identity):
                continue
            if polylines_cross(closed, g.apply(closed)):
                return False
        return True
    copies = orbit_in_window(group, dd.source, np.asarray(window, float))
    images = [g.apply(closed) for g, _ in copies]
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            if polylines_cross(images[i], images[j]):
                return False
    return True


_S3 = np.sqrt(3.0)


def scaled_group(group, s):
    reps = [Isometry2(r.linear, r.translation * s)
            for r in group.representatives]
    return WallpaperGroup(group.name, group.translations * s, reps)


def scaled_domain(domain, s):
    from .wallpaper import EdgePair
    pairs = [EdgePair(p.rep, p.partner,
                      Isometry2(p.iso.linear, p.iso.translation * s))
             for p in domain.pairs]
    return FundamentalDomain(domain.group_name, domain.polygon * s, pairs)


def canonical_assignment(name):
    """Named (group, domain, assignment) triple for each canonical block."""
    if name == "versatile":
        group = make_group("p4")
        return group, canonical_domain(group), \
            [(midpoint_peak(0.5), INWARD), (midpoint_peak(0.5), INWARD)]
    if name == "bisquare":
        group = scaled_group(make_group("p4"), np.sqrt(2))
        domain = scaled_domain(canonical_domain(make_group("p4")), np.sqrt(2))
        return group, domain, \
            [(midpoint_peak(0.5), OUTWARD), (midpoint_peak(0.5), INWARD)]
    if name in ("rhom", "rhom_obverse"):
        group = make_group("p3")
        assignment = [(midpoint_peak(_S3 / 6), OUTWARD),
                      (midpoint_peak(_S3 / 6), OUTWARD)]
        if name == "rhom_obverse":
            assignment = obverse(assignment, 1)
        return group, canonical_domain(group), assignment
    if name in ("p6_versatile", "p6_bilozenge"):
        group = make_group("p6")
        polarity = OUTWARD if name == "p6_versatile" else INWARD
        return group, canonical_domain(group), \
            [(midpoint_peak(_S3 / 6), INWARD), (midpoint_peak(_S3 / 2), polarity)]
    if name in ("p1p2_zigzag", "p1p2_zigzag_obverse"):
        group = make_group("p1")
        assignment = [(zigzag(0.25), INWARD), (zigzag(0.25), OUTWARD)]
        if name.endswith("obverse"):
            assignment = obverse(assignment, 1)
        return group, canonical_domain(group), assignment
    if name == "p2_zigzag":
        group = make_group("p2")
        polarities = [INWARD, OUTWARD, INWARD, OUTWARD]
        return group, canonical_domain(group), \
            [(zigzag(0.25), pol) for pol in polarities]
    if name == "pg_pair":
        group = make_group("pg")
        return group, canonical_domain(group), \
            [(zigzag(0.25), INWARD), (zigzag(0.25), OUTWARD)]
    if name == "p2gg_pair":
        group = make_group("p2gg")
        return group, canonical_domain(group), \
            [(endpoint_peak(0.25, end=0), INWARD),
             (endpoint_peak(0.25, end=1), OUTWARD)]
    if name in ("abeille", "abeille_obverse"):
        group = make_group("p4")
        assignment = [(quadratic(0.25), INWARD), (quadratic(0.25), INWARD)]
        if name.endswith("obverse"):
            assignment = obverse(assignment, 1)
        return group, canonical_domain(group), assignment
    raise ValueError("unknown canonical assignment: %r" % (name,))


def random_assignment(group_name, rng, max_tries=200):
    """Draw a random valid assignment for the group's canonical domain.

    Invalid draws (crossing or cusped configurations) are redrawn, so the
    returned assignment always passes validation.
    """
    group = make_group(group_name)
    domain = canonical_domain(group)
    kinds = ("midpoint_peak", "zigzag", "quadratic")
    for _ in range(max_tries):
        assignment = []
        for pair in domain.pairs:
            if pair.self_paired:
                curve = zigzag(rng.uniform(0.05, 0.45))
            else:
                kind = kinds[rng.integers(0, len(kinds))]
                amp = rng.uniform(0.05, 0.3)
                if kind == "midpoint_peak":
                    curve = midpoint_peak(amp)
                elif kind == "zigzag":
                    curve = zigzag(amp)
                else:
                    curve = quadratic(amp)
            polarity = INWARD if rng.random() < 0.5 else OUTWARD
            assignment.append((curve, polarity))
        try:
            deformed = apply_escher(domain, group, assignment)
        except ValueError:
            continue
        return group, domain, assignment, deformed
    raise RuntimeError("no valid random assignment found for %s" % group_name)


def assignment_to_dict(group, assignment, scale=1.0):
    name = group.name if isinstance(group, WallpaperGroup) else group
    return {"group": name,
            "scale": scale,
            "pairs": [{"curve": curve.to_dict(), "polarity": polarity}
                      for curve, polarity in assignment]}


def assignment_from_dict(data):
    group = make_group(data["group"])
    domain = canonical_domain(group)
    scale = float(data.get("scale", 1.0))
    if scale != 1.0:
        group = scaled_group(group, scale)
        domain = scaled_domain(domain, scale)
    assignment = [(curve_from_dict(p["curve"]), p["polarity"])
                  for p in data["pairs"]]
    return group, domain, assignment
