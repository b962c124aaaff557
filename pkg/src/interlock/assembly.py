"""Placed-block assemblies driven by tilings and wallpaper orbits.

A slab assembly is a set of rigid placements of blocks between the
planes z = 0 and z = h, together with a planar region on which the
placements are expected to partition every horizontal cross-section.
Assemblies are produced from decorated grid tilings, decorated lozenge
tilings, decorated face complexes, or directly from a wallpaper-group
orbit, and are verified numerically by polygon clipping.
"""

import numpy as np
import shapely
from shapely.geometry import Point, Polygon as ShapelyPolygon
from shapely.ops import unary_union
from shapely.strtree import STRtree

from .blocks import (
    LOZENGE_HEIGHT,
    SQUARE_HEIGHT,
    Block,
    loft,
    mirror_block,
)
from .escher import (
    INWARD,
    OUTWARD,
    DeformedDomain,
    apply_escher,
    canonical_assignment,
    midpoint_peak,
)
from .euclid import GEOM_TOL, Isometry2, compose, mesh_cross_section, \
    polygon_area
from .lozenge import (
    BI_SPLIT,
    LozengeTiling,
    TilingComplex,
    decoration_black_edges,
    decoration_is_valid,
    snub_square_complex,
)
from .truchet import BI, QUAD, Tiling, is_valid_tiling
from .wallpaper import FundamentalDomain, canonical_domain, make_group, \
    orbit_in_window

BOUNDARY_TOL = 1e-9

# Grid size used when snapping clipped polygons.  Clipping against a
# mitre-inset region can leave near-duplicate vertices a nanometre
# apart whose later overlays are unreliable; snapping removes them.
SNAP_GRID = 1e-9

# Deformation amplitudes for the two snub-square assembly variants:
# the shallow one keeps every lozenge deformation embedded, the deep
# one reuses the amplitude of the square-cell blocks.
SNUB_SHALLOW_AMPLITUDE = np.sqrt(3.0) / 6.0
SNUB_DEEP_AMPLITUDE = 0.5

_ADJACENT_PAIRS = tuple(frozenset(s) for s in ({0, 1}, {1, 2}, {2, 3},
                                               {3, 0}))
_OPPOSITE_PAIRS = tuple(frozenset(s) for s in ({0, 2}, {1, 3}))


class Placement:
    """A block label with a proper planar isometry and a source index."""

    def __init__(self, label, transform, index=None):
        if not transform.proper:
            raise ValueError("placements use proper isometries; reflected "
                             "positions take the mirrored partner block")
        self.label = label
        self.transform = transform
        self.index = index

    def matrix(self):
        """The placement as a 4x4 row-major rigid motion fixing z."""
        m = np.eye(4)
        m[0:2, 0:2] = self.transform.linear
        m[0:2, 3] = self.transform.translation
        return m

    def is_close(self, other, tol=GEOM_TOL):
        return self.label == other.label \
            and self.transform.is_close(other.transform, tol)

    def __repr__(self):
        return "Placement(%r, %r, %r)" % (self.label, self.transform,
                                          self.index)


class Assembly:
    """Placed blocks over a slab region with an optional frame subset."""

    def __init__(self, blocks, placements, region, height, frame=()):
        self.blocks = dict(blocks)
        self.placements = list(placements)
        self.region = None if region is None \
            else np.asarray(region, dtype=float)
        self.height = float(height)
        self.frame = frozenset(frame)
        for p in self.placements:
            block = self.blocks[p.label]
            if abs(block.height - self.height) > GEOM_TOL:
                raise ValueError("block %r does not span the slab height"
                                 % (p.label,))

    def region_polygon(self):
        if self.region is None:
            return None
        return ShapelyPolygon(self.region)

    def placed_bottom(self, i):
        """Bottom footprint of placement i as a shapely polygon."""
        p = self.placements[i]
        rings = self.blocks[p.label].bottom
        return unary_union([ShapelyPolygon(p.transform.apply(r))
                            for r in rings])

    def with_frame(self, frame):
        return Assembly(self.blocks, self.placements, self.region,
                        self.height, frame)


def _clean(geom):
    return shapely.set_precision(geom, SNAP_GRID)


def claim_margin(block):
    """How far the top footprint reaches outside the bottom footprint."""
    bottom = unary_union([ShapelyPolygon(r) for r in block.bottom])
    margin = 0.0
    for ring in block.top:
        for point in ring:
            margin = max(margin, Point(point).distance(bottom))
    return margin


def inset_region(footprints, margin):
    """Inset the union of footprints so one-sided boundary claims from
    absent outside neighbours cannot produce spurious deficits.

    Returns the boundary ring of the inset region, or None when the
    inset consumes the whole footprint (single-block assemblies).
    """
    union = unary_union([ShapelyPolygon(np.asarray(f, dtype=float))
                         for f in footprints])
    if margin > 0:
        region = union.buffer(BOUNDARY_TOL).buffer(
            -BOUNDARY_TOL - margin, join_style="mitre")
    else:
        region = union
    region = _clean(region)
    if region.is_empty:
        return None
    if region.geom_type == "MultiPolygon":
        region = max(region.geoms, key=lambda g: g.area)
    return np.asarray(region.exterior.coords[:-1], dtype=float)


def _p4_block(assignment, h, label):
    domain = canonical_domain("p4")
    group = make_group("p4")
    deformed = apply_escher(domain, group, assignment)
    return loft(domain.polygon, deformed, h, label=label)


def square_blockset(h=SQUARE_HEIGHT):
    """Blocks for grid tilings on unit cells.

    The bi tile takes the four-way interlocking block whose top claims
    two adjacent edge midpoints; the quad tile takes the block whose
    top splits into two quarter-turned squares claiming opposite edge
    midpoints.
    """
    versatile = _p4_block([(midpoint_peak(0.5), INWARD),
                           (midpoint_peak(0.5), INWARD)], h, "versatile")
    biquad = _p4_block([(midpoint_peak(0.5), OUTWARD),
                        (midpoint_peak(0.5), INWARD)], h, "bisquare_unit")
    return {BI: versatile, QUAD: biquad}


def lozenge_blockset(h=LOZENGE_HEIGHT):
    """The threefold lozenge block, its obverse, and the obverse mirror."""
    def build(name):
        group, domain, assignment = canonical_assignment(name)
        deformed = apply_escher(domain, group, assignment)
        return loft(domain.polygon, deformed, h, label=name)

    rhom = build("rhom")
    obverse = build("rhom_obverse")
    mirrored = mirror_block(obverse, axis_x=0.5)
    mirrored.label = "rhom_obverse_mirror"
    return {"rhom": rhom, "rhom_obverse": obverse,
            "rhom_obverse_mirror": mirrored}


def _rigid_to(source, target):
    """The proper isometry sending the source 4-gon onto the target."""
    u = target[2] - target[0]
    v = source[2] - source[0]
    angle = np.arctan2(u[1], u[0]) - np.arctan2(v[1], v[0])
    turn = Isometry2.rotation(angle)
    return Isometry2(turn.linear, target[0] - turn.linear @ source[0])


def _grid_assembly(tiling, blockset, h):
    if not is_valid_tiling(tiling):
        raise ValueError("invalid tiling: adjacent colour claims clash")
    kinds = {tile.kind for row in tiling.tiles for tile in row}
    if not kinds <= {BI, QUAD}:
        raise ValueError("no block catalogue for octagonal tiles")
    if blockset is None:
        blockset = square_blockset(h)
    rows = len(tiling.tiles)
    cols = len(tiling.tiles[0])
    placements = []
    for r, row in enumerate(tiling.tiles):
        for c, tile in enumerate(row):
            if tile.kind == BI:
                # The unrotated bi block claims the top and left edge
                # midpoints, matching bi orientation 3.
                quarter = (tile.orient + 1) % 4
                block = blockset[BI]
            else:
                quarter = tile.orient
                block = blockset[QUAD]
            iso = compose(Isometry2.translation_by((c, rows - 1 - r)),
                          Isometry2.rotation(quarter * np.pi / 2))
            placements.append(Placement(block.label, iso, (r, c)))
    blocks = {b.label: b for b in blockset.values()}
    margin = max(claim_margin(b) for b in blockset.values())
    bottoms = []
    for p in placements:
        for ring in blocks[p.label].bottom:
            bottoms.append(p.transform.apply(ring))
    region = inset_region(bottoms, margin)
    return select_frame(Assembly(blocks, placements, region, h))


def _lozenge_assembly(tiling, decorations, blockset, h):
    polygons = tiling.polygons()
    if len(decorations) != len(polygons):
        raise ValueError("one decoration per lozenge required")
    if not decoration_is_valid(polygons, decorations):
        raise ValueError("invalid decoration: adjacent colour claims clash")
    if blockset is None:
        blockset = lozenge_blockset(h)
    source = canonical_domain("p3").polygon
    placements = []
    for i, (polygon, (split, orient)) in enumerate(zip(polygons,
                                                       decorations)):
        if split == BI_SPLIT:
            label, shift = "rhom", 0 if orient == 0 else 2
        elif orient == 0:
            label, shift = "rhom_obverse", 0
        else:
            # Claiming the other opposite edge pair needs the mirrored
            # obverse block: no rotation of the lozenge swaps the pairs.
            label, shift = "rhom_obverse_mirror", 0
        target = np.array([polygon[(k + shift) % 4] for k in range(4)])
        placements.append(Placement(label, _rigid_to(source, target), i))
    margin = max(claim_margin(b) for b in blockset.values())
    region = inset_region(polygons, margin)
    return select_frame(Assembly(blockset, placements, region, h))


def face_block(face, black_edges, amplitude, h, label=""):
    """Loft a block over one face of a complex, its top pushed outward
    across the black edges and pulled inward across the others."""
    face = np.asarray(face, dtype=float)
    n = len(face)
    black_edges = set(black_edges)
    if polygon_area(face) < 0:
        face = face[::-1]
        black_edges = {(n - 2 - e) % n for e in black_edges}
    curves = []
    for i in range(n):
        a, b = face[i], face[(i + 1) % n]
        d = b - a
        outward = np.array([d[1], -d[0]]) / np.linalg.norm(d)
        sign = amplitude if i in black_edges else -amplitude
        curves.append(np.array([a, 0.5 * (a + b) + sign * outward, b]))
    # Adjacent concede apexes can meet at a corner; drop the retraced
    # spike so the top boundary stays simple.
    for j in range(n):
        if np.linalg.norm(curves[j - 1][-2] - curves[j][1]) < GEOM_TOL:
            curves[j - 1] = curves[j - 1][:-1]
            curves[j] = curves[j][1:]
    deformed = DeformedDomain(FundamentalDomain("complex", face, []),
                              None, curves)
    return loft(face, deformed, h, label=label)


def complex_assembly(cx, black_sets, amplitude, h=SQUARE_HEIGHT):
    """One block per face of a decorated complex, placed as drawn."""
    if len(black_sets) != len(cx.faces):
        raise ValueError("one black-edge set per face required")
    for fa, ea, fb, eb in cx.links:
        if (ea in black_sets[fa]) == (eb in black_sets[fb]):
            raise ValueError("invalid decoration: adjacent colour claims "
                             "clash on a shared edge")
    blocks = {}
    placements = []
    for i, (face, blacks) in enumerate(zip(cx.faces, black_sets)):
        label = "face_%d" % i
        blocks[label] = face_block(face, blacks, amplitude, h, label=label)
        placements.append(Placement(label, Isometry2.identity(), i))
    region = inset_region(cx.faces, amplitude)
    return select_frame(Assembly(blocks, placements, region, h))


def tiling_to_assembly(t, blockset=None, h=None, amplitude=None):
    """Build the assembly encoded by a decorated tiling.

    Accepts a grid tiling, a (lozenge tiling, decorations) pair, or a
    (face complex, decorations) pair; decorations are (split, orient)
    pairs or explicit black-edge sets for complexes.
    """
    if isinstance(t, Tiling):
        return _grid_assembly(t, blockset, SQUARE_HEIGHT if h is None else h)
    if isinstance(t, tuple) and len(t) == 2:
        carrier, decorations = t
        if isinstance(carrier, LozengeTiling):
            return _lozenge_assembly(carrier, decorations, blockset,
                                     LOZENGE_HEIGHT if h is None else h)
        if isinstance(carrier, TilingComplex):
            blacks = [d if isinstance(d, (set, frozenset))
                      else frozenset(decoration_black_edges(*d))
                      for d in decorations]
            if amplitude is None:
                amplitude = SNUB_SHALLOW_AMPLITUDE
            return complex_assembly(carrier, blacks, amplitude,
                                    SQUARE_HEIGHT if h is None else h)
    raise ValueError("unsupported tiling input: %r" % (type(t),))


def _solve_decoration(cx, allowed):
    """First consistent black-edge choice per face, by backtracking."""
    adjacency = [[] for _ in cx.faces]
    for fa, ea, fb, eb in cx.links:
        adjacency[fa].append((ea, fb, eb))
        adjacency[fb].append((eb, fa, ea))
    choice = [None] * len(cx.faces)

    def consistent(f):
        for e, g, eg in adjacency[f]:
            if choice[g] is not None \
                    and (e in choice[f]) == (eg in choice[g]):
                return False
        return True

    def backtrack(f):
        if f == len(cx.faces):
            return True
        for blacks in allowed[cx.kinds[f]]:
            choice[f] = blacks
            if consistent(f) and backtrack(f + 1):
                return True
        choice[f] = None
        return False

    if not backtrack(0):
        raise ValueError("complex admits no consistent decoration")
    return list(choice)


def snub_square_assembly(n, variant=1, h=SQUARE_HEIGHT):
    """A verified assembly over n x n snub-square cells.

    Variant 1 uses the shallow amplitude, with lozenges claiming either
    adjacent or opposite edge pairs.  Variant 2 uses the deep amplitude,
    where lozenges must claim opposite pairs (the adjacent-pair top
    would self-intersect) and the square blocks match the four-way
    interlocking square-cell block.
    """
    cx = snub_square_complex(n)
    if variant == 1:
        amplitude = SNUB_SHALLOW_AMPLITUDE
        allowed = {"square": _ADJACENT_PAIRS,
                   "lozenge": _ADJACENT_PAIRS + _OPPOSITE_PAIRS}
    elif variant == 2:
        amplitude = SNUB_DEEP_AMPLITUDE
        allowed = {"square": _ADJACENT_PAIRS, "lozenge": _OPPOSITE_PAIRS}
    else:
        raise ValueError("variant must be 1 or 2")
    black_sets = _solve_decoration(cx, allowed)
    return complex_assembly(cx, black_sets, amplitude, h)


def orbit_assembly(group, blocks, window, partner_axis_x=0.0):
    """One placement per orbit copy of the block overlapping the window.

    Improper orbit elements place the mirrored partner block; groups
    with improper representatives therefore need a (block, partner)
    pair, with partner = mirror_block(block, partner_axis_x).
    """
    if isinstance(blocks, Block):
        primary, partner = blocks, None
    else:
        primary, partner = blocks
    improper = [rep for rep in group.representatives if not rep.proper]
    if improper and partner is None:
        raise ValueError("group %r has reflected orbit positions and "
                         "needs a mirrored partner block" % (group.name,))
    window = np.asarray(window, dtype=float)
    mirror = Isometry2.mirror_x(partner_axis_x)
    placements = []
    catalogue = {primary.label: primary}
    if partner is not None:
        catalogue[partner.label] = partner
    domain_polygon = primary.bottom[0]
    for index, (g, _image) in enumerate(
            orbit_in_window(group, domain_polygon, window)):
        if g.proper:
            placements.append(Placement(primary.label, g, index))
        else:
            placements.append(Placement(partner.label, compose(g, mirror),
                                        index))
    margin = claim_margin(primary)
    region_poly = _clean(ShapelyPolygon(window).buffer(
        -margin, join_style="mitre"))
    region = None if region_poly.is_empty \
        else np.asarray(region_poly.exterior.coords[:-1], dtype=float)
    return select_frame(Assembly(catalogue, placements, region,
                                 primary.height))


def _placement_sections(assembly, z, cache):
    polys = []
    for p in assembly.placements:
        key = (p.label, round(z, 12))
        rings = cache.get(key)
        if rings is None:
            block = assembly.blocks[p.label]
            if z < GEOM_TOL:
                rings = block.bottom
            elif abs(z - block.height) < GEOM_TOL:
                rings = block.top
            else:
                rings = mesh_cross_section(block.mesh, z)
            cache[key] = rings
        polys.append(unary_union([ShapelyPolygon(p.transform.apply(r))
                                  for r in rings]))
    return polys


def default_z_samples(height, seed=0):
    """The cap, quarter, and mid planes plus four seeded interior cuts."""
    rng = np.random.default_rng(seed)
    samples = [f * height for f in (0.0, 0.25, 0.5, 0.75, 1.0)]
    samples += list(rng.uniform(0.05 * height, 0.95 * height, 4))
    return sorted(samples)


def verify_space_filling(assembly, z_samples=None, tol=1e-6, seed=0):
    """Check that cross-sections partition the region at each z.

    Returns a report dict: overall pass flag, per-z deficit and maximum
    pairwise overlap, and their maxima across all samples.
    """
    if z_samples is None:
        z_samples = default_z_samples(assembly.height, seed)
    region = assembly.region_polygon()
    per_z = []
    passed = True
    if region is None or region.area < GEOM_TOL:
        per_z = [{"z": float(z), "deficit": 0.0, "max_overlap": 0.0}
                 for z in z_samples]
        return {"pass": True, "per_z": per_z, "deficit": 0.0,
                "max_overlap": 0.0}
    region = _clean(region)
    area = region.area
    cache = {}
    for z in z_samples:
        sections = _placement_sections(assembly, z, cache)
        clipped = [_clean(s.intersection(region)) for s in sections]
        deficit = abs(area - sum(c.area for c in clipped))
        tree = STRtree(clipped)
        overlap = 0.0
        for i, ci in enumerate(clipped):
            for j in tree.query(ci):
                if j <= i:
                    continue
                overlap = max(overlap, ci.intersection(clipped[j]).area)
        per_z.append({"z": float(z), "deficit": deficit,
                      "max_overlap": overlap})
        if deficit > tol * area or overlap >= tol * area:
            passed = False
    return {"pass": passed, "per_z": per_z,
            "deficit": max(r["deficit"] for r in per_z),
            "max_overlap": max(r["max_overlap"] for r in per_z)}


def select_frame(assembly):
    """Mark as frame every placement whose footprint touches the region
    boundary; with no usable region, every placement is frame."""
    region = assembly.region_polygon()
    if region is None or region.area < GEOM_TOL:
        return assembly.with_frame(range(len(assembly.placements)))
    boundary = region.exterior
    frame = [i for i in range(len(assembly.placements))
             if assembly.placed_bottom(i).distance(boundary) < BOUNDARY_TOL]
    return assembly.with_frame(frame)


def assembly_to_dict(assembly):
    return {
        "region": [] if assembly.region is None
        else [[float(x), float(y)] for x, y in assembly.region],
        "height": assembly.height,
        "placements": [
            {"block": p.label,
             "matrix": [float(v) for v in p.matrix().ravel()],
             "frame": i in assembly.frame}
            for i, p in enumerate(assembly.placements)],
    }


def assembly_from_dict(data, blocks):
    """Rebuild an assembly; blocks maps each label to its Block."""
    placements = []
    frame = set()
    for i, entry in enumerate(data["placements"]):
        m = np.asarray(entry["matrix"], dtype=float).reshape(4, 4)
        iso = Isometry2(m[0:2, 0:2], m[0:2, 3])
        placements.append(Placement(entry["block"], iso, i))
        if entry.get("frame"):
            frame.add(i)
    region = np.asarray(data["region"], dtype=float) \
        if data["region"] else None
    return Assembly(blocks, placements, region, data["height"], frame)
