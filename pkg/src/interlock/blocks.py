"""Lofted 3D building blocks.

A block interpolates linearly between two planar domains that deform the
same source polygon: boundary points are matched per source edge by
normalized arc length, the ruled side walls are triangulated by zipping
the two point chains, and the caps are triangulated after splitting
pinched rings into simple sub-rings.
"""

import numpy as np

from .euclid import (
    GEOM_TOL,
    SNAP_DECIMALS,
    TriMesh,
    mesh_cross_section,
    mesh_volume,
    polygon_area,
)
from .escher import DeformedDomain, apply_escher, canonical_assignment

_S3 = np.sqrt(3.0)
_S6 = np.sqrt(6.0)

SQUARE_HEIGHT = 1.0
LOZENGE_HEIGHT = _S6 / 3.0

CANONICAL_BLOCKS = (
    "versatile", "bisquare", "rhom", "rhom_obverse",
    "p6_versatile", "p6_bilozenge", "p1p2_zigzag", "p1p2_zigzag_obverse",
    "p2_zigzag", "pg_pair", "p2gg_pair", "abeille", "abeille_obverse",
)

PAIRED_BLOCKS = ("pg_pair", "p2gg_pair")


def _key2(p):
    return tuple(np.round(p, SNAP_DECIMALS))


def _key3(p):
    return tuple(np.round(p, SNAP_DECIMALS))


class Block:
    """A lofted block: watertight mesh plus its planar footprints."""

    def __init__(self, mesh, bottom, top, height, label=""):
        self.mesh = mesh
        self.bottom = [np.asarray(r, dtype=float) for r in bottom]
        self.top = [np.asarray(r, dtype=float) for r in top]
        self.height = float(height)
        self.label = label

    def volume(self):
        return mesh_volume(self.mesh)


class _VertexPool:
    def __init__(self):
        self.points = []
        self.index = {}

    def add(self, p):
        k = _key3(p)
        if k not in self.index:
            self.index[k] = len(self.points)
            self.points.append(np.asarray(p, dtype=float))
        return self.index[k]


def _as_layer(obj):
    """Source corner ring and per-edge boundary chains of a loft layer.

    Chains collapsed at a corner are re-extended through the exact source
    corner so that paired edges keep isometric arc-length parametrizations;
    junction coordinates are snapped to shared values so the retraced
    corner spikes of adjacent walls cancel exactly.
    """
    if not isinstance(obj, DeformedDomain):
        ring = np.asarray(obj, dtype=float)
        n = len(ring)
        chains = [np.array([ring[i], ring[(i + 1) % n]]) for i in range(n)]
        return ring, chains
    corners = np.asarray(obj.source.polygon, dtype=float)
    n = len(corners)
    chains = [np.array(c, dtype=float) for c in obj.edge_curves]
    for i in range(n):
        if np.linalg.norm(chains[i][0] - chains[i - 1][-1]) < GEOM_TOL:
            chains[i][0] = chains[i - 1][-1]
    for i in range(n):
        corner = corners[i]
        prev, nxt = chains[i - 1], chains[i]
        if np.linalg.norm(prev[-1] - corner) < GEOM_TOL:
            prev[-1] = corner
            nxt[0] = corner
        else:
            chains[i - 1] = np.vstack([prev, corner])
            chains[i] = np.vstack([corner, nxt])
    return corners, chains


def _layer_ring(chains):
    """Boundary ring of a layer with retraced corner spikes removed."""
    ring = [p for c in chains for p in c[:-1]]
    changed = True
    while changed and len(ring) > 3:
        changed = False
        n = len(ring)
        for i in range(n):
            if np.linalg.norm(ring[i - 1] - ring[(i + 1) % n]) < GEOM_TOL:
                for j in sorted((i, (i + 1) % n), reverse=True):
                    ring.pop(j)
                changed = True
                break
    return np.array(ring)


def _arc_params(chain):
    steps = np.linalg.norm(np.diff(chain, axis=0), axis=1)
    s = np.concatenate([[0.0], np.cumsum(steps)])
    return s / s[-1]


def _zip_moves(pl, ph):
    """Monotone zip path over two parameter chains.

    0 advances the lower chain, 1 the upper; on equal parameters the
    lower chain advances first.
    """
    i = j = 0
    moves = []
    while i < len(pl) - 1 or j < len(ph) - 1:
        if j == len(ph) - 1 or (i < len(pl) - 1 and pl[i + 1] <= ph[j + 1]):
            moves.append(0)
            i += 1
        else:
            moves.append(1)
            j += 1
    return moves


def _wall_from_moves(lo_chain, z_lo, hi_chain, z_hi, moves):
    lo = [np.append(p, z_lo) for p in lo_chain]
    hi = [np.append(p, z_hi) for p in hi_chain]
    i = j = 0
    triangles = []
    for m in moves:
        if m == 0:
            triangles.append((lo[i], lo[i + 1], hi[j]))
            i += 1
        else:
            triangles.append((lo[i], hi[j + 1], hi[j]))
            j += 1
    return triangles


def _wall_triangles(lo_chain, z_lo, hi_chain, z_hi):
    """Zip two matched boundary chains into wall triangles."""
    moves = _zip_moves(_arc_params(lo_chain), _arc_params(hi_chain))
    return _wall_from_moves(lo_chain, z_lo, hi_chain, z_hi, moves)


def split_pinched_ring(ring):
    """Split a closed ring at repeated vertices into simple sub-rings."""
    subs = []
    path = []
    pos = {}
    for p in np.asarray(ring, dtype=float):
        k = _key2(p)
        if k in pos:
            cut = pos[k]
            sub = path[cut:]
            for q in sub[1:]:
                pos.pop(_key2(q), None)
            subs.append(np.array(sub))
            path = path[:cut + 1]
        else:
            pos[k] = len(path)
            path.append(p)
    subs.append(np.array(path))
    return [s for s in subs if len(s) >= 3]


def _ring_is_convex(ring, sign):
    n = len(ring)
    for i in range(n):
        a, b, c = ring[i - 1], ring[i], ring[(i + 1) % n]
        u, w = b - a, c - b
        cr = (u[0] * w[1] - u[1] * w[0]) * sign
        if cr < -GEOM_TOL:
            return False
    return True


def _point_in_triangle(p, a, b, c, sign):
    """Closed-triangle membership; points on an edge block an ear too."""
    for u, w in ((a, b), (b, c), (c, a)):
        d = w - u
        cr = (d[0] * (p[1] - u[1]) - d[1] * (p[0] - u[0])) * sign
        if cr < -GEOM_TOL:
            return False
    return True


def _ear_clip(ring, sign):
    pts = [np.asarray(p, dtype=float) for p in ring]
    triangles = []
    while len(pts) > 3:
        n = len(pts)
        for i in range(n):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
            u, w = b - a, c - b
            cr = (u[0] * w[1] - u[1] * w[0]) * sign
            if cr < GEOM_TOL:
                continue
            others = [pts[j] for j in range(n)
                      if j not in (i - 1 if i > 0 else n - 1, i, (i + 1) % n)]
            if any(_point_in_triangle(p, a, b, c, sign) for p in others):
                continue
            triangles.append((a, b, c))
            pts.pop(i)
            break
        else:
            raise ValueError("cap triangulation failed")
    triangles.append(tuple(pts))
    return triangles


def _triangulate_cap(ring, corner_keys):
    """Triangulate one simple cap ring, preserving its orientation.

    Convex rings are fanned from the first source corner on the ring;
    other rings are ear-clipped at the lowest-index valid ear.
    """
    ring = np.asarray(ring, dtype=float)
    sign = 1.0 if polygon_area(ring) > 0 else -1.0
    if len(ring) == 3:
        return [tuple(ring)]
    if _ring_is_convex(ring, sign):
        origin = 0
        for i, p in enumerate(ring):
            if _key2(p) in corner_keys:
                origin = i
                break
        n = len(ring)
        return [(ring[origin], ring[(origin + 1 + t) % n],
                 ring[(origin + 2 + t) % n]) for t in range(n - 2)]
    return _ear_clip(ring, sign)


def _pair_reversed(pair, source):
    """Whether the pairing maps the rep edge onto the reversed partner."""
    n = len(source)
    image = pair.iso.apply(source[pair.rep])
    start = source[pair.partner]
    end = source[(pair.partner + 1) % n]
    return np.linalg.norm(image - start) > np.linalg.norm(image - end)


def _emit_walls(emit, lo_chains, z_lo, hi_chains, z_hi, pairs, source):
    """Wall strips for one pair of consecutive layers.

    With an edge pairing available, the zip path is computed on the rep
    edge and reused (mirrored if the pairing reverses orientation) on the
    partner edge, so paired walls are exact isometric images and the
    block keeps a constant cross-section area.
    """
    same = (len(lo_chains) == len(hi_chains) and
            all(a.shape == b.shape and np.abs(a - b).max() < GEOM_TOL
                for a, b in zip(lo_chains, hi_chains)))
    if same:
        # Identical layers bound a prism: build vertical walls over the
        # spike-free boundary ring so retraced segments carry no fins.
        ring = _layer_ring(lo_chains)
        n = len(ring)
        for i in range(n):
            seg = np.array([ring[i], ring[(i + 1) % n]])
            for tri in _wall_triangles(seg, z_lo, seg, z_hi):
                emit(tri)
        return
    if not pairs:
        for lo, hi in zip(lo_chains, hi_chains):
            for tri in _wall_triangles(lo, z_lo, hi, z_hi):
                emit(tri)
        return
    for pair in pairs:
        e = pair.rep
        moves = _zip_moves(_arc_params(lo_chains[e]), _arc_params(hi_chains[e]))
        for tri in _wall_from_moves(lo_chains[e], z_lo,
                                    hi_chains[e], z_hi, moves):
            emit(tri)
        if pair.self_paired:
            continue
        p = pair.partner
        if _pair_reversed(pair, source):
            # The reversed partner chain is the isometric image of the rep
            # chain in rep order, so the same moves reproduce the image
            # wall exactly; orientation flips along with the traversal.
            for tri in _wall_from_moves(lo_chains[p][::-1], z_lo,
                                        hi_chains[p][::-1], z_hi, moves):
                emit((tri[2], tri[1], tri[0]))
        else:
            for tri in _wall_from_moves(lo_chains[p], z_lo,
                                        hi_chains[p], z_hi, moves):
                emit(tri)


def _build_block(layers, heights, label, pairs=None):
    """Assemble walls between consecutive layers plus both caps."""
    source, _ = layers[0]
    corner_keys = {_key2(p) for p in source}
    pool = _VertexPool()
    faces = {}

    def emit(tri):
        idx = tuple(pool.add(p) for p in tri)
        if len(set(idx)) != 3:
            return
        low = idx.index(min(idx))
        canon = idx[low:] + idx[:low]
        mirror = (canon[0], canon[2], canon[1])
        # A retraced corner spike yields the same wall triangle from both
        # incident edges with opposite orientation; the pair cancels.
        if mirror in faces:
            del faces[mirror]
        else:
            faces[canon] = True

    for level in range(len(layers) - 1):
        _, lo_chains = layers[level]
        _, hi_chains = layers[level + 1]
        _emit_walls(emit, lo_chains, heights[level],
                    hi_chains, heights[level + 1], pairs, source)

    bottom_ring = _layer_ring(layers[0][1])
    top_ring = _layer_ring(layers[-1][1])
    bottom_parts = split_pinched_ring(bottom_ring[::-1])
    top_parts = split_pinched_ring(top_ring)
    z0, z1 = heights[0], heights[-1]
    for part in bottom_parts:
        for a, b, c in _triangulate_cap(part, corner_keys):
            emit((np.append(a, z0), np.append(b, z0), np.append(c, z0)))
    for part in top_parts:
        for a, b, c in _triangulate_cap(part, corner_keys):
            emit((np.append(a, z1), np.append(b, z1), np.append(c, z1)))

    used = sorted({i for f in faces for i in f})
    remap = {old: new for new, old in enumerate(used)}
    vertices = np.array([pool.points[i] for i in used])
    mesh = TriMesh(vertices, [tuple(remap[i] for i in f) for f in faces])
    if not mesh.is_closed() or mesh.euler_characteristic() != 2:
        raise ValueError("loft produced a non-watertight mesh")

    base_area = abs(polygon_area(bottom_ring))
    h = z1 - z0
    for frac in (0.25, 0.5, 0.75):
        polys = mesh_cross_section(mesh, z0 + frac * h)
        area = sum(abs(polygon_area(p)) for p in polys)
        if abs(area - base_area) > 1e-9:
            raise ValueError("self-intersecting side walls")

    return Block(mesh, [p[::-1] for p in bottom_parts], top_parts, h, label)


def _check_sources(layers):
    ref = layers[0][0]
    for src, chains in layers[1:]:
        if len(src) != len(ref) or np.abs(src - ref).max() > GEOM_TOL:
            raise ValueError("mismatched source domains")
        if len(chains) != len(layers[0][1]):
            raise ValueError("mismatched source domains")


def _domain_pairs(*objs):
    for obj in objs:
        if isinstance(obj, DeformedDomain):
            return obj.source.pairs
    return None


def loft(bottom, top, h, label=""):
    """Ruled block between two deformations of one source polygon."""
    if h <= 0:
        raise ValueError("height must be positive")
    layers = [_as_layer(bottom), _as_layer(top)]
    _check_sources(layers)
    return _build_block(layers, [0.0, float(h)], label,
                        pairs=_domain_pairs(bottom, top))


def double_loft(bottom, top, h, through_mid=True, label=""):
    """Block deformed twice: optionally through the flat source mid-plane."""
    if h <= 0:
        raise ValueError("height must be positive")
    lo = _as_layer(bottom)
    hi = _as_layer(top)
    pairs = _domain_pairs(bottom, top)
    if not through_mid:
        _check_sources([lo, hi])
        return _build_block([lo, hi], [0.0, float(h)], label, pairs=pairs)
    mid = _as_layer(lo[0])
    _check_sources([lo, mid, hi])
    return _build_block([lo, mid, hi], [0.0, h / 2.0, float(h)], label,
                        pairs=pairs)


def mirror_block(block, axis_x=0.0):
    """Partner block mirrored across the vertical plane x = axis_x."""
    m = np.eye(4)
    m[0, 0] = -1.0
    m[0, 3] = 2.0 * axis_x
    mesh = block.mesh.transformed(m)

    def flip(ring):
        out = ring.copy()
        out[:, 0] = 2.0 * axis_x - out[:, 0]
        return out[::-1]

    return Block(mesh, [flip(r) for r in block.bottom],
                 [flip(r) for r in block.top], block.height,
                 block.label + "_mirror")


def canonical_block(name):
    """Construct a canonical block by name from its edge assignment."""
    if name not in CANONICAL_BLOCKS:
        raise ValueError("unknown block: %r" % (name,))
    group, domain, assignment = canonical_assignment(name)
    deformed = apply_escher(domain, group, assignment)
    if group.name in ("p3", "p6"):
        h = LOZENGE_HEIGHT
    else:
        h = SQUARE_HEIGHT
    return loft(domain.polygon, deformed, h, label=name)


def canonical_block_pair(name):
    """A canonical block together with its reflected partner."""
    if name not in PAIRED_BLOCKS:
        raise ValueError("block %r has no reflected partner" % (name,))
    primary = canonical_block(name)
    return primary, mirror_block(primary)
