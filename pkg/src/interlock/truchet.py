"""Generalized Truchet tiles on the square lattice.

Tiles are unit squares subdivided into black and white triangles.  A
tiling is valid when every interior edge joins triangles of opposite
colours.  Valid tilings of bi- and quad-triangular tiles are counted by
a transfer matrix and are in bijection with proper 3-colourings of the
grid graph one larger in each direction, with the corner colour fixed.

Grid convention: tile (0, 0) is the top-left cell; row indices grow
downward.  Edge colour segments are parametrized along the tile's
counter-clockwise boundary traversal (bottom left-to-right, right
upward, top right-to-left, left downward).
"""

import numpy as np

BLACK = "B"
WHITE = "W"

BI = "bi"
QUAD = "quad"
OCTA_SYM = "octa_sym"
OCTA_ASYM = "octa_asym"

KINDS = (BI, QUAD, OCTA_SYM, OCTA_ASYM)
ORIENT_COUNT = {BI: 4, QUAD: 2, OCTA_SYM: 4, OCTA_ASYM: 4}

EDGES = ("bottom", "right", "top", "left")

_OPP = {BLACK: WHITE, WHITE: BLACK}


def _full(colour):
    return [(0.0, 1.0, colour)]


def _halves(first, second):
    return [(0.0, 0.5, first), (0.5, 1.0, second)]


# Per-edge colours for orientation 0 of each kind; other orientations
# are quarter-turn rotations.  Bi orientation 0 has its black triangle
# in the lower left, quad orientation 0 is black on top and bottom.
_BASE_COLOURS = {
    BI: {"bottom": _full(BLACK), "right": _full(WHITE),
         "top": _full(WHITE), "left": _full(BLACK)},
    QUAD: {"bottom": _full(BLACK), "right": _full(WHITE),
           "top": _full(BLACK), "left": _full(WHITE)},
    OCTA_SYM: {"bottom": _halves(BLACK, WHITE),
               "right": _halves(BLACK, WHITE),
               "top": _halves(BLACK, WHITE),
               "left": _halves(BLACK, WHITE)},
    OCTA_ASYM: {"bottom": _halves(WHITE, BLACK),
                "right": _halves(BLACK, WHITE),
                "top": _halves(BLACK, WHITE),
                "left": _halves(WHITE, BLACK)},
}


class Tile:
    """One square tile: a kind plus a quarter-turn orientation."""

    def __init__(self, kind, orient):
        if kind not in KINDS:
            raise ValueError("unknown tile kind: %r" % (kind,))
        if not 0 <= int(orient) < ORIENT_COUNT[kind]:
            raise ValueError("orientation %r out of range for %s"
                             % (orient, kind))
        self.kind = kind
        self.orient = int(orient)

    def __eq__(self, other):
        return (isinstance(other, Tile) and self.kind == other.kind
                and self.orient == other.orient)

    def __hash__(self):
        return hash((self.kind, self.orient))

    def __repr__(self):
        return "Tile(%r, %d)" % (self.kind, self.orient)


def boundary_colours(tile):
    """Colour segments of each edge, keyed by edge name.

    Each edge maps to a list of (start, end, colour) spans covering
    [0, 1] in the counter-clockwise traversal of the square.
    """
    base = _BASE_COLOURS[tile.kind]
    # Each orientation step turns the tile a quarter turn, so edge i of
    # the oriented tile shows the colours of base edge (i - orient);
    # the counter-clockwise traversal direction is preserved.
    out = {}
    for i, name in enumerate(EDGES):
        out[name] = list(base[EDGES[(i - tile.orient) % 4]])
    return out


def _edges_opposite(segs_a, segs_b):
    """Whether two coincident edges have opposite colours everywhere.

    Both segment lists run along their own tile's counter-clockwise
    traversal, so the shared edge is traversed in opposite directions:
    parameter t on one side meets 1 - t on the other.
    """
    flipped = [(1.0 - e, 1.0 - s, c) for s, e, c in segs_b]
    cuts = sorted({x for s, e, _ in segs_a for x in (s, e)}
                  | {x for s, e, _ in flipped for x in (s, e)})
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        mid = 0.5 * (lo + hi)
        ca = next(c for s, e, c in segs_a if s <= mid <= e)
        cb = next(c for s, e, c in flipped if s <= mid <= e)
        if ca != _OPP[cb]:
            return False
    return True


class Tiling:
    """A rectangular grid of tiles, row 0 at the top."""

    def __init__(self, tiles):
        self.tiles = [list(row) for row in tiles]
        self.rows = len(self.tiles)
        self.cols = len(self.tiles[0]) if self.rows else 0
        for row in self.tiles:
            if len(row) != self.cols:
                raise ValueError("ragged tile grid")

    def __eq__(self, other):
        return isinstance(other, Tiling) and self.tiles == other.tiles

    def __repr__(self):
        return "Tiling(%d x %d)" % (self.rows, self.cols)


def is_valid_tiling(tiling):
    """Whether every interior edge joins opposite-colour triangles."""
    for r in range(tiling.rows):
        for c in range(tiling.cols):
            here = boundary_colours(tiling.tiles[r][c])
            if c + 1 < tiling.cols:
                east = boundary_colours(tiling.tiles[r][c + 1])
                if not _edges_opposite(here["right"], east["left"]):
                    return False
            if r + 1 < tiling.rows:
                south = boundary_colours(tiling.tiles[r + 1][c])
                if not _edges_opposite(here["bottom"], south["top"]):
                    return False
    return True


def _candidates(kinds):
    tiles = []
    for kind in (BI, QUAD, OCTA_SYM, OCTA_ASYM):
        if kind in kinds:
            tiles.extend(Tile(kind, k) for k in range(ORIENT_COUNT[kind]))
    return tiles


def _compatible(tile, left, above):
    here = boundary_colours(tile)
    if left is not None:
        if not _edges_opposite(boundary_colours(left)["right"],
                               here["left"]):
            return False
    if above is not None:
        if not _edges_opposite(boundary_colours(above)["bottom"],
                               here["top"]):
            return False
    return True


def enumerate_tilings(n, m, kinds=(BI, QUAD), max_cells=16):
    """All valid n x m tilings over the given kinds, row-major order."""
    if n < 1 or m < 1:
        raise ValueError("grid dimensions must be positive")
    if n * m > max_cells:
        raise ValueError(
            "enumeration budget exceeded for %d x %d; "
            "use count_tilings for the count" % (n, m))
    options = _candidates(set(kinds))
    grid = [[None] * m for _ in range(n)]
    out = []

    def fill(pos):
        if pos == n * m:
            out.append(Tiling([row[:] for row in grid]))
            return
        r, c = divmod(pos, m)
        left = grid[r][c - 1] if c > 0 else None
        above = grid[r - 1][c] if r > 0 else None
        for tile in options:
            if _compatible(tile, left, above):
                grid[r][c] = tile
                fill(pos + 1)
        grid[r][c] = None

    fill(0)
    return out


def random_tiling(n, m, rng, kinds=(BI, QUAD)):
    """A uniformly seeded valid tiling found by randomized backtracking."""
    options = _candidates(set(kinds))
    grid = [[None] * m for _ in range(n)]

    def fill(pos):
        if pos == n * m:
            return True
        r, c = divmod(pos, m)
        left = grid[r][c - 1] if c > 0 else None
        above = grid[r - 1][c] if r > 0 else None
        order = [options[i] for i in rng.permutation(len(options))]
        for tile in order:
            if _compatible(tile, left, above):
                grid[r][c] = tile
                if fill(pos + 1):
                    return True
        grid[r][c] = None
        return False

    if not fill(0):
        raise ValueError("no valid tiling exists")
    return Tiling(grid)


def build_transfer_matrix(i):
    """Recursive 2^(i-1) transfer matrix of big integers."""
    if i < 1:
        raise ValueError("matrix index must be at least 1")
    m = [[1]]
    for _ in range(i - 1):
        size = len(m)
        t = [[m[c][r] for c in range(size)] for r in range(size)]
        top = [m[r] + t[r] for r in range(size)]
        bottom = [[0] * size + m[r] for r in range(size)]
        m = top + bottom
    return m


def _mat_mul(a, b):
    n = len(a)
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt]
            for row in a]


def count_tilings(n, m):
    """Exact number of valid n x m tilings of bi- and quad-tiles."""
    if n < 1 or m < 1:
        raise ValueError("grid dimensions must be positive")
    base = build_transfer_matrix(m + 1)
    size = len(base)
    sym = [[base[r][c] + base[c][r] for c in range(size)]
           for r in range(size)]
    power = [[1 if r == c else 0 for c in range(size)] for r in range(size)]
    e = n
    sq = sym
    while e:
        if e & 1:
            power = _mat_mul(power, sq)
        e >>= 1
        if e:
            sq = _mat_mul(sq, sq)
    return sum(sum(row) for row in power)


def _edge_delta(colour, black_means):
    """Colour difference across a grid edge from one incident triangle.

    black_means is the delta (1 or 2 mod 3) that makes this triangle
    black under the arithmetic edge rule.
    """
    return black_means if colour == BLACK else 3 - black_means


def tiling_to_colouring(tiling):
    """The unique proper grid 3-colouring of a valid bi/quad tiling.

    Colours are 0, 1, 2 with the top-left grid vertex fixed to 0.  A
    horizontal edge has its black triangle above exactly when the right
    colour exceeds the left by 1 mod 3; a vertical edge has black on
    the right exactly when the bottom exceeds the top by 1 mod 3.
    """
    for row in tiling.tiles:
        for tile in row:
            if tile.kind not in (BI, QUAD):
                raise ValueError("only bi and quad tiles admit a colouring")
    if not is_valid_tiling(tiling):
        raise ValueError("invalid tiling has no colouring")
    n, m = tiling.rows, tiling.cols
    colours = np.zeros((n + 1, m + 1), dtype=int)
    for j in range(m):
        below = boundary_colours(tiling.tiles[0][j])["top"][0][2]
        colours[0][j + 1] = (colours[0][j]
                             + _edge_delta(below, 2)) % 3
    for i in range(n):
        right = boundary_colours(tiling.tiles[i][0])["left"][0][2]
        colours[i + 1][0] = (colours[i][0] + _edge_delta(right, 1)) % 3
        for j in range(m):
            above = boundary_colours(tiling.tiles[i][j])["bottom"][0][2]
            colours[i + 1][j + 1] = (colours[i + 1][j]
                                     + _edge_delta(above, 1)) % 3
    return colours


def colouring_to_tiling(colours):
    """The valid bi/quad tiling encoded by a proper grid 3-colouring."""
    colours = np.asarray(colours, dtype=int)
    rows, cols = colours.shape
    if rows < 2 or cols < 2:
        raise ValueError("colouring must cover at least one tile")
    if (np.any(colours[:, 1:] == colours[:, :-1])
            or np.any(colours[1:, :] == colours[:-1, :])):
        raise ValueError("improper colouring: adjacent colours equal")
    tiles = []
    for i in range(rows - 1):
        row = []
        for j in range(cols - 1):
            tl, tr = colours[i][j], colours[i][j + 1]
            bl, br = colours[i + 1][j], colours[i + 1][j + 1]
            if tl == br and tr == bl:
                # Two colours: the quad tile whose black pair is read
                # off the top edge (black below iff right-left = 2).
                row.append(Tile(QUAD, 0 if (tr - tl) % 3 == 2 else 1))
            elif tl == br:
                # Diagonal joins the differing corners bl and tr; the
                # bottom edge decides which side is black.
                row.append(Tile(BI, 1 if (br - bl) % 3 == 1 else 3))
            elif tr == bl:
                row.append(Tile(BI, 0 if (br - bl) % 3 == 1 else 2))
            else:
                raise ValueError("improper colouring: no repeated corner")
        tiles.append(row)
    return Tiling(tiles)


def enumerate_grid_colourings(rows, cols, max_cells=25):
    """All proper 3-colourings with the top-left vertex fixed to 0."""
    if rows * cols > max_cells:
        raise ValueError(
            "colouring enumeration limited to %d vertices" % max_cells)
    grid = np.zeros((rows, cols), dtype=int)
    out = []

    def fill(pos):
        if pos == rows * cols:
            out.append(grid.copy())
            return
        i, j = divmod(pos, cols)
        choices = (0,) if pos == 0 else (0, 1, 2)
        for colour in choices:
            if j > 0 and grid[i][j - 1] == colour:
                continue
            if i > 0 and grid[i - 1][j] == colour:
                continue
            grid[i][j] = colour
            fill(pos + 1)

    fill(0)
    return out


def count_grid_colourings(rows, cols, max_cells=25):
    """Number of proper 3-colourings with the corner colour fixed."""
    if rows * cols > max_cells:
        raise ValueError(
            "colouring count limited to %d vertices" % max_cells)
    count = 0
    grid = np.zeros((rows, cols), dtype=int)

    def fill(pos):
        nonlocal count
        if pos == rows * cols:
            count += 1
            return
        i, j = divmod(pos, cols)
        choices = (0,) if pos == 0 else (0, 1, 2)
        for colour in choices:
            if j > 0 and grid[i][j - 1] == colour:
                continue
            if i > 0 and grid[i - 1][j] == colour:
                continue
            grid[i][j] = colour
            fill(pos + 1)

    fill(0)
    return count


def tiling_to_dict(tiling):
    """JSON-ready description of a tiling."""
    return {"rows": tiling.rows, "cols": tiling.cols,
            "tiles": [[{"kind": t.kind, "orient": t.orient} for t in row]
                      for row in tiling.tiles]}


def tiling_from_dict(data):
    tiles = [[Tile(cell["kind"], cell["orient"]) for cell in row]
             for row in data["tiles"]]
    tiling = Tiling(tiles)
    if tiling.rows != data["rows"] or tiling.cols != data["cols"]:
        raise ValueError("tile grid does not match declared shape")
    return tiling


def colouring_to_text(colours):
    """One line of digits per grid row."""
    return "\n".join("".join(str(int(c)) for c in row)
                     for row in np.asarray(colours, dtype=int))


def colouring_from_text(text):
    rows = [line.strip() for line in text.strip().splitlines()]
    return np.array([[int(ch) for ch in row] for row in rows], dtype=int)
