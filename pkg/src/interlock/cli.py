"""Command-line front end for blocks, tilings, colourings, assemblies.

Subcommands construct block meshes, enumerate or count tilings, convert
tilings to and from grid colourings, and build or verify assemblies.
All output is deterministic for a fixed seed.  Exit codes: 0 success,
1 usage, 2 validation failure, 3 enumeration budget exceeded.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import assembly as asm
from .blocks import (
    CANONICAL_BLOCKS,
    PAIRED_BLOCKS,
    canonical_block,
    canonical_block_pair,
    loft,
)
from .escher import apply_escher, assignment_from_dict, canonical_assignment
from .euclid import TriMesh
from .lozenge import tiling_from_dict as lozenge_tiling_from_dict
from .truchet import (
    BI,
    OCTA_ASYM,
    OCTA_SYM,
    QUAD,
    colouring_from_text,
    colouring_to_text,
    colouring_to_tiling,
    count_tilings,
    enumerate_tilings,
    random_tiling,
    tiling_from_dict,
    tiling_to_colouring,
    tiling_to_dict,
)
from .wallpaper import make_group

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_BUDGET = 3

TOLERANCE_ENV = "INTERLOCK_TOL"

_KIND_NAMES = {"bi": BI, "quad": QUAD, "octa_sym": OCTA_SYM,
               "octa_asym": OCTA_ASYM}

_BUDGET_MARKERS = ("count_tilings", "count_lozenge_tilings", "budget")


def default_tolerance():
    raw = os.environ.get(TOLERANCE_ENV)
    return 1e-6 if raw is None else float(raw)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def write_mesh(mesh, stream):
    """Vertex/face text: "v x y z" then 1-based "f i j k" lines."""
    for v in mesh.vertices:
        stream.write("v %.15g %.15g %.15g\n" % tuple(v))
    for i, j, k in mesh.faces:
        stream.write("f %d %d %d\n" % (i + 1, j + 1, k + 1))


def read_mesh(stream):
    vertices = []
    faces = []
    for line in stream:
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            vertices.append([float(x) for x in parts[1:4]])
        elif parts[0] == "f":
            faces.append([int(x) - 1 for x in parts[1:4]])
    return TriMesh(np.asarray(vertices, dtype=float), faces)


def _write_text(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as stream:
            stream.write(text)


def _dump_json(data):
    return json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"


def _mesh_text(mesh):
    import io
    buf = io.StringIO()
    write_mesh(mesh, buf)
    return buf.getvalue()


def _build_named_block(name, height):
    group, domain, assignment = canonical_assignment(name)
    deformed = apply_escher(domain, group, assignment)
    if height is None:
        return canonical_block(name)
    return loft(domain.polygon, deformed, height, label=name)


def cmd_block(args):
    """Write the mesh of a canonical or user-described block."""
    if args.name in CANONICAL_BLOCKS:
        block = _build_named_block(args.name, args.height)
    elif os.path.exists(args.name):
        with open(args.name) as stream:
            data = json.load(stream)
        group, domain, assignment = assignment_from_dict(data)
        deformed = apply_escher(domain, group, assignment)
        height = args.height if args.height is not None else 1.0
        block = loft(domain.polygon, deformed, height,
                     label=data.get("label", "custom"))
    else:
        raise ValueError("unknown block %r and no such assignment file"
                         % (args.name,))
    _write_text(args.out, _mesh_text(block.mesh))
    return EXIT_OK


def _parse_kinds(text):
    kinds = []
    for token in text.split(","):
        token = token.strip().lower()
        if token not in _KIND_NAMES:
            raise ValueError("unknown tile kind %r" % (token,))
        kinds.append(_KIND_NAMES[token])
    return tuple(kinds)


def cmd_tiling(args):
    """Enumerate, count, or sample grid tilings."""
    kinds = _parse_kinds(args.kinds)
    if args.action == "count":
        if set(kinds) != {BI, QUAD}:
            raise ValueError("counting supports the bi,quad tile set only")
        _write_text(args.out, "%d\n" % count_tilings(args.n, args.m))
        return EXIT_OK
    if args.action == "enumerate":
        tilings = enumerate_tilings(args.n, args.m, kinds=kinds)
        payload = {"count": len(tilings),
                   "tilings": [tiling_to_dict(t) for t in tilings]}
        _write_text(args.out, _dump_json(payload))
        return EXIT_OK
    rng = np.random.default_rng(args.seed)
    tiling = random_tiling(args.n, args.m, rng, kinds=kinds)
    _write_text(args.out, _dump_json(tiling_to_dict(tiling)))
    return EXIT_OK


def _read_input(path):
    if path == "-":
        return sys.stdin.read()
    with open(path) as stream:
        return stream.read()


def cmd_colouring(args):
    """Convert between tilings and corner colourings."""
    text = _read_input(args.input)
    if args.direction == "to":
        tiling = tiling_from_dict(json.loads(text))
        colours = tiling_to_colouring(tiling)
        _write_text(args.out, colouring_to_text(colours) + "\n")
    else:
        tiling = colouring_to_tiling(colouring_from_text(text))
        _write_text(args.out, _dump_json(tiling_to_dict(tiling)))
    return EXIT_OK


def _parse_window(text):
    try:
        n, m = (int(part) for part in text.lower().split("x"))
    except Exception:
        raise ValueError("window must look like 6x6")
    if n < 1 or m < 1:
        raise ValueError("window sides must be positive")
    return [(-0.5, -0.5), (m - 0.5, -0.5), (m - 0.5, n - 0.5),
            (-0.5, n - 0.5)]


def _assembly_from_file(path):
    data = json.loads(_read_input(path))
    if "tiles" in data:
        return asm.tiling_to_assembly(tiling_from_dict(data))
    if "lozenges" in data:
        tiling = lozenge_tiling_from_dict(data)
        decorations = [(entry["split"], entry["decoration_orient"])
                       for entry in data["lozenges"]]
        return asm.tiling_to_assembly((tiling, decorations))
    raise ValueError("unrecognised tiling file: expected grid tiles or "
                     "decorated lozenges")


def _concatenated_mesh(assembly):
    vertices = []
    faces = []
    for p in assembly.placements:
        mesh = assembly.blocks[p.label].mesh.transformed(p.matrix())
        offset = len(vertices)
        vertices.extend(mesh.vertices.tolist())
        faces.extend((i + offset, j + offset, k + offset)
                     for i, j, k in mesh.faces)
    return TriMesh(np.asarray(vertices, dtype=float), faces)


def diagram_svg(assembly):
    rings = []
    for i, p in enumerate(assembly.placements):
        block = assembly.blocks[p.label]
        bottoms = [p.transform.apply(r) for r in block.bottom]
        tops = [p.transform.apply(r) for r in block.top]
        rings.append((bottoms, tops, i in assembly.frame))
    points = np.vstack([r for bs, ts, _f in rings for r in bs + ts])
    lo = points.min(axis=0) - 0.1
    hi = points.max(axis=0) + 0.1
    scale = 100.0

    def path(ring):
        coords = ["%.6g,%.6g" % (scale * (x - lo[0]), scale * (hi[1] - y))
                  for x, y in ring]
        return "M" + " L".join(coords) + " Z"

    width = scale * (hi[0] - lo[0])
    height = scale * (hi[1] - lo[1])
    parts = ['<svg xmlns="http://www.w3.org/2000/svg" '
             'width="%.6g" height="%.6g">' % (width, height)]
    for bottoms, _tops, is_frame in rings:
        stroke = "#cc0000" if is_frame else "#000000"
        stroke_width = 2.5 if is_frame else 1.0
        for ring in bottoms:
            parts.append('<path d="%s" fill="#ffffff" stroke="%s" '
                         'stroke-width="%.6g"/>'
                         % (path(ring), stroke, stroke_width))
    for _bottoms, tops, _is_frame in rings:
        for ring in tops:
            parts.append('<path d="%s" fill="#000000" fill-opacity="0.85" '
                         'stroke="none"/>' % (path(ring),))
    if assembly.region is not None:
        parts.append('<path d="%s" fill="none" stroke="#0044cc" '
                     'stroke-dasharray="6,4" stroke-width="1.5"/>'
                     % (path(assembly.region),))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_assembly(args):
    """Build an assembly from a tiling file or a group orbit."""
    if args.tiling is not None:
        assembly = _assembly_from_file(args.tiling)
    elif args.group and args.block and args.window:
        group = make_group(args.group)
        if args.block in PAIRED_BLOCKS:
            blocks = canonical_block_pair(args.block)
        else:
            blocks = canonical_block(args.block)
        assembly = asm.orbit_assembly(group, blocks,
                                      _parse_window(args.window))
    else:
        raise _UsageError("supply a tiling file or --group/--block/--window")

    status = EXIT_OK
    report = None
    if args.verify:
        tol = args.tol if args.tol is not None else default_tolerance()
        report = asm.verify_space_filling(assembly, tol=tol, seed=args.seed)
        status = EXIT_OK if report["pass"] else EXIT_VALIDATION

    if args.out:
        _write_text(args.out, _dump_json(asm.assembly_to_dict(assembly)))
    if args.mesh:
        _write_text(args.mesh, _mesh_text(_concatenated_mesh(assembly)))
    if args.diagram:
        _write_text(args.diagram, diagram_svg(assembly))
    if report is not None:
        lines = ["verify: %s" % ("pass" if report["pass"] else "fail")]
        for row in report["per_z"]:
            lines.append("z=%.6g deficit=%.3e max_overlap=%.3e"
                         % (row["z"], row["deficit"], row["max_overlap"]))
        sys.stdout.write("\n".join(lines) + "\n")
    elif not (args.out or args.mesh or args.diagram):
        sys.stdout.write(_dump_json(asm.assembly_to_dict(assembly)))
    return status


def build_parser():
    parser = _Parser(prog="interlock",
                     description="Interlocking block and tiling toolkit")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p_block = sub.add_parser("block", help="export a block mesh")
    p_block.add_argument("name",
                         help="canonical block name or assignment JSON file")
    p_block.add_argument("--height", type=float, default=None)
    p_block.add_argument("--out", default=None)
    p_block.set_defaults(func=cmd_block)

    p_tiling = sub.add_parser("tiling", help="enumerate/count/sample tilings")
    p_tiling.add_argument("action",
                          choices=("enumerate", "count", "random"))
    p_tiling.add_argument("n", type=int)
    p_tiling.add_argument("m", type=int)
    p_tiling.add_argument("--kinds", default="bi,quad")
    p_tiling.add_argument("--seed", type=int, default=0)
    p_tiling.add_argument("--out", default=None)
    p_tiling.set_defaults(func=cmd_tiling)

    p_col = sub.add_parser("colouring",
                           help="convert tilings to/from colourings")
    p_col.add_argument("direction", choices=("to", "from"))
    p_col.add_argument("input", help="input file or - for stdin")
    p_col.add_argument("--out", default=None)
    p_col.set_defaults(func=cmd_colouring)

    p_asm = sub.add_parser("assembly", help="build and verify assemblies")
    p_asm.add_argument("tiling", nargs="?", default=None,
                       help="tiling JSON file")
    p_asm.add_argument("--group", default=None)
    p_asm.add_argument("--block", default=None)
    p_asm.add_argument("--window", default=None, help="for example 6x6")
    p_asm.add_argument("--verify", action="store_true")
    p_asm.add_argument("--tol", type=float, default=None)
    p_asm.add_argument("--seed", type=int, default=0)
    p_asm.add_argument("--out", default=None)
    p_asm.add_argument("--mesh", default=None)
    p_asm.add_argument("--diagram", default=None)
    p_asm.set_defaults(func=cmd_assembly)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        sys.stderr.write("usage error: %s\n" % (exc,))
        return EXIT_USAGE
    if getattr(args, "func", None) is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except _UsageError as exc:
        sys.stderr.write("usage error: %s\n" % (exc,))
        return EXIT_USAGE
    except (ValueError, KeyError) as exc:
        message = str(exc)
        sys.stderr.write("error: %s\n" % (message,))
        if any(marker in message for marker in _BUDGET_MARKERS):
            return EXIT_BUDGET
        return EXIT_VALIDATION
    except OSError as exc:
        sys.stderr.write("error: %s\n" % (exc,))
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
