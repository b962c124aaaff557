"""Assemble a decorated lozenge tiling of a hexagon and both snub-square
variants, verifying each and exporting top-view diagrams.

Usage: python demos/lozenge_and_snub.py [seed]
"""

import sys

import numpy as np

from interlock.assembly import snub_square_assembly, tiling_to_assembly, \
    verify_space_filling
from interlock.cli import diagram_svg
from interlock.lozenge import count_lozenge_tilings, random_decoration, \
    random_lozenge_tiling


def show(label, assembly, seed=0):
    report = verify_space_filling(assembly, seed=seed)
    print("%s: %d placements, frame %d, %s (deficit %.2e)"
          % (label, len(assembly.placements), len(assembly.frame),
             "pass" if report["pass"] else "fail", report["deficit"]))
    out = "%s.svg" % label
    with open(out, "w") as stream:
        stream.write(diagram_svg(assembly))
    print("  diagram written to", out)


def main():
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 7
    rng = np.random.default_rng(seed)

    print("side-2 hexagon admits %d lozenge tilings"
          % count_lozenge_tilings(2, 2, 2))
    tiling = random_lozenge_tiling(2, 2, 2, rng)
    decoration = random_decoration(tiling.polygons(), rng)
    show("hexagon_assembly", tiling_to_assembly((tiling, decoration)),
         seed)

    for variant in (1, 2):
        show("snub_variant_%d" % variant,
             snub_square_assembly(2, variant), seed)


if __name__ == "__main__":
    main()
