"""Draw a random mixed tiling, convert it to its corner colouring,
assemble the matching blocks, and verify the space-filling property.

Usage: python demos/random_mosaic.py [n] [seed]
"""

import sys

import numpy as np

from interlock.assembly import tiling_to_assembly, verify_space_filling
from interlock.cli import diagram_svg
from interlock.truchet import colouring_to_text, random_tiling, \
    tiling_to_colouring


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 7
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 42
    rng = np.random.default_rng(seed)
    tiling = random_tiling(n, n, rng)

    print("corner colouring:")
    print(colouring_to_text(tiling_to_colouring(tiling)))

    assembly = tiling_to_assembly(tiling)
    report = verify_space_filling(assembly, seed=seed)
    print("placements: %d (frame %d)"
          % (len(assembly.placements), len(assembly.frame)))
    print("space filling: %s (deficit %.2e, overlap %.2e)"
          % ("pass" if report["pass"] else "fail",
             report["deficit"], report["max_overlap"]))

    out = "mosaic_%dx%d_seed%d.svg" % (n, n, seed)
    with open(out, "w") as stream:
        stream.write(diagram_svg(assembly))
    print("top view written to", out)


if __name__ == "__main__":
    main()
