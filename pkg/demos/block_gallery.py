"""Export every canonical block as a mesh and print its statistics.

Usage: python demos/block_gallery.py [output-dir]
"""

import sys
from pathlib import Path

from interlock.blocks import CANONICAL_BLOCKS, canonical_block
from interlock.cli import write_mesh
from interlock.euclid import polygon_area


def main():
    out_dir = Path(sys.argv[1] if len(sys.argv) > 1 else "block_meshes")
    out_dir.mkdir(parents=True, exist_ok=True)
    print("%-22s %8s %8s %8s %8s" % ("block", "verts", "faces", "volume",
                                     "base"))
    for name in CANONICAL_BLOCKS:
        block = canonical_block(name)
        path = out_dir / ("%s.obj" % name)
        with path.open("w") as stream:
            write_mesh(block.mesh, stream)
        base = sum(polygon_area(r) for r in block.bottom)
        print("%-22s %8d %8d %8.4f %8.4f"
              % (name, len(block.mesh.vertices), len(block.mesh.faces),
                 block.volume(), base))
    print("meshes written to", out_dir)


if __name__ == "__main__":
    main()
