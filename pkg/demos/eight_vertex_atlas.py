"""Materialize a connected 8-vertex graph collection as .edges files.

The 8-vertex benchmark family's statistics are means over all 11117
connected 8-vertex graphs. Enumerating those needs nauty's geng; this
helper uses it when available (`geng -c 8` emits graph6 lines, decoded
with networkx) and otherwise falls back to a seeded random sample so
the downstream commands still have a directory to run on.

Run: python3 demos/eight_vertex_atlas.py [out_dir]

Then, for example:
  maqaoa sweep --graphs <out_dir> --ansatz qaoa:1 --ansatz ma \
      --out runs/atlas --seeds 100
  maqaoa report --out runs/atlas --table gap
"""

import os
import shutil
import subprocess
import sys

from maqaoa import is_connected, make_graph, random_gnp_connected, write_edge_list

out_dir = sys.argv[1] if len(sys.argv) > 1 else "runs/atlas-graphs"
os.makedirs(out_dir, exist_ok=True)


def from_geng() -> int:
    import networkx as nx

    proc = subprocess.run(["geng", "-c", "8"], capture_output=True, check=True)
    count = 0
    for line in proc.stdout.splitlines():
        if not line:
            continue
        gx = nx.from_graph6_bytes(line)
        g = make_graph(8, [(int(u), int(v)) for u, v in gx.edges()])
        with open(os.path.join(out_dir, f"atlas8-{count:05d}.edges"), "w") as fh:
            fh.write(write_edge_list(g))
        count += 1
    return count


def from_sample(count: int = 300) -> int:
    for i in range(count):
        g = random_gnp_connected(8, 0.5, [818, i])
        assert is_connected(g)
        with open(os.path.join(out_dir, f"sample8-{i:04d}.edges"), "w") as fh:
            fh.write(write_edge_list(g))
    return count


if shutil.which("geng"):
    n = from_geng()
    print(f"wrote the full enumeration: {n} connected 8-vertex graphs "
          f"to {out_dir}/")
else:
    n = from_sample()
    print(f"geng (nauty) not found; wrote a seeded random sample of {n} "
          f"connected 8-vertex graphs to {out_dir}/ instead")
    print("for the full 11117-graph enumeration install nauty and rerun")
