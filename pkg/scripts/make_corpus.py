"""Write every connected graph on 1..7 vertices (one per isomorphism class) as graph6.

The source is the NetworkX graph atlas, which lists all graphs with up to
seven vertices. Usage: python scripts/make_corpus.py tests/data/connected_le7.g6
"""

import sys

import networkx as nx


def main(out_path):
    count = 0
    with open(out_path, "wb") as fh:
        for g in nx.graph_atlas_g():
            if g.number_of_nodes() == 0 or not nx.is_connected(g):
                continue
            fh.write(nx.to_graph6_bytes(g, header=False))
            count += 1
    print(f"wrote {count} graphs to {out_path}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "connected_le7.g6")
