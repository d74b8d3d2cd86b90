"""Tour of the classification layer: parsing, paths, traversal, slicing.

Loads the bundled classification sample, walks the decoded tree, and shows
how depth markers in raw titles become full root-to-node paths, how the
breadth-first ordering used by the charts looks, and what a depth-limited
slice does to codes sitting below the cut.

    python demos/01_taxonomy_tour.py
"""

from pathlib import Path

from riskatlas import load_taxonomy

DATA = Path(__file__).parent / "data"


def main():
    taxonomy = load_taxonomy(
        DATA / "classification.tsv",
        stop_title="External causes of morbidity or mortality",
    )
    print(f"parsed {len(taxonomy)} nodes, "
          f"{len(taxonomy.coded_diseases())} coded diseases\n")

    print("tree (document order):")
    for node in taxonomy.nodes:
        code = node.code or "    "
        print(f"  {code:>5}  {'  ' * node.depth}{node.title}")

    print("\nfull path of every coded disease:")
    for code, node_id in sorted(taxonomy.code_index.items()):
        print(f"  {code}: {' > '.join(taxonomy.node(node_id).path)}")

    print("\nbreadth-first order (chart ordering):")
    for node_id in taxonomy.bfs_order:
        node = taxonomy.node(node_id)
        print(f"  depth {node.depth}: {node.title}")

    print("\nslicing the respiratory branch to 2 levels:")
    branch = next(n.node_id for n in taxonomy.nodes
                  if n.title == "Diseases of the respiratory system")
    tree_slice = taxonomy.truncate_to_depth(branch, max_levels=2)
    for node_id in tree_slice.nodes:
        attributed = sorted(tree_slice.attributed[node_id])
        print(f"  {taxonomy.node(node_id).title}: carries codes {attributed}")


if __name__ == "__main__":
    main()
