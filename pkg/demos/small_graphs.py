"""Exact widths of a few named graphs and the balanced partition read off an
optimal sequence."""

from sparsetww import Graph, degeneracy, extract_partition, quotient, stww_exact

named = {
    "path P6": Graph.path(6),
    "cycle C7": Graph.cycle(7),
    "complete K5": Graph.complete(5),
    "Petersen": Graph.from_edges(10, [(i, (i + 1) % 5) for i in range(5)]
                                 + [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
                                 + [(i, i + 5) for i in range(5)]),
}

for name, g in named.items():
    res = stww_exact(g)
    part = extract_partition(g, res.witness, 3)
    sizes = sorted(len(b) for b in part.blocks)
    deg = degeneracy(quotient(g, part))[0]
    print(f"{name:12s} max degree {g.max_degree}  stww {res.stww}  "
          f"({res.nodes_explored} search nodes)  K=3 parts {sizes}, quotient degeneracy {deg}")
