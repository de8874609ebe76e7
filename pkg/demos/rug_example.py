"""
Residual use graphs
===================

Nodes are resource theories ordered by inclusion of free states.  Paths
from the root are the orders in which residuals can be recycled.
"""

from pathlib import Path

from residual_distill import build_graph, enumerate_paths, is_chordal_urug, load_graph

g = load_graph(Path(__file__).with_name("rug_example.json"))
print("levels", g.levels)
print("paths ", enumerate_paths(g, 3))

# Explicit free sets give the edges by subset testing.
doc = {
    "root": "all",
    "resources": [
        {"name": "all", "free_set": [1, 2, 3]},
        {"name": "left", "free_set": [1, 2]},
        {"name": "right", "free_set": [1, 3]},
        {"name": "core", "free_set": [1]},
    ],
}
g = build_graph(doc)
print("levels", g.levels)
print("chordal", is_chordal_urug(g).is_chordal)

# Two incomparable sets above two incomparable singletons: the undirected
# graph has a chordless 4-cycle.
doc["resources"] = [
    {"name": "U", "free_set": [1, 2, 3, 4]},
    {"name": "a", "free_set": [1, 2, 3]},
    {"name": "b", "free_set": [1, 2, 4]},
    {"name": "c", "free_set": [1]},
    {"name": "d", "free_set": [2]},
]
doc["root"] = "U"
res = is_chordal_urug(build_graph(doc))
print("chordal", res.is_chordal, "witness", res.witness)
