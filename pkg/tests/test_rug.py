import json

import networkx as nx
import numpy as np
import pytest

from families import laminar_family_doc, random_family_doc
from residual_distill.exceptions import CycleError, DomainError, ValidationError
from residual_distill.rug import (
    UNREACHABLE,
    build_graph,
    enumerate_paths,
    is_chordal,
    is_chordal_urug,
    levels,
    load_graph,
    node_indices,
    transitive_closure,
)


def doc(resources, inclusions=(), root=None):
    res = [{"name": n, "free_set": s} for n, s in resources]
    return {"root": root or res[0]["name"], "resources": res, "inclusions": [list(p) for p in inclusions]}


CHAIN = doc([("A", [1, 2, 3]), ("B", [1, 2]), ("C", [1])])
DIAMOND = doc([("root", [1, 2, 3]), ("n1", [1, 2]), ("n2", [1, 3]), ("n3", [1])])


def test_chain():
    g = build_graph(CHAIN)
    assert g.edges == {("A", "B"), ("B", "C"), ("A", "C")}
    assert [g.levels[n] for n in "ABC"] == [0, 1, 2]


def test_diamond_longest_path():
    g = build_graph(DIAMOND)
    assert g.levels == {"root": 0, "n1": 1, "n2": 1, "n3": 2}
    assert ("root", "n3") in g.edges


def test_single_node():
    g = build_graph(doc([("only", [1])]))
    assert g.levels == {"only": 0}
    assert enumerate_paths(g, 5) == [["only"]]


def test_declared_cycle_rejected():
    d = doc([("A", None), ("B", None)], [("A", "B"), ("B", "A")])
    with pytest.raises(CycleError) as exc:
        build_graph(d)
    assert set(exc.value.nodes) >= {"A", "B"}


def test_longer_declared_cycle_cites_nodes():
    d = doc([("A", None), ("B", None), ("C", None)], [("A", "B"), ("B", "C"), ("C", "A")])
    with pytest.raises(CycleError) as exc:
        build_graph(d)
    assert set(exc.value.nodes) == {"A", "B", "C"}


def test_equal_sets_rejected():
    with pytest.raises(CycleError) as exc:
        build_graph(doc([("A", [1, 2]), ("B", [2, 1])]))
    assert set(exc.value.nodes) == {"A", "B"}


def test_self_inclusion_rejected():
    with pytest.raises(CycleError):
        build_graph(doc([("A", None)], [("A", "A")]))


@pytest.mark.parametrize(
    "bad",
    [
        "not a dict",
        {"root": "A"},
        doc([("A", [1]), ("A", [2])]),
        doc([("A", [1])], root="Z"),
        doc([("A", [1])], [("A", "Q")]),
        doc([("A", [1]), ("B", [1, 2])], [("A", "B")]),  # contradicts the sets
        {"root": "A", "resources": [{"name": "A", "free_set": "abc"}]},
        {"root": "A", "resources": [{"name": "A"}], "inclusions": [["A"]]},
    ],
)
def test_validation_errors(bad):
    with pytest.raises(ValidationError):
        build_graph(bad)


def test_mixed_declared_and_explicit():
    d = doc([("key", [1, 2, 3]), ("prand", None), ("sub", [1])], [("key", "prand"), ("prand", "sub")])
    g = build_graph(d)
    assert ("key", "sub") in g.edges
    assert g.levels == {"key": 0, "prand": 1, "sub": 2}


def test_unreachable_level():
    d = doc([("A", None), ("B", None), ("C", None)], [("A", "B")])
    assert build_graph(d).levels["C"] == UNREACHABLE


def test_metadata_kept():
    d = {"root": "A", "resources": [{"name": "A", "free_set": [1], "free_ops": "LOCC"}]}
    assert build_graph(d).node("A").meta == {"free_ops": "LOCC"}


def test_levels_examples():
    g = build_graph(CHAIN)
    assert levels(g) == {"A": 0, "B": 1, "C": 2}


def test_node_indices():
    idx = node_indices(build_graph(DIAMOND))
    assert idx == {"root": (1, 0), "n1": (1, 1), "n2": (2, 1), "n3": (1, 2)}


def test_paths_chain():
    assert enumerate_paths(build_graph(CHAIN), 3) == [["A"], ["A", "B"], ["A", "B", "C"], ["A", "C"]]
    assert enumerate_paths(build_graph(CHAIN), 1) == [["A"]]
    for bad in (0, -1):
        with pytest.raises(DomainError):
            enumerate_paths(build_graph(CHAIN), bad)


def test_paths_key_to_randomness():
    d = doc([("key", None), ("prand", None)], [("key", "prand")])
    assert enumerate_paths(build_graph(d), 2) == [["key"], ["key", "prand"]]


def test_load_graph(tmp_path):
    p = tmp_path / "g.json"
    p.write_text(json.dumps(CHAIN))
    assert load_graph(p).levels["C"] == 2
    p.write_text("{not json")
    with pytest.raises(ValidationError):
        load_graph(p)


# --- chordality ---------------------------------------------------------------

def test_triangle_chordal():
    adj = {"a": {"b", "c"}, "b": {"a", "c"}, "c": {"a", "b"}}
    res = is_chordal(adj)
    assert res.is_chordal and sorted(res.ordering) == ["a", "b", "c"]


def test_four_cycle_not_chordal():
    adj = {0: {1, 3}, 1: {0, 2}, 2: {1, 3}, 3: {2, 0}}
    res = is_chordal(adj)
    assert not res.is_chordal
    assert len(res.witness) == 4 and set(res.witness) == {0, 1, 2, 3}


def _is_chordless_cycle(adj, cyc):
    k = len(cyc)
    if k < 4 or len(set(cyc)) != k:
        return False
    for i in range(k):
        for j in range(i + 1, k):
            adjacent = (j == i + 1) or (i == 0 and j == k - 1)
            if (cyc[j] in adj[cyc[i]]) != adjacent:
                return False
    return True


def test_chordality_matches_networkx(rng):
    for _ in range(300):
        n = int(rng.integers(1, 12))
        g = nx.gnp_random_graph(n, float(rng.uniform(0.1, 0.7)), seed=int(rng.integers(1 << 30)))
        adj = {v: set(g[v]) for v in g}
        res = is_chordal(adj)
        assert res.is_chordal == nx.is_chordal(g)
        if res.is_chordal:
            pos = {v: i for i, v in enumerate(res.ordering)}
            for v in adj:
                later = [u for u in adj[v] if pos[u] > pos[v]]
                assert all(b in adj[a] for a in later for b in later if a != b)
        else:
            assert _is_chordless_cycle(adj, res.witness)


def test_crown_family_is_not_chordal():
    # two incomparable sets over two incomparable singletons give a chordless 4-cycle
    d = doc([("U", [1, 2, 3, 4]), ("a", [1, 2, 3]), ("b", [1, 2, 4]), ("c", [1]), ("d", [2])])
    res = is_chordal_urug(build_graph(d))
    assert not res.is_chordal
    assert set(res.witness) == {"a", "b", "c", "d"}


def test_laminar_families_are_chordal(rng):
    for _ in range(100):
        g = build_graph(laminar_family_doc(rng))
        assert is_chordal_urug(g).is_chordal


def test_random_families_structure(rng):
    for _ in range(100):
        g = build_graph(random_family_doc(rng))
        assert g.edges == transitive_closure(g.names, g.edges)
        assert not any((v, u) in g.edges for u, v in g.edges)
        for u, v in g.edges:
            assert g.node(v).free_set < g.node(u).free_set
            assert g.levels[v] >= g.levels[u] + 1
        dg = nx.DiGraph(list(g.edges))
        dg.add_nodes_from(g.names)
        assert nx.is_directed_acyclic_graph(dg)
        assert is_chordal_urug(g).is_chordal == nx.is_chordal(dg.to_undirected())


def test_levels_match_networkx_longest_path(rng):
    for _ in range(50):
        g = build_graph(random_family_doc(rng, n_sets=15))
        dg = nx.DiGraph(list(g.edges))
        dg.add_nodes_from(g.names)
        for v in g.names:
            if v == g.root:
                continue
            lengths = [len(p) - 1 for p in nx.all_simple_paths(dg, g.root, v)]
            assert g.levels[v] == (max(lengths) if lengths else UNREACHABLE)


def test_paths_are_inclusion_chains(rng):
    g = build_graph(random_family_doc(rng, n_sets=10, universe=5))
    for path in enumerate_paths(g, 4):
        assert len(path) <= 4 and path[0] == g.root
        for u, v in zip(path, path[1:]):
            assert g.node(v).free_set < g.node(u).free_set
