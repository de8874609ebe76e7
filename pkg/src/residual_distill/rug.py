"""Residual use graphs.

Nodes are resource theories; an edge ``i -> j`` says the free states of
``j`` are a proper subset of those of ``i``, so the residual of distilling
``i`` may feed a distillation of ``j``.  Inclusion is transitive and strict,
so a valid graph is a transitively closed DAG.  The level of a node is the
length of the longest directed path reaching it from the root.

Graph documents are JSON objects::

    {"root": "key",
     "resources": [{"name": "key", "free_set": [1, 2, 3]},
                   {"name": "prand", "free_set": null}],
     "inclusions": [["key", "prand"]]}

``free_set`` may be a list of element ids (inclusions are then derived by
subset testing) or ``null`` (only declared inclusions apply).  Declared
inclusions between nodes that both carry explicit sets must agree with them.
Any extra keys on a resource are kept as metadata, e.g. a description of the
free operations; they are not interpreted.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .exceptions import CycleError, DomainError, ValidationError

UNREACHABLE = "unreachable"


@dataclass(frozen=True)
class ResourceNode:
    name: str
    free_set: Optional[frozenset] = None
    meta: dict = field(default_factory=dict, compare=False, hash=False)


@dataclass
class RugGraph:
    nodes: list
    edges: set
    root: str
    levels: dict = field(default_factory=dict)

    @property
    def names(self) -> list[str]:
        return [n.name for n in self.nodes]

    def node(self, name: str) -> ResourceNode:
        for n in self.nodes:
            if n.name == name:
                return n
        raise KeyError(name)

    def successors(self, name: str) -> list[str]:
        return sorted(v for u, v in self.edges if u == name)

    def undirected(self) -> dict:
        adj = {n: set() for n in self.names}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


# --------------------------------------------------------------------------
# construction


def _topological_order(names: list[str], edges: set) -> list[str]:
    """Kahn's algorithm with lexicographic tie-breaking; raises on cycles."""
    indeg = {n: 0 for n in names}
    succ = {n: [] for n in names}
    for u, v in edges:
        succ[u].append(v)
        indeg[v] += 1
    ready = sorted(n for n in names if indeg[n] == 0)
    order = []
    while ready:
        u = ready.pop(0)
        order.append(u)
        for v in sorted(succ[u]):
            indeg[v] -= 1
            if indeg[v] == 0:
                ready.append(v)
        ready.sort()
    if len(order) != len(names):
        cyc = _find_cycle(names, edges)
        raise CycleError(f"inclusions form a cycle: {' -> '.join(cyc)}", cyc)
    return order


def _find_cycle(names: list[str], edges: set) -> list[str]:
    succ = {n: sorted(v for u, v in edges if u == n) for n in names}
    colour = dict.fromkeys(names, 0)
    stack: list[str] = []

    def visit(u):
        colour[u] = 1
        stack.append(u)
        for v in succ[u]:
            if colour[v] == 1:
                return stack[stack.index(v):] + [v]
            if colour[v] == 0:
                found = visit(v)
                if found:
                    return found
        stack.pop()
        colour[u] = 2
        return None

    for n in sorted(names):
        if colour[n] == 0:
            found = visit(n)
            if found:
                return found
    return []


def transitive_closure(names: Iterable[str], edges: set) -> set:
    names = list(names)
    reach = {n: {v for u, v in edges if u == n} for n in names}
    for k in names:
        for i in names:
            if k in reach[i]:
                reach[i] |= reach[k]
    return {(u, v) for u in names for v in reach[u]}


def _parse_resources(doc: dict) -> list[ResourceNode]:
    try:
        raw = doc["resources"]
    except (KeyError, TypeError):
        raise ValidationError("graph document needs a 'resources' list") from None
    nodes, seen = [], set()
    for item in raw:
        if not isinstance(item, dict) or not isinstance(item.get("name"), str):
            raise ValidationError(f"malformed resource entry {item!r}")
        name = item["name"]
        if name in seen:
            raise ValidationError(f"duplicate resource name {name!r}")
        seen.add(name)
        fs = item.get("free_set")
        if fs is not None:
            if not isinstance(fs, list):
                raise ValidationError(f"free_set of {name!r} must be a list or null")
            fs = frozenset(fs)
        meta = {k: v for k, v in item.items() if k not in ("name", "free_set")}
        nodes.append(ResourceNode(name, fs, meta))
    return nodes


def build_graph(doc: dict) -> RugGraph:
    """Validate a graph document and return its closed, levelled graph.

    Raises
    ------
    ValidationError
        Malformed document, duplicate names, unknown endpoints, or a
        declared inclusion contradicting explicit free sets.
    CycleError
        A directed cycle among declared inclusions, or two nodes with equal
        explicit free sets.
    """
    if not isinstance(doc, dict):
        raise ValidationError("graph document must be a JSON object")
    nodes = _parse_resources(doc)
    by_name = {n.name: n for n in nodes}
    root = doc.get("root")
    if root not in by_name:
        raise ValidationError(f"root {root!r} is not a declared resource")

    edges = set()
    explicit = [n for n in nodes if n.free_set is not None]
    for i, a in enumerate(explicit):
        for b in explicit[i + 1:]:
            if a.free_set == b.free_set:
                raise CycleError(
                    f"resources {a.name!r} and {b.name!r} have equal free sets",
                    (a.name, b.name),
                )
            if b.free_set < a.free_set:
                edges.add((a.name, b.name))
            elif a.free_set < b.free_set:
                edges.add((b.name, a.name))

    for pair in doc.get("inclusions", []) or []:
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ValidationError(f"inclusion {pair!r} is not a [parent, child] pair")
        u, v = pair
        if u not in by_name or v not in by_name:
            raise ValidationError(f"inclusion {pair!r} names an unknown resource")
        if u == v:
            raise CycleError(f"self-inclusion on {u!r}", (u,))
        fu, fv = by_name[u].free_set, by_name[v].free_set
        if fu is not None and fv is not None and not fv < fu:
            raise ValidationError(f"inclusion {u!r} -> {v!r} contradicts their explicit free sets")
        edges.add((u, v))

    names = [n.name for n in nodes]
    _topological_order(names, edges)
    closed = transitive_closure(names, edges)
    for u, v in sorted(closed):
        fu, fv = by_name[u].free_set, by_name[v].free_set
        if fu is not None and fv is not None and not fv < fu:
            raise ValidationError(
                f"inclusion {u!r} -> {v!r} contradicts their explicit free sets"
            )
    g = RugGraph(nodes, closed, root)
    g.levels = levels(g)
    return g


def load_graph(path) -> RugGraph:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"cannot parse {path}: {exc}") from None
    return build_graph(doc)


# --------------------------------------------------------------------------
# analysis


def levels(g: RugGraph) -> dict:
    """Longest-path distance from the root, or ``"unreachable"``."""
    order = _topological_order(g.names, g.edges)
    dist = {n: None for n in g.names}
    dist[g.root] = 0
    for u in order:
        if dist[u] is None:
            continue
        for v in g.successors(u):
            if dist[v] is None or dist[v] < dist[u] + 1:
                dist[v] = dist[u] + 1
    return {n: (UNREACHABLE if d is None else d) for n, d in dist.items()}


def node_indices(g: RugGraph) -> dict:
    """``name -> (n, level)`` with ``n`` counting names in order within a level."""
    lv = g.levels or levels(g)
    out = {}
    for level in sorted({v for v in lv.values() if v != UNREACHABLE}):
        for i, name in enumerate(sorted(n for n, v in lv.items() if v == level), start=1):
            out[name] = (i, level)
    return out


@dataclass(frozen=True)
class ChordalityResult:
    is_chordal: bool
    ordering: Optional[list] = None  # perfect elimination ordering
    witness: Optional[list] = None  # chordless cycle, as a vertex sequence

    def __bool__(self):
        return self.is_chordal


def mcs_order(adj: dict) -> list:
    """Maximum cardinality search visit order (ties broken by name)."""
    weight = dict.fromkeys(adj, 0)
    left = set(adj)
    order = []
    while left:
        v = min(left, key=lambda n: (-weight[n], str(n)))
        order.append(v)
        left.remove(v)
        for u in adj[v]:
            if u in left:
                weight[u] += 1
    return order


def _chordless_cycle(adj: dict) -> Optional[list]:
    for v in sorted(adj, key=str):
        nbrs = sorted(adj[v], key=str)
        blocked = set(adj[v]) | {v}
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1:]:
                if b in adj[a]:
                    continue
                # shortest a-b path avoiding v and its other neighbours is induced
                allowed = lambda n: n in (a, b) or n not in blocked
                prev = {a: None}
                queue = deque([a])
                while queue and b not in prev:
                    u = queue.popleft()
                    for w in sorted(adj[u], key=str):
                        if w not in prev and allowed(w):
                            prev[w] = u
                            queue.append(w)
                if b in prev:
                    path = [b]
                    while prev[path[-1]] is not None:
                        path.append(prev[path[-1]])
                    return [v] + path[::-1]
    return None


def is_chordal(adj: dict) -> ChordalityResult:
    """Perfect-elimination test on an undirected adjacency mapping."""
    peo = mcs_order(adj)[::-1]
    pos = {v: i for i, v in enumerate(peo)}
    for v in peo:
        later = [u for u in adj[v] if pos[u] > pos[v]]
        if not later:
            continue
        parent = min(later, key=pos.__getitem__)
        if any(u != parent and u not in adj[parent] for u in later):
            return ChordalityResult(False, witness=_chordless_cycle(adj))
    return ChordalityResult(True, ordering=peo)


def is_chordal_urug(g: RugGraph) -> ChordalityResult:
    return is_chordal(g.undirected())


def enumerate_paths(g: RugGraph, max_len: int) -> list[list[str]]:
    """Directed paths from the root with at most ``max_len`` nodes, sorted."""
    if int(max_len) != max_len or max_len <= 0:
        raise DomainError(f"max_len must be a positive integer, got {max_len}")
    out = []

    def walk(path):
        out.append(list(path))
        if len(path) == max_len:
            return
        for v in g.successors(path[-1]):
            walk(path + [v])

    walk([g.root])
    return sorted(out)
