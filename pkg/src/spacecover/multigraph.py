"""Multigraphs with loops and parallel edges, plus the structural helpers the solvers need."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from .gf2 import Gf2Matrix

__all__ = [
    "MultiGraph",
    "EdgeSeparation",
    "UNBREAKABLE",
    "incidence_matrix",
    "connected_components",
    "is_connected",
    "count_simple_cycles",
    "spanning_forest",
    "good_edge_separation",
]

CYCLE_COUNT_EDGE_CAP = 16
SEPARATION_EXACT_VERTEX_CAP = 20


class MultiGraph:
    """An undirected multigraph on vertices 0..n-1 with stable edge identifiers.

    Loops and parallel edges are allowed.  Removing an edge never renumbers
    the surviving edges.
    """

    def __init__(self, n: int, edges: Iterable[Tuple[int, int]] = ()):  # noqa: D107
        if n < 0:
            raise ValueError("negative vertex count")
        self.n = n
        self._edges: Dict[int, Tuple[int, int]] = {}
        self._next_id = 0
        for u, v in edges:
            self.add_edge(u, v)

    def add_edge(self, u: int, v: int) -> int:
        """Add an edge and return its stable identifier."""
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError("endpoint out of range: (%d, %d)" % (u, v))
        eid = self._next_id
        self._edges[eid] = (u, v)
        self._next_id += 1
        return eid

    def remove_edge(self, eid: int) -> None:
        del self._edges[eid]

    def has_edge(self, eid: int) -> bool:
        return eid in self._edges

    def endpoints(self, eid: int) -> Tuple[int, int]:
        return self._edges[eid]

    def edge_ids(self) -> List[int]:
        return sorted(self._edges)

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def edges(self) -> List[Tuple[int, Tuple[int, int]]]:
        return [(eid, self._edges[eid]) for eid in self.edge_ids()]

    def is_loop(self, eid: int) -> bool:
        u, v = self._edges[eid]
        return u == v

    def copy(self) -> "MultiGraph":
        g = MultiGraph(self.n)
        g._edges = dict(self._edges)
        g._next_id = self._next_id
        return g

    def without_edges(self, remove: Iterable[int]) -> "MultiGraph":
        """A copy with the given edge ids removed (ids of survivors unchanged)."""
        g = self.copy()
        for eid in set(remove):
            if eid in g._edges:
                g.remove_edge(eid)
        return g

    def incident(self, v: int) -> List[int]:
        return [eid for eid, (a, b) in self._edges.items() if a == v or b == v]

    def adjacency(self) -> Dict[int, List[Tuple[int, int]]]:
        """vertex -> list of (neighbor, edge id); a loop appears once."""
        adj: Dict[int, List[Tuple[int, int]]] = {v: [] for v in range(self.n)}
        for eid, (u, v) in self._edges.items():
            adj[u].append((v, eid))
            if u != v:
                adj[v].append((u, eid))
        return adj

    def induced(self, vertices: Iterable[int]) -> Tuple["MultiGraph", Dict[int, int], Dict[int, int]]:
        """Induced subgraph with relabeled vertices.

        Returns (subgraph, old vertex -> new vertex, new edge id -> old edge id).
        Edge ids in the subgraph are fresh; the mapping recovers originals.
        """
        verts = sorted(set(vertices))
        vmap = {old: new for new, old in enumerate(verts)}
        sub = MultiGraph(len(verts))
        emap: Dict[int, int] = {}
        for eid, (u, v) in self.edges():
            if u in vmap and v in vmap:
                new_eid = sub.add_edge(vmap[u], vmap[v])
                emap[new_eid] = eid
        return sub, vmap, emap

    def __repr__(self) -> str:
        return "MultiGraph(n=%d, m=%d)" % (self.n, self.num_edges)


@dataclass
class EdgeSeparation:
    """A 2-partition (X, Y) of the vertices with its crossing edge ids."""

    x: FrozenSet[int]
    y: FrozenSet[int]
    cross: Tuple[int, ...]


UNBREAKABLE = "unbreakable"


def incidence_matrix(g: MultiGraph) -> Gf2Matrix:
    """n x m incidence matrix over GF(2); columns follow sorted edge-id order.

    A loop yields a zero column (its endpoint appears twice; 1+1=0).
    """
    eids = g.edge_ids()
    row_bits = [0] * g.n
    for j, eid in enumerate(eids):
        u, v = g.endpoints(eid)
        if u != v:
            row_bits[u] |= 1 << j
            row_bits[v] |= 1 << j
    return Gf2Matrix(g.n, len(eids), row_bits)


def connected_components(g: MultiGraph, vertices: Optional[Iterable[int]] = None) -> List[Set[int]]:
    """Connected components as vertex sets; isolated vertices are singletons."""
    adj = g.adjacency()
    todo = set(range(g.n)) if vertices is None else set(vertices)
    comps: List[Set[int]] = []
    while todo:
        start = min(todo)
        comp = {start}
        stack = [start]
        todo.discard(start)
        while stack:
            v = stack.pop()
            for w, _ in adj[v]:
                if w in todo:
                    todo.discard(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(comp)
    return comps


def is_connected(g: MultiGraph) -> bool:
    return len(connected_components(g)) <= 1


def count_simple_cycles(g: MultiGraph) -> int:
    """Number of simple cycles; a loop and a pair of parallel edges each count as one.

    A set of edges forms a simple cycle iff it is connected and every incident
    vertex has degree exactly 2 (a loop contributes 2 to its vertex).
    """
    eids = g.edge_ids()
    if len(eids) > CYCLE_COUNT_EDGE_CAP:
        raise ValueError("cycle counting capped at %d edges" % CYCLE_COUNT_EDGE_CAP)
    count = 0
    for size in range(1, len(eids) + 1):
        for subset in itertools.combinations(eids, size):
            deg: Dict[int, int] = {}
            for eid in subset:
                u, v = g.endpoints(eid)
                deg[u] = deg.get(u, 0) + 1
                deg[v] = deg.get(v, 0) + 1
            if any(d != 2 for d in deg.values()):
                continue
            # connectivity of the edge subset
            verts = set(deg)
            adj: Dict[int, Set[int]] = {v: set() for v in verts}
            for eid in subset:
                u, v = g.endpoints(eid)
                adj[u].add(v)
                adj[v].add(u)
            start = next(iter(verts))
            seen = {start}
            stack = [start]
            while stack:
                v = stack.pop()
                for w in adj[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            if seen == verts:
                count += 1
    return count


def spanning_forest(g: MultiGraph) -> Set[int]:
    """Greedy maximal acyclic edge set, lowest edge id first."""
    parent = list(range(g.n))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    forest: Set[int] = set()
    for eid in g.edge_ids():
        u, v = g.endpoints(eid)
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            forest.add(eid)
    return forest


def _side_ok(g: MultiGraph, side: Set[int]) -> bool:
    return len(connected_components(g, side)) == 1 if side else False


def good_edge_separation(g: MultiGraph, q: int, p: int, seed: int = 0):
    """A (q,p)-good edge separation of a connected g, or UNBREAKABLE.

    Both sides must be connected and larger than q, with at most p crossing
    edges.  Exact subset search up to SEPARATION_EXACT_VERTEX_CAP vertices;
    beyond that a verified randomized contraction search is used and an
    UNBREAKABLE verdict is best-effort.
    """
    if not is_connected(g):
        raise ValueError("good_edge_separation requires a connected graph")
    n = g.n
    if n <= 2 * q:
        return UNBREAKABLE

    def check(side: Set[int]):
        other = set(range(n)) - side
        if len(side) <= q or len(other) <= q:
            return None
        if not (_side_ok(g, side) and _side_ok(g, other)):
            return None
        cross = tuple(eid for eid, (u, v) in g.edges()
                      if (u in side) != (v in side))
        if len(cross) > p:
            return None
        return EdgeSeparation(frozenset(side), frozenset(other), cross)

    if n <= SEPARATION_EXACT_VERTEX_CAP:
        # vertex 0 on the X side w.l.o.g.; enumerate the rest
        rest = list(range(1, n))
        for mask in range(1 << (n - 1)):
            side = {0} | {rest[i] for i in range(n - 1) if (mask >> i) & 1}
            sep = check(side)
            if sep is not None:
                return sep
        return UNBREAKABLE

    import random

    rng = random.Random(seed)
    eids = g.edge_ids()
    for _ in range(2000):
        # Karger-style contraction down to two supernodes
        parent = list(range(n))

        def find(v: int) -> int:
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        groups = n
        order = eids[:]
        rng.shuffle(order)
        for eid in order:
            if groups == 2:
                break
            u, v = g.endpoints(eid)
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                groups -= 1
        side = {v for v in range(n) if find(v) == find(0)}
        sep = check(side)
        if sep is not None:
            return sep
    return UNBREAKABLE
