"""Problem instances: a multigraph, a perturbation matrix, terminal edges, and a budget."""

from __future__ import annotations

import random
from typing import Dict, Iterable, List, Optional, Tuple

from .binmatroid import BinaryMatroid
from .gf2 import Gf2Matrix, Gf2Vector, rank
from .multigraph import MultiGraph, incidence_matrix

__all__ = ["SpaceCoverInstance", "PrimalInstance", "DualInstance", "random_instance"]


class SpaceCoverInstance:
    """Shared state of both problem modes: (G, P, T, k) with A = I(G) + P.

    The columns of ``p`` follow the sorted edge-id order of ``graph`` at
    construction time; ``col_of`` maps edge ids to column indices.
    """

    mode = "base"

    def __init__(self, graph: MultiGraph, p: Gf2Matrix, terminals: Iterable[int], k: int):
        eids = graph.edge_ids()
        if p.rows != graph.n or p.cols != len(eids):
            raise ValueError("perturbation shape %dx%d does not match graph %dx%d"
                             % (p.rows, p.cols, graph.n, len(eids)))
        self.graph = graph
        self.p = p
        self.terminals = tuple(sorted(set(terminals)))
        for eid in self.terminals:
            if not graph.has_edge(eid):
                raise ValueError("terminal %d is not an edge" % eid)
        if k < 0:
            raise ValueError("negative budget")
        self.k = k
        self.col_of: Dict[int, int] = {eid: j for j, eid in enumerate(eids)}
        self._a: Optional[Gf2Matrix] = None

    @property
    def a_matrix(self) -> Gf2Matrix:
        if self._a is None:
            self._a = incidence_matrix(self.graph) ^ self.p
        return self._a

    @property
    def r(self) -> int:
        return rank(self.p)

    def matroid(self) -> BinaryMatroid:
        return BinaryMatroid(self.a_matrix)

    def p_column(self, eid: int) -> Gf2Vector:
        return self.p.column(self.col_of[eid])

    def a_column(self, eid: int) -> Gf2Vector:
        return self.a_matrix.column(self.col_of[eid])

    def edge_of_column(self, col: int) -> int:
        return self.graph.edge_ids()[col]

    def nonterminal_edges(self) -> List[int]:
        tset = set(self.terminals)
        return [eid for eid in self.graph.edge_ids() if eid not in tset]

    def restrict(self, keep_edges: Iterable[int], terminals: Optional[Iterable[int]] = None,
                 k: Optional[int] = None) -> "SpaceCoverInstance":
        """New instance keeping only the given edges (and their P columns)."""
        keep = set(keep_edges)
        graph = self.graph.without_edges(set(self.graph.edge_ids()) - keep)
        eids = graph.edge_ids()
        row_bits = []
        for i in range(self.p.rows):
            bits = 0
            for j, eid in enumerate(eids):
                bits |= self.p.row(i)[self.col_of[eid]] << j
            row_bits.append(bits)
        p = Gf2Matrix(self.p.rows, len(eids), row_bits)
        terms = self.terminals if terminals is None else tuple(sorted(set(terminals)))
        terms = tuple(e for e in terms if e in keep)
        return type(self)(graph, p, terms, self.k if k is None else k)

    def __repr__(self) -> str:
        return "%s(n=%d, m=%d, |T|=%d, k=%d)" % (
            type(self).__name__, self.graph.n, self.graph.num_edges,
            len(self.terminals), self.k)


class PrimalInstance(SpaceCoverInstance):
    """Cover terminal columns by the span of at most k non-terminal columns of A."""

    mode = "primal"


class DualInstance(SpaceCoverInstance):
    """Cover terminal columns in the dual of the matroid represented by A."""

    mode = "dual"


def random_instance(mode: str, n: int, m: int, r: int, num_terminals: int, k: int,
                    rng: random.Random, loop_prob: float = 0.1) -> SpaceCoverInstance:
    """Random connected-ish multigraph with P a sum of r random rank-1 matrices."""
    g = MultiGraph(n)
    for _ in range(m):
        if n == 1 or rng.random() < loop_prob:
            v = rng.randrange(n)
            g.add_edge(v, v)
        else:
            u, v = rng.sample(range(n), 2)
            g.add_edge(u, v)
    row_bits = [0] * n
    for _ in range(r):
        col_pat = rng.getrandbits(n)
        row_pat = rng.getrandbits(m)
        for i in range(n):
            if (col_pat >> i) & 1:
                row_bits[i] ^= row_pat
    p = Gf2Matrix(n, m, row_bits)
    eids = g.edge_ids()
    terms = rng.sample(eids, min(num_terminals, len(eids)))
    cls = PrimalInstance if mode == "primal" else DualInstance
    return cls(g, p, terms, k)
