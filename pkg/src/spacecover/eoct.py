"""Exact edge odd cycle transversal (edge bipartization) via iterative compression."""

from __future__ import annotations

import itertools
from collections import deque
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from .multigraph import MultiGraph

__all__ = ["solve", "minimize"]

EOCT_K_CAP = 12


def _two_color(g: MultiGraph, edges: Set[int], removed: Set[int]) -> Optional[Dict[int, int]]:
    """Proper 2-coloring of (V(g), edges - removed), or None; isolated vertices get 0."""
    adj: Dict[int, List[int]] = {v: [] for v in range(g.n)}
    for eid in edges:
        if eid in removed:
            continue
        u, v = g.endpoints(eid)
        if u == v:
            return None
        adj[u].append(v)
        adj[v].append(u)
    color: Dict[int, int] = {}
    for start in range(g.n):
        if start in color:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in color:
                    color[w] = 1 - color[v]
                    stack.append(w)
                elif color[w] == color[v]:
                    return None
    return color


def _min_cut(g: MultiGraph, edges: Set[int], excluded: Set[int],
             sources: Set[int], sinks: Set[int]) -> Tuple[int, Set[int]]:
    """Min edge cut separating sources from sinks in (V, edges - excluded).

    Returns (cut value, source-side vertex set X).  Unit capacity per edge;
    parallel edges accumulate.
    """
    if not sources or not sinks:
        # nothing to separate: take full components around the forced side
        x = set(sources)
        if sources:
            adj: Dict[int, List[int]] = {v: [] for v in range(g.n)}
            for eid in edges:
                if eid in excluded:
                    continue
                u, v = g.endpoints(eid)
                adj[u].append(v)
                adj[v].append(u)
            stack = list(sources)
            while stack:
                v = stack.pop()
                for w in adj[v]:
                    if w not in x:
                        x.add(w)
                        stack.append(w)
        return 0, x
    cap: Dict[Tuple[int, int], int] = {}
    for eid in edges:
        if eid in excluded:
            continue
        u, v = g.endpoints(eid)
        if u == v:
            continue
        cap[(u, v)] = cap.get((u, v), 0) + 1
        cap[(v, u)] = cap.get((v, u), 0) + 1
    s, t = -1, -2
    big = g.num_edges + 1
    for v in sources:
        cap[(s, v)] = big
        cap[(v, s)] = 0
    for v in sinks:
        cap[(v, t)] = cap.get((v, t), 0) + big
        cap[(t, v)] = 0
    adj2: Dict[int, List[int]] = {}
    for (u, v) in cap:
        adj2.setdefault(u, []).append(v)
    flow = 0
    while True:
        parent: Dict[int, Tuple[int, int]] = {}
        dq = deque([s])
        seen = {s}
        while dq and t not in seen:
            v = dq.popleft()
            for w in adj2.get(v, []):
                if w not in seen and cap.get((v, w), 0) > 0:
                    seen.add(w)
                    parent[w] = (v, cap[(v, w)])
                    dq.append(w)
        if t not in seen:
            x = {v for v in seen if 0 <= v < g.n}
            return flow, x
        # augment along the BFS path (reverse arcs exist in cap by construction)
        bottleneck = None
        v = t
        while v != s:
            u, c = parent[v]
            bottleneck = c if bottleneck is None else min(bottleneck, c)
            v = u
        v = t
        while v != s:
            u, _ = parent[v]
            cap[(u, v)] -= bottleneck
            cap[(v, u)] = cap.get((v, u), 0) + bottleneck
            v = u
        flow += bottleneck


def _compress(g: MultiGraph, prefix: Set[int], s_cur: List[int], budget: int) -> Optional[List[int]]:
    """Find a bipartization set of size <= budget for the prefix graph, or None."""
    c0 = _two_color(g, prefix, set(s_cur))
    assert c0 is not None
    endpoints: List[int] = sorted({v for eid in s_cur for v in g.endpoints(eid)})
    rest = prefix - set(s_cur)
    for assign_bits in range(1 << len(endpoints)):
        a = {v: (assign_bits >> i) & 1 for i, v in enumerate(endpoints)}
        mono = [eid for eid in s_cur
                if a[g.endpoints(eid)[0]] == a[g.endpoints(eid)[1]]]
        if len(mono) > budget:
            continue
        # flip set X relative to c0; forced on the assigned endpoints
        sources = {v for v in endpoints if a[v] != c0[v]}
        sinks = {v for v in endpoints if a[v] == c0[v]}
        cut, x = _min_cut(g, rest, set(), sources, sinks)
        if len(mono) + cut > budget:
            continue
        crossing = [eid for eid in rest
                    if (g.endpoints(eid)[0] in x) != (g.endpoints(eid)[1] in x)]
        new_s = sorted(mono + crossing)
        if len(new_s) <= budget and _two_color(g, prefix, set(new_s)) is not None:
            return new_s
    return None


def solve(g: MultiGraph, k: int) -> Optional[Tuple[FrozenSet[int], Tuple[FrozenSet[int], FrozenSet[int]]]]:
    """Edge set S with |S| <= k and g - S bipartite, plus a witness bipartition."""
    if k > EOCT_K_CAP:
        raise ValueError("budget cap %d exceeded" % EOCT_K_CAP)
    loops = [eid for eid in g.edge_ids() if g.is_loop(eid)]
    if len(loops) > k:
        return None
    budget = k - len(loops)
    nonloop = [eid for eid in g.edge_ids() if not g.is_loop(eid)]
    s_cur: List[int] = []
    prefix: Set[int] = set()
    color = _two_color(g, prefix, set())
    for eid in nonloop:
        prefix.add(eid)
        u, v = g.endpoints(eid)
        if color is not None and color[u] != color[v]:
            continue
        s_cur.append(eid)
        if len(s_cur) > budget:
            compressed = _compress(g, prefix, s_cur, budget)
            if compressed is None:
                return None
            s_cur = compressed
        color = _two_color(g, prefix, set(s_cur))
        assert color is not None
    s_all = frozenset(loops) | frozenset(s_cur)
    final = _two_color(g, set(nonloop), set(s_cur))
    assert final is not None
    a = frozenset(v for v in range(g.n) if final[v] == 0)
    b = frozenset(v for v in range(g.n) if final[v] == 1)
    return s_all, (a, b)


def minimize(g: MultiGraph) -> int:
    """Minimum edge bipartization size, by increasing-budget calls to solve."""
    for k in range(0, min(g.num_edges, EOCT_K_CAP) + 1):
        if solve(g, k) is not None:
            return k
    raise RuntimeError("minimum exceeds the budget cap")
