"""Dual pipeline: reduce to Edge-Set Cover and solve by the three-branch recursion."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from . import eoct
from .binmatroid import CocycleCertificate, dual_span_contains
from .derand import build_universal_set
from .gf2 import Gf2Matrix, Gf2Vector, basis, distinct_rows
from .instances import DualInstance
from .multigraph import (MultiGraph, UNBREAKABLE, connected_components,
                         good_edge_separation, is_connected)

__all__ = [
    "EscTerminal",
    "EdgeSetCoverInstance",
    "AnnotatedEscInstance",
    "RecursParams",
    "vertex_types",
    "contributes",
    "fits",
    "build_esc",
    "solve_esc",
    "recurs",
    "solve",
    "is_key_solution",
    "all_keys",
    "preliminary_partition",
]


@dataclass
class EscTerminal:
    """A terminal of Edge-Set Cover: an edge (or a dummy) with parity target and flip map."""

    tid: int
    edge: Optional[int]          # edge id in the instance graph; None = dummy
    b: Tuple[int, ...]           # target class parities (used at the root)
    f: Dict[int, int]            # edge id -> flip bit


@dataclass
class EdgeSetCoverInstance:
    """Graph, budget, vertex classes, terminals, and the edges excluded from F."""

    g: MultiGraph
    k: int
    t: int
    classes: Dict[int, int]      # vertex -> class index in [0, t)
    terminals: List[EscTerminal]
    blocked: FrozenSet[int]      # superset of real terminal edges; disjoint from F

    def class_parities(self, x: FrozenSet[int]) -> Tuple[int, ...]:
        par = [0] * self.t
        for v in x:
            par[self.classes[v]] ^= 1
        return tuple(par)


@dataclass
class AnnotatedEscInstance:
    """Edge-Set Cover plus a boundary set W and per-terminal pinned sets."""

    esc: EdgeSetCoverInstance
    w: FrozenSet[int] = frozenset()
    pins: Dict[int, Tuple[FrozenSet[int], FrozenSet[int]]] = field(default_factory=dict)

    def pin(self, tid: int) -> Tuple[FrozenSet[int], FrozenSet[int]]:
        return self.pins.get(tid, (frozenset(), frozenset()))


@dataclass
class RecursParams:
    """Recursion thresholds; defaults follow the doubly-exponential formulas."""

    q: int
    p: int
    s: int
    seed: int = 0
    stats: Dict[str, int] = field(default_factory=dict)

    @classmethod
    def theoretical(cls, k: int, t: int, num_terminals: int, lam: int = 1) -> "RecursParams":
        exponent = lam * (t + k * k) * max(num_terminals, 1)
        exponent = min(exponent, 60)  # beyond this every feasible n is "small"
        q = 1 << min(1 << exponent, 60)
        return cls(q=q, p=2 * (k + 1), s=min(q ** 4, 1 << 62))

    def bump(self, name: str) -> None:
        self.stats[name] = self.stats.get(name, 0) + 1


def vertex_types(p: Gf2Matrix) -> Tuple[int, List[FrozenSet[int]]]:
    """Number of distinct P-rows and the vertex classes V_1..V_t (first occurrence order)."""
    _, cls_of = distinct_rows(p)
    if not cls_of:
        return 1, [frozenset()]
    t = max(cls_of.values()) + 1
    classes = [frozenset(v for v, c in cls_of.items() if c == i) for i in range(t)]
    return t, classes


def contributes(e_prime: int, e: EscTerminal, x, inst: EdgeSetCoverInstance) -> bool:
    """Whether edge e_prime contributes to (e, (X, complement))."""
    u, v = inst.g.endpoints(e_prime)
    fe = e.f.get(e_prime, 0)
    same_side = (u in x) == (v in x)
    return fe == 1 if same_side else fe == 0


def cont(e: EscTerminal, x, inst: EdgeSetCoverInstance) -> Set[int]:
    return {e2 for e2 in inst.g.edge_ids() if contributes(e2, e, x, inst)}


def fits(x, e: EscTerminal, inst: EdgeSetCoverInstance,
         target_b: Optional[Tuple[int, ...]] = None) -> str:
    """'fits', 'almost', or 'neither' for the partition (X, complement) and terminal e."""
    c = cont(e, x, inst)
    blocked_hits = c & set(inst.blocked)
    want = set() if e.edge is None else {e.edge}
    if blocked_hits != want:
        return "neither"
    b = e.b if target_b is None else target_b
    if inst.class_parities(frozenset(x)) == tuple(b):
        return "fits"
    return "almost"


def all_keys(ainst: AnnotatedEscInstance):
    """Every (parity restriction, per-terminal W-partition) key, in sorted order."""
    terms = ainst.esc.terminals
    t = ainst.esc.t
    h_options = list(itertools.product(*(sorted(itertools.product((0, 1), repeat=t))
                                         for _ in terms)))
    w_sorted = sorted(ainst.w)
    subsets = []
    for mask in range(1 << len(w_sorted)):
        subsets.append(frozenset(w_sorted[i] for i in range(len(w_sorted)) if (mask >> i) & 1))
    subsets.sort(key=sorted)
    lr_options = list(itertools.product(subsets, repeat=len(terms)))
    for h in h_options:
        for lr in lr_options:
            yield (h, lr)


def is_key_solution(ainst: AnnotatedEscInstance, key, f_set, x_map) -> bool:
    """Full definition-level check that (F, {X_e}) solves the given key."""
    inst = ainst.esc
    h, lr = key
    if len(f_set) > inst.k or set(f_set) & set(inst.blocked):
        return False
    if not set(f_set) <= set(inst.g.edge_ids()):
        return False
    for i, term in enumerate(inst.terminals):
        x = x_map.get(term.tid)
        if x is None:
            return False
        c = cont(term, x, inst)
        want = set() if term.edge is None else {term.edge}
        if (c & set(inst.blocked)) != want:
            return False
        if not (c - want) <= set(f_set):
            return False
        if inst.class_parities(frozenset(x)) != tuple(h[i]):
            return False
        l_set, r_set = lr[i], ainst.w - lr[i]
        w1, w2 = ainst.pin(term.tid)
        if not (l_set <= x and w1 <= x):
            return False
        if (r_set & x) or (w2 & x):
            return False
    return True


# ---------------------------------------------------------------------------
# small case


def _multiplicity_reduce(inst: EdgeSetCoverInstance) -> EdgeSetCoverInstance:
    """Drop parallel same-flip-signature non-blocked edges beyond k+1 copies.

    Keeping k+1 copies (not k) preserves every answer: a contributing bundle of
    k+1 edges can never fit inside F, exactly as in the unreduced graph.
    """
    groups: Dict[Tuple, List[int]] = {}
    for eid in inst.g.edge_ids():
        if eid in inst.blocked:
            continue
        u, v = inst.g.endpoints(eid)
        sig = (min(u, v), max(u, v), tuple(term.f.get(eid, 0) for term in inst.terminals))
        groups.setdefault(sig, []).append(eid)
    drop: Set[int] = set()
    for sig, eids in groups.items():
        eids.sort()
        if len(eids) > inst.k + 1:
            drop.update(eids[inst.k + 1:])
    if not drop:
        return inst
    g2 = inst.g.without_edges(drop)
    terms = [EscTerminal(t.tid, t.edge, t.b,
                         {e: b for e, b in t.f.items() if e not in drop})
             for t in inst.terminals]
    return EdgeSetCoverInstance(g2, inst.k, inst.t, inst.classes, terms, inst.blocked)


def _component_partition(inst: EdgeSetCoverInstance, term: EscTerminal,
                         comp: List[int], comp_edges: List[int]) -> Optional[Dict[int, int]]:
    """The unique (up to flip) non-contributing side assignment of one component."""
    side = {comp[0]: 0}
    adj: Dict[int, List[Tuple[int, int]]] = {v: [] for v in comp}
    for eid in comp_edges:
        u, v = inst.g.endpoints(eid)
        fe = term.f.get(eid, 0)
        if u == v:
            if fe == 1:
                return None  # a loop with flip 1 contributes under every partition
            continue
        adj[u].append((v, fe))
        adj[v].append((u, fe))
    stack = [comp[0]]
    while stack:
        v = stack.pop()
        for w, fe in adj[v]:
            want = side[v] ^ fe  # flip 0 -> same side, flip 1 -> opposite
            if w not in side:
                side[w] = want
                stack.append(w)
            elif side[w] != want:
                return None
    return side


def _small_case(ainst: AnnotatedEscInstance, params: RecursParams):
    """Branch (a): enumerate F and propagate per-component side assignments."""
    params.bump("small")
    inst = _multiplicity_reduce(ainst.esc)
    ainst = AnnotatedEscInstance(inst, ainst.w, ainst.pins)
    keys = list(all_keys(ainst))
    table = {key: None for key in keys}
    unsolved = set(keys)
    nonblocked = [eid for eid in inst.g.edge_ids() if eid not in inst.blocked]
    vertices = list(range(inst.g.n))
    for size in range(min(inst.k, len(nonblocked)) + 1):
        if not unsolved:
            break
        for f_sub in itertools.combinations(nonblocked, size):
            if not unsolved:
                break
            f_set = frozenset(f_sub)
            removed = set(f_sub) | set(inst.blocked)
            comps = _components_without(inst.g, removed)
            # candidate partitions per terminal
            per_term: List[List[Tuple[FrozenSet[int], Tuple[int, ...]]]] = []
            ok = True
            for term in inst.terminals:
                sides = []
                for comp, comp_edges in comps:
                    sides.append(_component_partition(inst, term, comp, comp_edges))
                if any(s is None for s in sides):
                    ok = False
                    break
                options = []
                for flips in itertools.product((0, 1), repeat=len(comps)):
                    x = set()
                    for (comp, _), base, flip in zip(comps, sides, flips):
                        for v in comp:
                            if base[v] ^ flip:
                                x.add(v)
                    fx = frozenset(x)
                    c = cont(term, fx, inst)
                    want = set() if term.edge is None else {term.edge}
                    if (c & set(inst.blocked)) != want:
                        continue
                    if not (c - want) <= f_set:
                        continue
                    options.append((fx, inst.class_parities(fx)))
                if not options:
                    ok = False
                    break
                per_term.append(options)
            if not ok:
                continue
            for key in sorted(unsolved):
                h, lr = key
                choice: Dict[int, FrozenSet[int]] = {}
                good = True
                for i, term in enumerate(inst.terminals):
                    l_set, r_set = lr[i], ainst.w - lr[i]
                    w1, w2 = ainst.pin(term.tid)
                    pick = None
                    for fx, par in per_term[i]:
                        if par != tuple(h[i]):
                            continue
                        if not (l_set <= fx and w1 <= fx):
                            continue
                        if (r_set & fx) or (w2 & fx):
                            continue
                        pick = fx
                        break
                    if pick is None:
                        good = False
                        break
                    choice[term.tid] = pick
                if good:
                    table[key] = (f_set, choice)
                    unsolved.discard(key)
    return table


def _components_without(g: MultiGraph, removed_edges: Set[int]):
    """Components of g minus the given edges: list of (vertex list, edge id list)."""
    alive = [eid for eid in g.edge_ids() if eid not in removed_edges]
    adj: Dict[int, List[int]] = {v: [] for v in range(g.n)}
    for eid in alive:
        u, v = g.endpoints(eid)
        adj[u].append(v)
        adj[v].append(u)
    seen: Set[int] = set()
    out = []
    for start in range(g.n):
        if start in seen:
            continue
        comp = {start}
        seen.add(start)
        stack = [start]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        comp_sorted = sorted(comp)
        comp_edges = [eid for eid in alive
                      if g.endpoints(eid)[0] in comp and g.endpoints(eid)[1] in comp]
        out.append((comp_sorted, comp_edges))
    return out


# ---------------------------------------------------------------------------
# preliminary partitions via edge bipartization


def preliminary_partition(inst: EdgeSetCoverInstance, term: EscTerminal
                          ) -> Optional[Tuple[FrozenSet[int], FrozenSet[int]]]:
    """A partition that almost fits the terminal with at most k non-terminal
    contributing edges, found through an edge-bipartization reduction."""
    k = inst.k
    g2 = MultiGraph(inst.g.n)
    extra = [inst.g.n]  # next fresh vertex

    def fresh() -> int:
        v = extra[0]
        extra[0] += 1
        return v

    gadget_edges: List[Tuple[int, int]] = []

    def add(u: int, v: int) -> None:
        gadget_edges.append((u, v))

    for eid in inst.g.edge_ids():
        u, v = inst.g.endpoints(eid)
        fe = term.f.get(eid, 0)
        if eid in inst.blocked:
            own = (term.edge == eid)
            # own edge must contribute; other blocked edges must not
            cross_required = (fe == 0) if own else (fe == 1)
            if cross_required:
                for _ in range(k + 1):
                    add(u, v)
            else:
                w = fresh()
                for _ in range(k + 1):
                    add(u, w)
                    add(w, v)
        else:
            if fe == 1:
                add(u, v)
            else:
                z = fresh()
                add(u, z)
                add(z, v)
    g2 = MultiGraph(extra[0])
    for u, v in gadget_edges:
        g2.add_edge(u, v)
    res = eoct.solve(g2, k)
    if res is None:
        return None
    _, (a, b) = res
    y = frozenset(v for v in a if v < inst.g.n)
    y_bar = frozenset(range(inst.g.n)) - y
    return y, y_bar


# ---------------------------------------------------------------------------
# recursion


@lru_cache(maxsize=None)
def _universal_cached(n: int, k: int, p: int):
    return build_universal_set(n, k, p)


_SEP_CACHE: Dict[Tuple, object] = {}


def _separation_cached(g: MultiGraph, q: int, p: int, seed: int):
    key = (g.n, tuple(tuple(sorted(e)) for _, e in g.edges()), q, p, seed)
    if key not in _SEP_CACHE:
        _SEP_CACHE[key] = good_edge_separation(g, q, p, seed=seed)
    return _SEP_CACHE[key]


def recurs(ainst: AnnotatedEscInstance, params: RecursParams):
    """Complete answer table over all (h, W-partition) keys for a connected instance."""
    inst = ainst.esc
    if not inst.terminals:
        return {((), ()): (frozenset(), {})}
    n = inst.g.n
    if n <= params.s or not is_connected(inst.g):
        return _small_case(ainst, params)
    sep = _separation_cached(inst.g, params.q, params.p, params.seed)
    if sep == UNBREAKABLE:
        return _unbreakable_case(ainst, params)
    return _breakable_case(ainst, params, sep)


def _restricted_instance(inst: EdgeSetCoverInstance, vertices: Iterable[int]
                         ) -> Tuple[EdgeSetCoverInstance, Dict[int, int], Dict[int, int]]:
    """Induced sub-instance; returns (instance, vertex map old->new, edge map new->old)."""
    sub, vmap, emap = inst.g.induced(vertices)
    old_to_new = {old: new for new, old in emap.items()}
    classes = {vmap[v]: inst.classes[v] for v in vmap}
    terms = []
    for term in inst.terminals:
        edge = old_to_new.get(term.edge) if term.edge is not None else None
        f = {new: term.f.get(old, 0) for new, old in emap.items()}
        terms.append(EscTerminal(term.tid, edge, term.b, f))
    blocked = frozenset(old_to_new[e] for e in inst.blocked if e in old_to_new)
    return (EdgeSetCoverInstance(sub, inst.k, inst.t, classes, terms, blocked),
            vmap, emap)


def _unbreakable_case(ainst: AnnotatedEscInstance, params: RecursParams):
    """Branch (b): align preliminary partitions, color, recurse into small pockets."""
    params.bump("unbreakable")
    inst = ainst.esc
    n, k = inst.g.n, inst.k
    terms = inst.terminals
    keys = list(all_keys(ainst))
    table = {key: None for key in keys}
    prelim = {}
    for term in terms:
        y = preliminary_partition(inst, term)
        if y is None:
            return table  # no almost-fitting partition exists for this terminal at all
        prelim[term.tid] = y[0]
    nbig = (params.q + 2 * (k + 1)) * len(terms)
    pbig = 2 * (k + 1) * len(terms)
    k_u = min(nbig, n)
    p_u = min(pbig, k_u)
    colorings = _universal_cached(n, k_u, p_u).functions
    verts = set(range(n))
    adj = inst.g.adjacency()
    for align in itertools.product((0, 1), repeat=len(terms)):
        y_side = {}
        for term, flip in zip(terms, align):
            y_side[term.tid] = prelim[term.tid] if flip == 0 else verts - prelim[term.tid]
        for coloring in colorings:
            p_set = {v for v in range(n) if coloring[v]}
            comps = connected_components(inst.g, verts - p_set) if verts - p_set else []
            small = [sorted(c) for c in comps if len(c) <= params.q * len(terms)]
            interior = set().union(*small) if small else set()
            fixed = verts - interior
            attempt = _assemble_attempt(ainst, params, y_side, fixed, small, adj)
            if attempt is None:
                continue
            for key in keys:
                cand = attempt(key)
                if cand is None:
                    continue
                f_set, x_map = cand
                if not is_key_solution(ainst, key, f_set, x_map):
                    continue
                if table[key] is None or len(f_set) < len(table[key][0]):
                    table[key] = (f_set, x_map)
    return table


def _assemble_attempt(ainst, params, y_side, fixed, small, adj):
    """Solve one (alignment, coloring) attempt; returns a per-key assembly closure."""
    inst = ainst.esc
    k = inst.k
    terms = inst.terminals
    # fixed-region bookkeeping per terminal
    f_fix: Set[int] = set()
    fix_par = {}
    x_fix = {}
    for term in terms:
        x_t = y_side[term.tid] & fixed
        x_fix[term.tid] = x_t
        par = [0] * inst.t
        for v in x_t:
            par[inst.classes[v]] ^= 1
        fix_par[term.tid] = tuple(par)
        w1, w2 = ainst.pin(term.tid)
        if not (w1 & fixed) <= x_t or (w2 & x_t):
            return None
        for eid in inst.g.edge_ids():
            u, v = inst.g.endpoints(eid)
            if u not in fixed or v not in fixed:
                continue
            if contributes(eid, term, y_side[term.tid], inst):
                if eid == term.edge:
                    continue
                if eid in inst.blocked:
                    return None
                f_fix.add(eid)
        if term.edge is not None:
            u, v = inst.g.endpoints(term.edge)
            if u in fixed and v in fixed and \
                    not contributes(term.edge, term, y_side[term.tid], inst):
                return None
    if len(f_fix) > k:
        return None
    # sub-solve each pocket (component plus its colored neighborhood)
    pockets = []
    for comp in small:
        comp_set = set(comp)
        hood = {w for v in comp for w, _ in adj[v]} - comp_set
        plus = sorted(comp_set | hood)
        sub_inst, vmap, emap = _restricted_instance(inst, plus)
        inv_v = {new: old for old, new in vmap.items()}
        pins = {}
        for term in terms:
            w1, w2 = ainst.pin(term.tid)
            pin1 = {vmap[v] for v in (w1 | (hood & y_side[term.tid])) if v in vmap}
            pin2 = {vmap[v] for v in (w2 | (hood - y_side[term.tid])) if v in vmap}
            if pin1 & pin2:
                return None
            pins[term.tid] = (frozenset(pin1), frozenset(pin2))
        w_sub = frozenset(vmap[v] for v in (ainst.w & comp_set))
        sub_ainst = AnnotatedEscInstance(sub_inst, w_sub, pins)
        if sub_inst.g.n >= inst.g.n:
            # the closed neighborhood did not shrink; recursion would not progress
            params.bump("pocket_fallback")
            sub_table = _small_case(sub_ainst, params)
        else:
            sub_table = recurs(sub_ainst, params)
        pockets.append((comp_set, sub_table, vmap, inv_v, emap, w_sub))

    def assemble(key):
        h, lr = key
        for i, term in enumerate(terms):
            l_set, r_set = lr[i], ainst.w - lr[i]
            if not (l_set & fixed) <= x_fix[term.tid]:
                return None
            if (r_set & fixed) & x_fix[term.tid]:
                return None
        # DP over pockets on interior parity vectors
        zero = tuple(tuple([0] * inst.t) for _ in terms)
        states = {zero: (frozenset(f_fix), {t.tid: set(x_fix[t.tid]) for t in terms})}
        for comp_set, sub_table, vmap, inv_v, emap, w_sub in pockets:
            new_states = {}
            for (h_sub, lr_sub), ans in sorted(sub_table.items(), key=lambda kv: str(kv[0])):
                if ans is None:
                    continue
                # the sub key's boundary split must agree with the parent key
                match = True
                for i, term in enumerate(terms):
                    want_l = frozenset(vmap[v] for v in lr[i] if v in comp_set and v in vmap)
                    if lr_sub[i] != want_l:
                        match = False
                        break
                if not match:
                    continue
                f_sub, x_sub = ans
                f_orig = frozenset(emap[e] for e in f_sub)
                # interior parity of this pocket per terminal
                contrib = []
                x_orig = {}
                for term in terms:
                    par = [0] * inst.t
                    xs = {inv_v[v] for v in x_sub[term.tid]}
                    x_orig[term.tid] = xs
                    for v in xs & comp_set:
                        par[inst.classes[v]] ^= 1
                    contrib.append(tuple(par))
                for state, (f_acc, x_acc) in list(states.items()):
                    new_state = tuple(
                        tuple(a ^ b for a, b in zip(state[i], contrib[i]))
                        for i in range(len(terms)))
                    f_new = f_acc | f_orig
                    if len(f_new) > k:
                        continue
                    if new_state in new_states and len(new_states[new_state][0]) <= len(f_new):
                        continue
                    x_new = {t.tid: set(x_acc[t.tid]) for t in terms}
                    for term in terms:
                        x_new[term.tid] |= x_orig[term.tid] & comp_set
                    cur = new_states.get(new_state)
                    if cur is None or len(f_new) < len(cur[0]):
                        new_states[new_state] = (f_new, x_new)
            # pockets must each contribute exactly one sub-solution
            states = new_states
            if not states:
                return None
        target = tuple(
            tuple(hb ^ fb for hb, fb in zip(h[i], fix_par[terms[i].tid]))
            for i in range(len(terms)))
        hit = states.get(target)
        if hit is None:
            return None
        f_set, x_map = hit
        return frozenset(f_set), {tid: frozenset(xs) for tid, xs in x_map.items()}

    return assemble


def _breakable_case(ainst: AnnotatedEscInstance, params: RecursParams, sep):
    """Branch (c): solve the Q side, collapse redundant vertices, recurse on G*."""
    params.bump("breakable")
    inst = ainst.esc
    q_side, p_side = (set(sep.x), set(sep.y))
    if len(q_side & ainst.w) > len(p_side & ainst.w):
        q_side, p_side = p_side, q_side
    u_set = {v for eid in sep.cross for v in inst.g.endpoints(eid) if v in q_side}
    w_q = frozenset(u_set | (ainst.w & q_side))
    sub_inst, vmap, emap = _restricted_instance(inst, q_side)
    inv_v = {new: old for old, new in vmap.items()}
    pins_q = {}
    for term in inst.terminals:
        w1, w2 = ainst.pin(term.tid)
        pins_q[term.tid] = (frozenset(vmap[v] for v in w1 if v in vmap),
                            frozenset(vmap[v] for v in w2 if v in vmap))
    q_ainst = AnnotatedEscInstance(sub_inst, frozenset(vmap[v] for v in w_q), pins_q)
    q_table = recurs(q_ainst, params)
    if all(ans is None for ans in q_table.values()):
        return {key: None for key in all_keys(ainst)}
    # vertices that must survive: endpoints of answer edges, blocked endpoints, boundary
    v_protect: Set[int] = set(w_q)
    for ans in q_table.values():
        if ans is None:
            continue
        for e in ans[0]:
            v_protect.update(inv_v[v] for v in sub_inst.g.endpoints(e))
    for eid in inst.blocked:
        for v in inst.g.endpoints(eid):
            if v in q_side:
                v_protect.add(v)
    # redundant grouping of the remaining Q vertices by full behavioral signature
    sorted_keys = sorted(q_table, key=str)
    sig_of: Dict[int, Tuple] = {}
    for v in sorted(q_side - v_protect):
        nv = vmap[v]
        pin_sig = tuple((v in ainst.pin(t.tid)[0], v in ainst.pin(t.tid)[1])
                        for t in inst.terminals)
        side_sig = []
        for key in sorted_keys:
            ans = q_table[key]
            if ans is None:
                side_sig.append(None)
            else:
                side_sig.append(tuple(nv in ans[1][t.tid] for t in inst.terminals))
        sig_of[v] = (inst.classes[v], pin_sig, tuple(side_sig))
    groups: Dict[Tuple, List[int]] = {}
    for v, sig in sig_of.items():
        groups.setdefault(sig, []).append(v)
    z_set: Set[int] = set()
    rep_of: Dict[int, int] = {}
    for sig in sorted(groups, key=str):
        members = sorted(groups[sig])
        if len(members) % 2 == 0:
            members = members[:-1]  # drop one to make the set odd; it stays ordinary
        if len(members) < 2:
            continue
        rep = members[0]
        for v in members[1:]:
            z_set.add(v)
            rep_of[v] = rep
    if not z_set:
        # no shrinkage possible; the unconditional enumeration is the safe fallback
        params.bump("no_shrink")
        return _small_case(ainst, params)
    # build the replacement instance on V minus Z with k+1 bundle edges
    keep = sorted(set(range(inst.g.n)) - z_set)
    new_of = {v: i for i, v in enumerate(keep)}
    g_star = MultiGraph(len(keep))
    star_f: Dict[int, Dict[int, int]] = {t.tid: {} for t in inst.terminals}
    star_blocked: Set[int] = set()
    star_term_edge: Dict[int, Optional[int]] = {t.tid: None for t in inst.terminals}
    orig_of_star: Dict[int, Optional[int]] = {}
    for eid in inst.g.edge_ids():
        a, b = inst.g.endpoints(eid)
        ra = rep_of.get(a, a)
        rb = rep_of.get(b, b)
        in_z = (a in z_set) or (b in z_set)
        if in_z and ra == rb and a != b:
            continue  # both endpoints inside one redundant set: never contributes
        if in_z and (rep_of.get(a, None) == b or rep_of.get(b, None) == a):
            continue  # edge between a removed vertex and its representative
        copies = (inst.k + 1) if in_z else 1
        for _ in range(copies):
            ne = g_star.add_edge(new_of[ra], new_of[rb])
            orig_of_star[ne] = eid
            for term in inst.terminals:
                star_f[term.tid][ne] = term.f.get(eid, 0)
            if eid in inst.blocked:
                star_blocked.add(ne)
            for term in inst.terminals:
                if term.edge == eid:
                    star_term_edge[term.tid] = ne
    star_terms = [EscTerminal(t.tid, star_term_edge[t.tid], t.b, star_f[t.tid])
                  for t in inst.terminals]
    star_classes = {new_of[v]: inst.classes[v] for v in keep}
    star_inst = EdgeSetCoverInstance(g_star, inst.k, inst.t, star_classes,
                                     star_terms, frozenset(star_blocked))
    star_pins = {}
    for term in inst.terminals:
        w1, w2 = ainst.pin(term.tid)
        star_pins[term.tid] = (frozenset(new_of[v] for v in w1 if v in new_of),
                               frozenset(new_of[v] for v in w2 if v in new_of))
    star_w = frozenset(new_of[v] for v in ainst.w)
    star_ainst = AnnotatedEscInstance(star_inst, star_w, star_pins)
    star_table = recurs(star_ainst, params)
    # lift the G* answers back through the Q-side table
    table = {}
    q_vmap = vmap
    for key in all_keys(ainst):
        h, lr = key
        star_key = (h, tuple(frozenset(new_of[v] for v in l) for l in lr))
        ans = star_table.get(star_key)
        if ans is None:
            table[key] = None
            continue
        f_star_set, x_star = ans
        lifted = _lift_breakable(ainst, q_side, p_side, q_table, q_vmap, inv_v,
                                 emap, new_of, f_star_set, x_star,
                                 orig_of_star, w_q, u_set)
        if lifted is not None and is_key_solution(ainst, key, lifted[0], lifted[1]):
            table[key] = lifted
        else:
            params.bump("lift_fail")
            fallback = _small_case_single(ainst, params, key)
            table[key] = fallback
    return table


def _lift_breakable(ainst, q_side, p_side, q_table, q_vmap, q_inv_v, q_emap,
                    new_of, f_star_set, x_star, orig_of_star, w_q, u_set):
    """Combine a replacement-graph answer with the matching Q-side answer.

    Collapsed vertices come in odd same-side groups, so class parities over
    Q minus the collapsed set equal the parities over all of Q.
    """
    inst = ainst.esc
    star_inv = {i: v for v, i in new_of.items()}
    # per-terminal sides of the surviving vertices, in original labels
    x_orig = {tid: {star_inv[v] for v in xs} for tid, xs in x_star.items()}
    h_q = []
    lr_q = []
    for term in inst.terminals:
        par = [0] * inst.t
        for v in x_orig[term.tid]:
            if v in q_side:
                par[inst.classes[v]] ^= 1
        h_q.append(tuple(par))
        lr_q.append(frozenset(q_vmap[v] for v in w_q if v in x_orig[term.tid]))
    q_ans = q_table.get((tuple(h_q), tuple(lr_q)))
    if q_ans is None:
        return None
    f_q, x_q = q_ans
    f_q_orig = {q_emap[e] for e in f_q}
    # edges of G[P plus boundary] come from the replacement answer
    outside = p_side | u_set
    f_out = {orig_of_star[e] for e in f_star_set
             if set(inst.g.endpoints(orig_of_star[e])) <= outside}
    f_final = frozenset(f_q_orig | f_out)
    x_final = {}
    for term in inst.terminals:
        xs = {q_inv_v[v] for v in x_q[term.tid]}
        xs |= x_orig[term.tid] & p_side
        x_final[term.tid] = frozenset(xs)
    return f_final, x_final


def _small_case_single(ainst: AnnotatedEscInstance, params: RecursParams, key):
    """Unconditional answer for one key (used as a defensive fallback)."""
    table = _small_case(ainst, params)
    return table.get(key)


# ---------------------------------------------------------------------------
# top level


def build_esc(inst: DualInstance, parity_guess: Dict[int, Tuple[int, ...]],
              active_terminals: Optional[Iterable[int]] = None,
              blocked: Optional[Iterable[int]] = None) -> EdgeSetCoverInstance:
    """Edge-Set Cover instance for one parity guess on the terminal basis."""
    t, class_sets = vertex_types(inst.p)
    classes = {v: i for i, cls in enumerate(class_sets) for v in cls}
    active = list(inst.terminals if active_terminals is None else active_terminals)
    blocked_set = frozenset(inst.terminals if blocked is None else blocked)
    class_rows = []
    for cls in class_sets:
        v = min(cls)
        class_rows.append(inst.p.row(v))
    eids = inst.graph.edge_ids()
    terms = []
    for eid in active:
        b = tuple(parity_guess[eid])
        p_w = Gf2Vector(inst.p.cols)
        for bit, row in zip(b, class_rows):
            if bit:
                p_w = p_w ^ row
        f = {e: p_w[inst.col_of[e]] for e in eids}
        terms.append(EscTerminal(eid, eid, b, f))
    return EdgeSetCoverInstance(inst.graph.copy(), inst.k, t, classes, terms, blocked_set)


def solve_esc(inst: EdgeSetCoverInstance, params: Optional[RecursParams] = None):
    """Optimal (F, per-terminal X) for the root parity targets, or None."""
    if params is None:
        params = RecursParams.theoretical(inst.k, inst.t, len(inst.terminals))
    comps = connected_components(inst.g)
    if len(comps) <= 1:
        ainst = AnnotatedEscInstance(inst)
        table = recurs(ainst, params)
        root = (tuple(term.b for term in inst.terminals),
                tuple(frozenset() for _ in inst.terminals))
        return table.get(root)
    # disconnected: combine per-component tables over parity splits
    terms = inst.terminals
    states = {tuple(tuple([0] * inst.t) for _ in terms): (frozenset(), {t.tid: set() for t in terms})}
    for comp in sorted(comps, key=min):
        sub_inst, vmap, emap = _restricted_instance(inst, sorted(comp))
        inv_v = {new: old for old, new in vmap.items()}
        sub_table = recurs(AnnotatedEscInstance(sub_inst), params)
        new_states = {}
        for (h_sub, _), ans in sorted(sub_table.items(), key=lambda kv: str(kv[0])):
            if ans is None:
                continue
            f_sub, x_sub = ans
            f_orig = frozenset(emap[e] for e in f_sub)
            for state, (f_acc, x_acc) in states.items():
                new_state = tuple(tuple(a ^ b for a, b in zip(state[i], h_sub[i]))
                                  for i in range(len(terms)))
                f_new = f_acc | f_orig
                if len(f_new) > inst.k:
                    continue
                cur = new_states.get(new_state)
                if cur is not None and len(cur[0]) <= len(f_new):
                    continue
                x_new = {t.tid: set(x_acc[t.tid]) for t in terms}
                for term in terms:
                    x_new[term.tid] |= {inv_v[v] for v in x_sub[term.tid]}
                new_states[new_state] = (f_new, x_new)
        states = new_states
        if not states:
            return None
    target = tuple(tuple(term.b) for term in terms)
    hit = states.get(target)
    if hit is None:
        return None
    f_set, x_map = hit
    x_frozen = {tid: frozenset(xs) for tid, xs in x_map.items()}
    for term in terms:
        if fits(x_frozen[term.tid], term, inst) != "fits":
            return None
        c = cont(term, x_frozen[term.tid], inst)
        want = set() if term.edge is None else {term.edge}
        if not (c - want) <= f_set:
            return None
    return frozenset(f_set), x_frozen


def reduce_terminals_dual(inst: DualInstance) -> Tuple[Tuple[int, ...], bool]:
    """Greedy basis of the terminal columns in the dual matroid.

    Returns (kept terminal edges, immediate-no flag).  All terminals stay in
    the instance as blocked edges; only the basis carries cut obligations.
    """
    from .gf2 import nullspace

    null_rows = nullspace(inst.a_matrix)
    dual_rep = Gf2Matrix(len(null_rows), inst.a_matrix.cols,
                         [v.bits for v in null_rows])
    term_cols = [dual_rep.column(inst.col_of[e]) for e in inst.terminals]
    keep = basis(term_cols)
    kept = tuple(inst.terminals[i] for i in keep)
    return kept, len(kept) > inst.k


def solve(inst: DualInstance, params: Optional[RecursParams] = None,
          stats: Optional[Dict[str, int]] = None
          ) -> Optional[Tuple[FrozenSet[int], Dict[int, CocycleCertificate]]]:
    """Full dual pipeline; returns a verified (F, per-terminal certificates) or None."""
    kept, immediate_no = reduce_terminals_dual(inst)
    if immediate_no:
        return None
    matroid = inst.matroid()
    term_cols = [inst.col_of[e] for e in inst.terminals]
    if not kept:
        certs = dual_span_contains(matroid, [], term_cols)
        if certs is None:
            raise AssertionError("empty dual basis must span the dropped terminals")
        return frozenset(), certs
    t, _ = vertex_types(inst.p)
    for combo in itertools.product(sorted(itertools.product((0, 1), repeat=t)),
                                   repeat=len(kept)):
        guess = dict(zip(kept, combo))
        if stats is not None:
            stats["guesses"] = stats.get("guesses", 0) + 1
        esc = build_esc(inst, guess, active_terminals=kept, blocked=inst.terminals)
        if params is not None:
            run_params = RecursParams(params.q, params.p, params.s, params.seed,
                                      params.stats)
        else:
            run_params = None
        sol = solve_esc(esc, run_params)
        if sol is None:
            continue
        f_set, _x = sol
        certs = dual_span_contains(matroid, [inst.col_of[e] for e in f_set], term_cols)
        if certs is not None and len(f_set) <= inst.k:
            return frozenset(f_set), certs
    return None
