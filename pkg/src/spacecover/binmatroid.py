"""Binary matroid semantics over a representing GF(2) matrix."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional

from .gf2 import Gf2Matrix, Gf2Vector, in_span, rank_of_ints

__all__ = [
    "BinaryMatroid",
    "SpanCertificate",
    "CocycleCertificate",
    "is_independent",
    "span_contains",
    "is_cocycle",
    "dual_span_contains",
]


@dataclass(frozen=True)
class SpanCertificate:
    """Per-terminal witness: terminal column index -> subset of solution columns XOR-ing to it."""

    parts: Dict[int, FrozenSet[int]]

    def verify(self, m: "BinaryMatroid") -> bool:
        for w, part in self.parts.items():
            acc = Gf2Vector(m.rep.rows)
            for e in part:
                acc = acc ^ m.rep.column(e)
            if acc != m.rep.column(w):
                return False
        return True


@dataclass(frozen=True)
class CocycleCertificate:
    """Vertex (row) set X whose row-sum equals the characteristic vector of the edge set."""

    edge_set: FrozenSet[int]
    x: FrozenSet[int]

    def verify(self, m: "BinaryMatroid") -> bool:
        acc = Gf2Vector(m.rep.cols)
        for v in self.x:
            acc = acc ^ m.rep.row(v)
        return acc.support() == self.edge_set


class BinaryMatroid:
    """Matroid on the column indices of ``rep``; independence = linear independence."""

    def __init__(self, rep: Gf2Matrix):
        self.rep = rep

    @property
    def ground_size(self) -> int:
        return self.rep.cols

    def columns(self, ids: Iterable[int]) -> List[Gf2Vector]:
        return [self.rep.column(j) for j in ids]


def is_independent(m: BinaryMatroid, f: Iterable[int]) -> bool:
    """True iff the selected columns are linearly independent."""
    ids = list(f)
    cols = m.columns(ids)
    return rank_of_ints([c.bits for c in cols]) == len(ids)


def span_contains(m: BinaryMatroid, f: Iterable[int], t: Iterable[int]) -> Optional[SpanCertificate]:
    """Certificate that every column of t lies in the span of f's columns, or None."""
    f_ids = sorted(set(f))
    t_ids = sorted(set(t))
    if set(f_ids) & set(t_ids):
        raise ValueError("solution and terminal sets overlap")
    f_cols = m.columns(f_ids)
    parts: Dict[int, FrozenSet[int]] = {}
    for w in t_ids:
        combo = in_span(f_cols, m.rep.column(w))
        if combo is None:
            return None
        parts[w] = frozenset(f_ids[i] for i in combo)
    return SpanCertificate(parts)


def is_cocycle(m: BinaryMatroid, f: Iterable[int]) -> Optional[CocycleCertificate]:
    """Certificate that f is a cocycle: its characteristic vector lies in the row space."""
    f_ids = frozenset(f)
    char = Gf2Vector(m.rep.cols, sum(1 << e for e in f_ids))
    rows = [m.rep.row(i) for i in range(m.rep.rows)]
    combo = in_span(rows, char)
    if combo is None:
        return None
    return CocycleCertificate(f_ids, frozenset(combo))


def dual_span_contains(m: BinaryMatroid, f: Iterable[int], t: Iterable[int]) -> Optional[Dict[int, CocycleCertificate]]:
    """Per-terminal certificates that t lies in the dual span of f, or None.

    For each terminal W we need some F_W subseteq f with F_W + {W} a cocycle;
    |f| is parameter-small, so subsets are enumerated directly.
    """
    f_ids = sorted(set(f))
    t_ids = sorted(set(t))
    if set(f_ids) & set(t_ids):
        raise ValueError("solution and terminal sets overlap")
    certs: Dict[int, CocycleCertificate] = {}
    for w in t_ids:
        found = None
        for size in range(len(f_ids) + 1):
            for sub in itertools.combinations(f_ids, size):
                cert = is_cocycle(m, set(sub) | {w})
                if cert is not None:
                    found = cert
                    break
            if found is not None:
                break
        if found is None:
            return None
        certs[w] = found
    return certs
