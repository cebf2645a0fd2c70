"""Deterministic coloring families: (n,k)-perfect hash families and (n,k,p)-universal sets."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

__all__ = [
    "HashFamily",
    "UniversalSet",
    "build_hash_family",
    "build_universal_set",
    "verify_family",
    "verify_universal",
]

# Demand spaces larger than this switch construction/verification to sampling.
DEMAND_CAP = 2_000_000
RANDOM_ROUNDS_CAP = 200_000


@dataclass
class HashFamily:
    """Functions [0,n) -> [0,k) such that every k-subset gets an injective one."""

    n: int
    k: int
    functions: List[Tuple[int, ...]]


@dataclass
class UniversalSet:
    """Functions [0,n) -> {0,1} realizing every exactly-p-ones pattern on every k-subset."""

    n: int
    k: int
    p: int
    functions: List[Tuple[int, ...]]


def _covers_hash(func: Tuple[int, ...], subset: Tuple[int, ...]) -> bool:
    seen = 0
    for i in subset:
        b = 1 << func[i]
        if seen & b:
            return False
        seen |= b
    return True


def build_hash_family(n: int, k: int, seed: int = 0) -> HashFamily:
    """Greedy conditional-expectation construction of an (n,k)-perfect hash family.

    Falls back to seeded random sampling when the demand space (all k-subsets)
    exceeds DEMAND_CAP.
    """
    if not 0 < k <= n:
        raise ValueError("need 0 < k <= n")
    if k == 1:
        return HashFamily(n, k, [tuple([0] * n)])
    if math.comb(n, k) > DEMAND_CAP:
        return _random_hash_family(n, k, seed)
    demands = list(itertools.combinations(range(n), k))
    # falling-factorial probability table: prob[u][r] that r unassigned members
    # receive distinct colors from the k-u unused ones, under uniform choices
    prob = [[1.0] * (k + 1) for _ in range(k + 1)]
    for u in range(k + 1):
        for r in range(1, k + 1):
            prob[u][r] = prob[u][r - 1] * max(k - u - (r - 1), 0) / k
    functions: List[Tuple[int, ...]] = []
    uncovered = set(range(len(demands)))
    by_pos: List[List[int]] = [[] for _ in range(n)]
    for di, s in enumerate(demands):
        for i in s:
            by_pos[i].append(di)
    remaining_after = {}
    for di, s in enumerate(demands):
        for pos_idx, i in enumerate(s):
            remaining_after[(di, i)] = len(s) - pos_idx - 1
    while uncovered:
        used_mask = [0] * len(demands)
        used_cnt = [0] * len(demands)
        conflict = [False] * len(demands)
        func = []
        for i in range(n):
            live = [di for di in by_pos[i] if di in uncovered and not conflict[di]]
            best_c, best_score = 0, -1.0
            for c in range(k):
                score = 0.0
                bit = 1 << c
                for di in live:
                    if used_mask[di] & bit:
                        continue
                    score += prob[used_cnt[di] + 1][remaining_after[(di, i)]]
                if score > best_score + 1e-15:
                    best_score, best_c = score, c
            func.append(best_c)
            bit = 1 << best_c
            for di in live:
                if used_mask[di] & bit:
                    conflict[di] = True
                else:
                    used_mask[di] |= bit
                    used_cnt[di] += 1
        func_t = tuple(func)
        newly = {di for di in uncovered if _covers_hash(func_t, demands[di])}
        if not newly:
            raise RuntimeError("greedy hash family construction stalled")
        uncovered -= newly
        functions.append(func_t)
    return HashFamily(n, k, functions)


def _random_hash_family(n: int, k: int, seed: int) -> HashFamily:
    rng = random.Random(seed)
    sample = [tuple(sorted(rng.sample(range(n), k))) for _ in range(20000)]
    uncovered = set(sample)
    functions: List[Tuple[int, ...]] = []
    for _ in range(RANDOM_ROUNDS_CAP):
        if not uncovered:
            return HashFamily(n, k, functions)
        func = tuple(rng.randrange(k) for _ in range(n))
        newly = {s for s in uncovered if _covers_hash(func, s)}
        if newly:
            uncovered -= newly
            functions.append(func)
    raise RuntimeError("randomized hash family construction exhausted its budget")


def verify_family(fam: HashFamily, seed: int = 0) -> bool:
    """Check the defining property; exhaustive when the demand space is small."""
    if math.comb(fam.n, fam.k) <= DEMAND_CAP:
        subsets = itertools.combinations(range(fam.n), fam.k)
    else:
        rng = random.Random(seed)
        subsets = (tuple(sorted(rng.sample(range(fam.n), fam.k))) for _ in range(20000))
    for s in subsets:
        if not any(_covers_hash(f, s) for f in fam.functions):
            return False
    return True


def _universal_demands(n: int, k: int, p: int):
    for subset in itertools.combinations(range(n), k):
        for ones in itertools.combinations(range(k), p):
            pattern = [0] * k
            for j in ones:
                pattern[j] = 1
            yield subset, tuple(pattern)


def build_universal_set(n: int, k: int, p: int, seed: int = 0) -> UniversalSet:
    """Greedy conditional-expectation construction of an (n,k,p)-universal set.

    Vectorized over the (subset, pattern) demand space; falls back to seeded
    random sampling when that space exceeds DEMAND_CAP.
    """
    if not 0 <= p <= k <= n:
        raise ValueError("need 0 <= p <= k <= n")
    n_demands = math.comb(n, k) * math.comb(k, p)
    if n_demands > DEMAND_CAP:
        return _random_universal(n, k, p, seed)
    idx_mat = np.empty((n_demands, k), dtype=np.int16)
    bit_mat = np.empty((n_demands, k), dtype=np.int8)
    for row, (subset, pattern) in enumerate(_universal_demands(n, k, p)):
        idx_mat[row] = subset
        bit_mat[row] = pattern
    contains = [(idx_mat == i) for i in range(n)]  # D x k boolean
    req = [np.where(c.any(axis=1), (bit_mat * c).sum(axis=1), 0).astype(np.int8)
           for c in contains]
    has = [c.any(axis=1) for c in contains]
    weight_pow = np.power(2.0, -np.arange(k + 1))
    alive = np.ones(n_demands, dtype=bool)
    functions: List[Tuple[int, ...]] = []
    while alive.any():
        ok = alive.copy()
        rem = np.full(n_demands, k, dtype=np.int16)
        func = []
        for i in range(n):
            h = has[i]
            live = ok & h
            w = weight_pow[np.minimum(rem - 1, k).clip(0)]
            score1 = float(np.sum(w[live & (req[i] == 1)]))
            score0 = float(np.sum(w[live & (req[i] == 0)]))
            b = 1 if score1 > score0 else 0
            func.append(b)
            ok &= ~(h & (req[i] != b))
            rem[h] -= 1
        covered = ok  # no conflicts and all members assigned
        if not covered.any():
            raise RuntimeError("greedy universal set construction stalled")
        alive &= ~covered
        functions.append(tuple(func))
    return UniversalSet(n, k, p, functions)


def _random_universal(n: int, k: int, p: int, seed: int) -> UniversalSet:
    rng = random.Random(seed)
    demands = []
    for _ in range(20000):
        subset = tuple(sorted(rng.sample(range(n), k)))
        ones = set(rng.sample(range(k), p))
        demands.append((subset, tuple(1 if j in ones else 0 for j in range(k))))
    uncovered = set(demands)
    functions: List[Tuple[int, ...]] = []
    for _ in range(RANDOM_ROUNDS_CAP):
        if not uncovered:
            return UniversalSet(n, k, p, functions)
        func = tuple(rng.getrandbits(1) for _ in range(n))
        newly = {d for d in uncovered if _realizes(func, d)}
        if newly:
            uncovered -= newly
            functions.append(func)
    raise RuntimeError("randomized universal set construction exhausted its budget")


def _realizes(func: Tuple[int, ...], demand) -> bool:
    subset, pattern = demand
    return all(func[i] == b for i, b in zip(subset, pattern))


def verify_universal(us: UniversalSet, seed: int = 0) -> bool:
    """Check the defining property; exhaustive when the demand space is small."""
    n_demands = math.comb(us.n, us.k) * math.comb(us.k, us.p)
    if n_demands <= DEMAND_CAP:
        demands = _universal_demands(us.n, us.k, us.p)
    else:
        rng = random.Random(seed)

        def gen():
            for _ in range(20000):
                subset = tuple(sorted(rng.sample(range(us.n), us.k)))
                ones = set(rng.sample(range(us.k), us.p))
                yield subset, tuple(1 if j in ones else 0 for j in range(us.k))

        demands = gen()
    for d in demands:
        if not any(_realizes(f, d) for f in us.functions):
            return False
    return True
