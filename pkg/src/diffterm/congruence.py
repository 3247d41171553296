"""Congruences of finite algebras.

Congruence generation propagates only pairs that actually merged two blocks:
the equivalence they generate is the current partition, so closing those
pairs under basic translations closes the whole partition.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .algebra import FiniteAlgebra, SubProduct
from .partition import Partition, UnionFind, bottom, top

__all__ = [
    "bottom",
    "top",
    "is_congruence",
    "principal_congruence",
    "congruence_generated",
    "ji_lower_cover",
    "kernel_of_projection",
    "lift_congruence",
    "all_congruences",
]


def is_congruence(algebra: FiniteAlgebra, p: Partition) -> bool:
    """Single-coordinate substitution test: for every operation, argument tuple
    and position ``i``, replacing ``x_i`` by any ``y`` in its block keeps the
    value in the same block."""
    if p.size != algebra.size:
        raise ValueError(f"partition has size {p.size}, algebra has {algebra.size}")
    reps = p.reps
    for T in algebra.translations():
        # rows of equal-rep elements must map into equal blocks columnwise
        if not np.array_equal(reps[T], reps[T[reps]]):
            return False
    return True


def _propagate(algebra: FiniteAlgebra, uf: UnionFind, xs: list[int], ys: list[int]) -> None:
    trans = algebra.translations()
    while xs:
        X = np.array(xs, dtype=np.int64)
        Y = np.array(ys, dtype=np.int64)
        xs, ys = [], []
        for T in trans:
            P = T[X].ravel()
            Q = T[Y].ravel()
            root = uf.roots()
            rp, rq = root[P], root[Q]
            diff = rp != rq
            if not diff.any():
                continue
            P, Q = P[diff], Q[diff]
            _, keep = np.unique(np.stack([rp[diff], rq[diff]]), axis=1, return_index=True)
            for j in np.sort(keep):
                p, q = int(P[j]), int(Q[j])
                if uf.union(p, q):
                    xs.append(p)
                    ys.append(q)


def congruence_generated(algebra: FiniteAlgebra, pairs: Iterable[tuple[int, int]]) -> Partition:
    """Least congruence containing every pair."""
    uf = UnionFind(algebra.size)
    xs, ys = [], []
    for a, b in pairs:
        a, b = int(a), int(b)
        if uf.union(a, b):
            xs.append(a)
            ys.append(b)
    _propagate(algebra, uf, xs, ys)
    return uf.partition()


def congruence_join_pairs(algebra: FiniteAlgebra, base: Partition, pairs) -> Partition:
    """Least congruence above the congruence ``base`` containing ``pairs``."""
    uf = UnionFind(algebra.size)
    for x, r in enumerate(base.reps.tolist()):
        uf.union(x, r)
    xs, ys = [], []
    for a, b in pairs:
        a, b = int(a), int(b)
        if uf.union(a, b):
            xs.append(a)
            ys.append(b)
    _propagate(algebra, uf, xs, ys)
    return uf.partition()


def principal_congruence(algebra: FiniteAlgebra, a: int, b: int) -> Partition:
    cache = algebra._cache.setdefault("cg", {})
    key = (min(a, b), max(a, b))
    if key not in cache:
        cache[key] = congruence_generated(algebra, [key])
    return cache[key]


def ji_lower_cover(algebra: FiniteAlgebra, a: int, b: int) -> Partition | None:
    """Unique lower cover of ``Cg(a, b)`` if that congruence is join irreducible.

    The candidate is the join of all principal congruences ``Cg(c, d)`` with
    ``(c, d)`` in ``Cg(a, b)`` that avoid ``(a, b)``; every congruence strictly
    below ``Cg(a, b)`` is such a join, so ``Cg(a, b)`` is join irreducible iff
    the candidate still avoids ``(a, b)``.
    """
    if a == b:
        return None
    beta = principal_congruence(algebra, a, b)
    alpha = bottom(algebra.size)
    for c, d in beta.pairs():
        if alpha.related(c, d):
            continue
        cg = principal_congruence(algebra, c, d)
        if not cg.related(a, b):
            alpha = alpha.join(cg)
    return None if alpha.related(a, b) else alpha


def kernel_of_projection(sub: SubProduct, coord: int) -> Partition:
    return Partition.from_labels([pair[coord] for pair in sub.carrier])


def lift_congruence(sub: SubProduct, theta: Partition, coord: int) -> Partition:
    """Relate two carrier pairs iff their ``coord`` entries are ``theta``-related."""
    if theta.size != sub.parent.size:
        raise ValueError(f"congruence has size {theta.size}, factor has {sub.parent.size}")
    return Partition.from_labels([theta.rep(pair[coord]) for pair in sub.carrier])


def all_congruences(algebra: FiniteAlgebra) -> list[Partition]:
    """Every congruence: the principal ones closed under joins, plus bottom.

    Sorted by block count descending (bottom first), ties by representative array.
    """
    n = algebra.size
    found = {bottom(n)}
    principal = set()
    for a in range(n):
        for b in range(a + 1, n):
            principal.add(principal_congruence(algebra, a, b))
    found |= principal
    frontier = set(principal)
    while frontier:
        new = set()
        for p in frontier:
            for q in principal:
                j = p.join(q)
                if j not in found:
                    new.add(j)
        found |= new
        frontier = new
    return sorted(found, key=lambda p: (-p.block_count, p.reps.tolist()))
