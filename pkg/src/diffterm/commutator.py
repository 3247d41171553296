"""Commutators ``[alpha, beta]`` of congruences.

A quad ``(x, y, u, v)`` is the 2x2 matrix with rows ``(x, y)`` and ``(u, v)``.
``M(alpha, beta)`` is the subalgebra of ``A**4`` generated by ``(a, a, a', a')``
for ``a alpha a'`` and ``(b, b', b, b')`` for ``b beta b'``. The commutator is
the limit of ``delta_0 = 0`` and ``delta_{i+1} = Cg{(u, v) : (x, y, u, v) in M,
x delta_i y}``.
"""

from __future__ import annotations

import numpy as np

from .algebra import FiniteAlgebra, close, induced_algebra, unpack
from .congruence import congruence_generated, is_congruence
from .errors import PreconditionError
from .partition import Partition, bottom


def _require_congruences(algebra: FiniteAlgebra, *parts: Partition) -> None:
    for p in parts:
        if p.size != algebra.size or not is_congruence(algebra, p):
            raise PreconditionError(f"{p} is not a congruence of {algebra.name}")


def _m_codes(algebra: FiniteAlgebra, alpha: Partition, beta: Partition) -> np.ndarray:
    n = algebra.size
    seeds = []
    for a, a2 in _relation(alpha):
        seeds.append(((a * n + a) * n + a2) * n + a2)
    for b, b2 in _relation(beta):
        seeds.append(((b * n + b2) * n + b) * n + b2)
    cl = close(algebra, seeds, 4, track=False)
    return np.array(sorted(set(cl.elements)), dtype=np.int64)


def _relation(p: Partition) -> list[tuple[int, int]]:
    """All ordered pairs (including diagonal) of the equivalence."""
    return [(x, y) for block in p.blocks() for x in block for y in block]


def m_closure(algebra: FiniteAlgebra, alpha: Partition, beta: Partition) -> set[tuple[int, int, int, int]]:
    _require_congruences(algebra, alpha, beta)
    n = algebra.size
    return {unpack(c, n, 4) for c in _m_codes(algebra, alpha, beta).tolist()}


def _delta_iteration(algebra: FiniteAlgebra, x, y, u, v) -> list[Partition]:
    """The chain ``delta_1 <= delta_2 <= ...`` up to its fixpoint."""
    delta = bottom(algebra.size)
    chain = []
    while True:
        reps = delta.reps
        mask = reps[x] == reps[y]
        nxt = congruence_generated(algebra, zip(u[mask].tolist(), v[mask].tolist()))
        chain.append(nxt)
        if nxt == delta:
            return chain
        delta = nxt


def delta_sequence(algebra: FiniteAlgebra, alpha: Partition, beta: Partition) -> list[Partition]:
    """``[delta_1, ..., delta_k]`` from the matrix method; the last two entries
    coincide (the fixpoint), so ``len - 1`` rounds made progress."""
    _require_congruences(algebra, alpha, beta)
    n = algebra.size
    codes = _m_codes(algebra, alpha, beta)
    x, y, u, v = (codes // n**3) % n, (codes // n**2) % n, (codes // n) % n, codes % n
    return _delta_iteration(algebra, x, y, u, v)


def commutator_matrices(algebra: FiniteAlgebra, alpha: Partition, beta: Partition) -> Partition:
    return delta_sequence(algebra, alpha, beta)[-1]


def _pair_algebra(algebra: FiniteAlgebra, alpha: Partition):
    """``A(alpha)``: the subalgebra of ``A x A`` of ``alpha``-related pairs."""
    n = algebra.size
    codes = np.array([x * n + u for x, u in sorted(_relation(alpha))], dtype=np.int64)
    return induced_algebra(algebra, codes, 2, name=f"{algebra.name}(alpha)"), codes


def commutator_fast(
    algebra: FiniteAlgebra, alpha: Partition, beta: Partition, *, taylor: bool = False
) -> Partition:
    """``[beta, beta]`` through the congruence ``Delta`` of ``A(beta)``.

    ``Delta`` is generated by the pairs ``((b, b), (b', b'))``, ``b beta b'``,
    and replaces ``M`` in the delta iteration: a quad ``(x, y, u, v)`` counts
    when column ``(x, u)`` is ``Delta``-related to column ``(y, v)``. Only valid
    when the algebra has a Taylor term, which the caller certifies with
    ``taylor=True``; only the symmetric call ``alpha == beta`` is offered.
    """
    if not taylor:
        raise PreconditionError("the fast commutator needs a Taylor term; pass taylor=True once established")
    if alpha != beta:
        raise PreconditionError("the fast commutator is only offered for [beta, beta]")
    _require_congruences(algebra, beta)
    n = algebra.size
    pair_alg, codes = _pair_algebra(algebra, beta)
    where = {int(c): i for i, c in enumerate(codes)}
    gens = [(where[b * n + b], where[b2 * n + b2]) for b, b2 in _relation(beta) if b < b2]
    big_delta = congruence_generated(pair_alg, gens)
    xs, ys, us, vs = [], [], [], []
    for block in big_delta.blocks():
        cols = codes[block]
        top_row, bottom_row = cols // n, cols % n
        i, j = np.meshgrid(np.arange(len(block)), np.arange(len(block)), indexing="ij")
        xs.append(top_row[i.ravel()])
        ys.append(top_row[j.ravel()])
        us.append(bottom_row[i.ravel()])
        vs.append(bottom_row[j.ravel()])
    x, y, u, v = (np.concatenate(a) for a in (xs, ys, us, vs))
    return _delta_iteration(algebra, x, y, u, v)[-1]


def self_commutator(algebra: FiniteAlgebra, theta: Partition, *, taylor: bool = False) -> Partition:
    """``[theta, theta]``, memoized per algebra; fast path only when ``taylor``."""
    cache = algebra._cache.setdefault("comm", {})
    key = (theta, taylor)
    if key not in cache:
        if theta.is_bottom():
            cache[key] = theta
        elif taylor:
            cache[key] = commutator_fast(algebra, theta, theta, taylor=True)
        else:
            cache[key] = commutator_matrices(algebra, theta, theta)
    return cache[key]


def is_abelian_over(algebra: FiniteAlgebra, beta: Partition, alpha: Partition, *, taylor: bool = False) -> bool:
    """Whether ``[beta, beta] <= alpha``."""
    if alpha.size != algebra.size:
        raise PreconditionError("size mismatch")
    return self_commutator(algebra, beta, taylor=taylor) <= alpha
