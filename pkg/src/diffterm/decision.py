"""Decision procedures for difference terms and difference term operations.

``has_dto`` decides whether one algebra has a difference term operation by
checking that every mixed pair of labeled triples has a local difference term
operation. Two independent procedures decide whether the generated variety has
a difference term: the pentagon conditions, and ``has_dto`` on every
3-generated subalgebra of the square.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement, product
from typing import NamedTuple, Union

import numpy as np

from .algebra import (
    FiniteAlgebra,
    close,
    generate_subalgebra,
    generate_subproduct,
    induced_algebra,
    subproduct_carrier,
)
from .commutator import is_abelian_over, self_commutator
from .congruence import (
    ji_lower_cover,
    kernel_of_projection,
    lift_congruence,
    principal_congruence,
)
from .errors import CloneTooLarge, NotIdempotentError
from .tables import TernaryTable
from .tct import TypeOneWitness, omits_type_one, type_one_witness
from .terms import Generator, Term


class LabeledTriple(NamedTuple):
    a: int
    b: int
    flag: int


@dataclass(frozen=True)
class FailingPair:
    t0: LabeledTriple
    t1: LabeledTriple

    def describe(self, labels=None) -> str:
        def show(t):
            if labels is None:
                return f"({t.a},{t.b},{t.flag})"
            return f"({_pair_str(labels[t.a])},{_pair_str(labels[t.b])},{t.flag})"

        return f"no local difference term operation for {show(self.t0)} and {show(self.t1)}"


@dataclass(frozen=True)
class Condition2Witness:
    a: int
    b: int
    c: int

    def describe(self) -> str:
        return (
            f"condition 2 fails at (a,b,c) = ({self.a},{self.b},{self.c}): "
            f"Cg(a,b) in Sg{{a,b,c}} is join irreducible, abelian over its lower cover, "
            f"and ((a,b),(b,b)) escapes the pentagon bound"
        )


@dataclass(frozen=True)
class Condition3Witness:
    x0: int
    x1: int
    y0: int
    y1: int

    def generators(self) -> tuple[tuple[int, int], ...]:
        return ((self.x0, self.x1), (self.y0, self.x1), (self.x0, self.y1))

    def describe(self) -> str:
        gens = ", ".join(_pair_str(p) for p in self.generators())
        return (
            f"condition 3 fails at (x0,x1,y0,y1) = ({self.x0},{self.x1},{self.y0},{self.y1}): "
            f"in the subalgebra of A^2 generated by {gens}, beta = Cg(0,1) is join irreducible "
            f"with lower cover alpha, rho0 v alpha = 1, and [beta,beta] <= alpha"
        )


@dataclass(frozen=True)
class FailingSubalgebra:
    generators: tuple[tuple[int, int], ...]
    carrier: tuple[tuple[int, int], ...]
    failure: FailingPair

    def describe(self) -> str:
        gens = ", ".join(_pair_str(p) for p in self.generators)
        carrier = ", ".join(_pair_str(p) for p in self.carrier)
        return (
            f"the subalgebra of A^2 generated by {gens} (carrier {{{carrier}}}) has no difference "
            f"term operation: {self.failure.describe(self.carrier)}"
        )


Certificate = Union[TypeOneWitness, Condition2Witness, Condition3Witness, FailingPair, FailingSubalgebra]


@dataclass(frozen=True)
class Verdict:
    answer: bool
    certificate: Certificate | None = None

    def __post_init__(self):
        if self.answer and self.certificate is not None:
            raise ValueError("a positive verdict carries no certificate")
        if not self.answer and self.certificate is None:
            raise ValueError("a negative verdict needs a certificate")

    def __bool__(self) -> bool:
        return self.answer


YES = Verdict(True)


def _pair_str(p) -> str:
    return f"({p[0]},{p[1]})"


def _require_idempotent(algebra: FiniteAlgebra) -> None:
    if not algebra.is_idempotent():
        raise NotIdempotentError(f"{algebra.name} is not idempotent")


# ---------------------------------------------------------------- one algebra


def _target_mask(algebra: FiniteAlgebra, a: int, b: int, taylor: bool) -> np.ndarray:
    """Elements of ``a / [Cg(a,b), Cg(a,b)]`` as a boolean mask."""
    theta = principal_congruence(algebra, a, b)
    delta = self_commutator(algebra, theta, taylor=taylor)
    return delta.reps == delta.reps[a]


def _taylor(algebra: FiniteAlgebra, taylor: bool | None) -> bool:
    return omits_type_one(algebra) if taylor is None else taylor


def pair_has_ldto(
    algebra: FiniteAlgebra, t0: LabeledTriple, t1: LabeledTriple, *, taylor: bool | None = None
) -> Term | None:
    """A term witnessing a local difference term operation for ``{t0, t1}``, or None.

    For ``t0 = (a, b, 0)`` and ``t1 = (a', b', 1)`` this searches the subalgebra of
    ``A x A`` generated by ``(a,a'), (b,a'), (b,b')`` for a pair in
    ``a/[Cg(a,b),Cg(a,b)] x {b'}``. Same-flag pairs are answered by projections.
    ``taylor`` says whether the fast commutator may be used; by default it is
    decided by testing for type 1.
    """
    _require_idempotent(algebra)
    t0, t1 = LabeledTriple(*t0), LabeledTriple(*t1)
    if t0.flag == t1.flag:
        return Generator(1) if t0.flag == 0 else Generator(3)
    if t0.flag == 1:
        t0, t1 = t1, t0
    a, b, _ = t0
    a2, b2, _ = t1
    n = algebra.size
    mask = np.zeros(n * n, dtype=bool)
    mask[np.flatnonzero(_target_mask(algebra, a, b, _taylor(algebra, taylor))) * n + b2] = True
    cl = close(algebra, [a * n + a2, b * n + a2, b * n + b2], 2, stop=mask)
    return None if cl.hit is None else cl.witnesses[cl.hit]


def has_dto(algebra: FiniteAlgebra, *, taylor: bool | None = None) -> Verdict:
    """Whether the algebra has a difference term operation.

    On failure the certificate is the lexicographically least ``(a, b, a', b')``
    whose triples ``(a,b,0), (a',b',1)`` have no local difference term operation.
    """
    _require_idempotent(algebra)
    n = algebra.size
    if n == 1:
        return YES
    taylor = _taylor(algebra, taylor)
    for a, b in product(range(n), repeat=2):
        if a == b:
            # (b, b') is a generator and lies in {a} x {b'}
            continue
        target = np.flatnonzero(_target_mask(algebra, a, b, taylor))
        for a2, b2 in product(range(n), repeat=2):
            if a2 == b2:
                # (a, a') is a generator and lies in a/delta x {b'}
                continue
            mask = np.zeros(n * n, dtype=bool)
            mask[target * n + b2] = True
            cl = close(algebra, [a * n + a2, b * n + a2, b * n + b2], 2, stop=mask, track=False)
            if cl.hit is None:
                return Verdict(False, FailingPair(LabeledTriple(a, b, 0), LabeledTriple(a2, b2, 1)))
    return YES


# ---------------------------------------------------------------- pentagon conditions


def condition2_violated(algebra: FiniteAlgebra, a: int, b: int, c: int, *, taylor: bool = True, _subs=None) -> bool:
    if a == b:
        return False
    elems, _ = generate_subalgebra(algebra, [a, b, c])
    key = tuple(elems)
    if _subs is not None and key in _subs:
        sub = _subs[key]
    else:
        sub = induced_algebra(algebra, elems)
        if _subs is not None:
            _subs[key] = sub
    ia, ib, ic = (elems.index(x) for x in (a, b, c))
    alpha = ji_lower_cover(sub, ia, ib)
    if alpha is None:
        return False
    beta = principal_congruence(sub, ia, ib)
    if not is_abelian_over(sub, beta, alpha, taylor=taylor):
        return False
    diagonal = [(x, x) for x in range(sub.size)]
    C = generate_subproduct(sub, [(ia, ib), (ia, ic), (ib, ic)] + diagonal)
    meet01 = lift_congruence(C, alpha, 0).meet(lift_congruence(C, alpha, 1))
    gamma = principal_congruence(C.algebra, C.index((ia, ic)), C.index((ib, ic)))
    bound = meet01.join(gamma)
    return not bound.related(C.index((ia, ib)), C.index((ib, ib)))


def condition3_violated(algebra: FiniteAlgebra, x0: int, x1: int, y0: int, y1: int, *, taylor: bool = True) -> bool:
    if x0 == y0:
        return False
    S = generate_subproduct(algebra, [(x0, x1), (y0, x1), (x0, y1)])
    sub = S.algebra
    i0, i1 = S.index((x0, x1)), S.index((y0, x1))
    alpha = ji_lower_cover(sub, i0, i1)
    if alpha is None:
        return False
    if not kernel_of_projection(S, 0).join(alpha).is_top():
        return False
    beta = principal_congruence(sub, i0, i1)
    return is_abelian_over(sub, beta, alpha, taylor=taylor)


def variety_has_dt_pentagon(algebra: FiniteAlgebra) -> Verdict:
    """Omits type 1, and no triple or quadruple violates conditions 2 or 3."""
    _require_idempotent(algebra)
    n = algebra.size
    if n == 1:
        return YES
    witness = type_one_witness(algebra)
    if witness is not None:
        return Verdict(False, witness)
    subs: dict = {}
    for a, b, c in product(range(n), repeat=3):
        if condition2_violated(algebra, a, b, c, _subs=subs):
            return Verdict(False, Condition2Witness(a, b, c))
    for x0, x1, y0, y1 in product(range(n), repeat=4):
        if condition3_violated(algebra, x0, x1, y0, y1):
            return Verdict(False, Condition3Witness(x0, x1, y0, y1))
    return YES


# ---------------------------------------------------------------- local method


def three_generated_subalgebras(algebra: FiniteAlgebra, first=()):
    """Yield ``(generators, carrier codes)`` for each distinct subalgebra of
    ``A x A`` generated by a 3-element multiset, lexicographic in the sorted
    generator codes, after the multisets in ``first``."""
    n = algebra.size
    seen = set()
    candidates = list(first) + list(combinations_with_replacement(range(n * n), 3))
    for gens in candidates:
        pairs = tuple(divmod(g, n) for g in gens)
        carrier = tuple(subproduct_carrier(algebra, pairs))
        if carrier in seen:
            continue
        seen.add(carrier)
        yield pairs, carrier


def failing_subalgebras(algebra: FiniteAlgebra):
    """Yield a :class:`FailingSubalgebra` for every 3-generated subalgebra of
    the square without a difference term operation, in search order.

    When type 1 occurs, the 2-generated subalgebra carrying it is tried first
    (embedded diagonally); otherwise the fast commutator is used throughout,
    which is sound since every algebra in the variety then has a Taylor term.
    """
    _require_idempotent(algebra)
    n = algebra.size
    if n == 1:
        return
    witness = type_one_witness(algebra)
    taylor = witness is None
    first = []
    if witness is not None:
        a, b = witness.pair
        first.append((a * n + a, a * n + a, b * n + b))
    for pairs, carrier in three_generated_subalgebras(algebra, first):
        sub = induced_algebra(algebra, carrier, 2)
        verdict = has_dto(sub, taylor=taylor)
        if not verdict:
            yield FailingSubalgebra(pairs, tuple(divmod(c, n) for c in carrier), verdict.certificate)


def variety_has_dt_local(algebra: FiniteAlgebra) -> Verdict:
    """Every 3-generated subalgebra of the square has a difference term operation."""
    failure = next(failing_subalgebras(algebra), None)
    return YES if failure is None else Verdict(False, failure)


# ---------------------------------------------------------------- clone oracle


def _pack_rows(rows: np.ndarray, n: int) -> np.ndarray:
    """Exact packing of value rows into int64 words, ``62 // bits`` digits per word."""
    bits = max(1, (n - 1).bit_length())
    per = 62 // bits
    m, width = rows.shape
    words = -(-width // per)
    padded = np.zeros((m, words * per), dtype=np.int64)
    padded[:, :width] = rows
    weights = np.left_shift(np.int64(1), bits * np.arange(per, dtype=np.int64))
    return padded.reshape(m, words, per) @ weights


def _unique_rows(rows: np.ndarray, n: int) -> np.ndarray:
    """Distinct rows, in order of first occurrence."""
    _, first = np.unique(_pack_rows(rows, n), axis=0, return_index=True)
    first.sort()
    return rows[first]


def _images(op, pools: list[np.ndarray], budget: int = 1 << 21):
    """Values of ``op`` on every argument tuple drawn from ``pools``, in chunks of rows."""
    k = op.arity
    last = pools[-1]
    if k == 1:
        yield op.table[last]
        return
    heads = np.indices([len(p) for p in pools[:-1]]).reshape(k - 1, -1).T
    step = max(1, budget // max(1, last.size))
    for lo in range(0, len(heads), step):
        chunk = heads[lo : lo + step]
        args = [pools[i][chunk[:, i]][:, None, :] for i in range(k - 1)]
        shape = (len(chunk),) + last.shape
        idx = tuple(np.broadcast_to(a, shape) for a in args) + (np.broadcast_to(last[None], shape),)
        yield op.table[idx].reshape(-1, last.shape[1])


def enumerate_ternary_clone(algebra: FiniteAlgebra, cap: int = 4096) -> list[TernaryTable]:
    """All ternary term operations, by closing the projections under the basic operations.

    Raises :class:`CloneTooLarge` once more than ``cap`` tables are found.
    """
    n = algebra.size
    width = n**3
    rows = [r for r in np.indices((n, n, n)).reshape(3, -1)]
    rows += [np.full(width, op.table[()], dtype=np.int64) for op in algebra.operations if op.arity == 0]
    old = np.empty((0, width), dtype=np.int64)
    fresh = _unique_rows(np.stack(rows), n)

    def too_large():
        return CloneTooLarge(f"more than {cap} ternary term operations")

    while len(fresh):
        everything = np.concatenate([old, fresh])
        if len(everything) > cap:
            raise too_large()
        found = everything
        for op in algebra.operations:
            for j in range(op.arity):
                # argument tuples whose first fresh entry sits at position j
                pools = [old] * j + [fresh] + [everything] * (op.arity - j - 1)
                if any(len(pool) == 0 for pool in pools):
                    continue
                for block in _images(op, pools):
                    found = _unique_rows(np.concatenate([found, block]), n)
                    if len(found) > cap:
                        raise too_large()
        old, fresh = everything, found[len(everything):]
    return sorted((TernaryTable(v, n) for v in old), key=lambda t: t.entries())
