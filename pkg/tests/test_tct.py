from __future__ import annotations

import pytest

from conftest import CORPUS, naive_omits_type_one, random_batch
from diffterm.algebra import FiniteAlgebra, generate_subalgebra, induced_algebra, quotient
from diffterm.congruence import all_congruences, ji_lower_cover, principal_congruence
from diffterm.errors import NotIdempotentError, PreconditionError
from diffterm.io import load_fixture
from diffterm.partition import bottom, top
from diffterm.tct import omits_type_one, prime_quotient_is_type2, type_one_witness

RANDOM = random_batch(31, 60, [2, 3, 4]) + random_batch(32, 20, [2, 3], arities=(2, 3))


def test_examples():
    w = type_one_witness(load_fixture("set2"))
    assert w is not None
    assert w.pair == (0, 1) and w.subuniverse == (0, 1) and w.theta == bottom(2)
    assert omits_type_one(load_fixture("ndt4"))
    assert omits_type_one(load_fixture("sl2"))
    assert omits_type_one(load_fixture("mal2"))


@pytest.mark.parametrize("A", CORPUS + RANDOM, ids=lambda A: A.name)
def test_against_exhaustive_hs_search(A):
    assert omits_type_one(A) == naive_omits_type_one(A)


@pytest.mark.parametrize("A", CORPUS + RANDOM, ids=lambda A: A.name)
def test_witness_is_valid(A):
    w = type_one_witness(A)
    if w is None:
        return
    elems, _ = generate_subalgebra(A, list(w.pair))
    assert tuple(elems) == w.subuniverse
    sub = induced_algebra(A, elems)
    Q, _ = quotient(sub, w.theta)
    assert Q.size == 2
    for i, (op, j) in enumerate(zip(Q.operations, w.projections)):
        for x in range(2 ** op.arity):
            args = [(x >> k) & 1 for k in range(op.arity)]
            assert Q.apply(i, args) == args[j]


def test_two_element_projection_subalgebra_forces_type_one():
    # {0, 1} is closed and f restricts to the first projection there
    f = [0, 0, 2, 1, 1, 2, 0, 1, 2]
    A = FiniteAlgebra("P", 3, [("f", 2, f)])
    assert A.is_idempotent()
    assert not omits_type_one(A)


@pytest.mark.parametrize("A", [A for A in CORPUS + RANDOM if omits_type_one(A)], ids=lambda A: A.name)
def test_subalgebras_inherit_omission(A):
    n = A.size
    for a in range(n):
        for b in range(a + 1, n):
            elems, _ = generate_subalgebra(A, [a, b])
            assert omits_type_one(induced_algebra(A, elems))


def test_rejects_non_idempotent():
    with pytest.raises(NotIdempotentError):
        omits_type_one(FiniteAlgebra("C", 2, [("c", 1, [0, 0])]))


def test_prime_quotient_examples(algebra):
    assert prime_quotient_is_type2(load_fixture("mal2"), bottom(2), top(2))
    assert not prime_quotient_is_type2(load_fixture("sl2"), bottom(2), top(2))
    n = algebra.size
    with pytest.raises(PreconditionError):
        prime_quotient_is_type2(algebra, top(n), top(n))


def test_ndt4_prime_quotient_not_type2():
    # The top quotient of NDT4 is non-abelian, so it is not of type 2.
    assert not prime_quotient_is_type2(load_fixture("ndt4"), bottom(4), top(4))


@pytest.mark.parametrize("A", [A for A in CORPUS + RANDOM if omits_type_one(A)][:30], ids=lambda A: A.name)
def test_raising_alpha_keeps_type2(A):
    n = A.size
    cons = all_congruences(A)
    for a in range(n):
        for b in range(a + 1, n):
            alpha = ji_lower_cover(A, a, b)
            if alpha is None:
                continue
            beta = principal_congruence(A, a, b)
            if not prime_quotient_is_type2(A, alpha, beta):
                continue
            for alpha2 in cons:
                if alpha <= alpha2 < beta:
                    assert prime_quotient_is_type2(A, alpha2, beta)
