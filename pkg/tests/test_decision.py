from __future__ import annotations

from itertools import product

import numpy as np
import pytest

from conftest import CORPUS, random_batch, trivial1
from diffterm.algebra import FiniteAlgebra, induced_algebra, quotient
from diffterm.congruence import all_congruences
from diffterm.construct import verify_dt_table
from diffterm.decision import (
    Condition2Witness,
    Condition3Witness,
    FailingPair,
    FailingSubalgebra,
    LabeledTriple,
    Verdict,
    condition2_violated,
    condition3_violated,
    enumerate_ternary_clone,
    has_dto,
    pair_has_ldto,
    variety_has_dt_local,
    variety_has_dt_pentagon,
)
from diffterm.errors import CloneTooLarge, NotIdempotentError
from diffterm.io import load_fixture
from diffterm.tct import TypeOneWitness
from diffterm.terms import Apply, Generator, evaluate

IDEMPOTENT_BINARY_2 = [
    [0, a, b, 1] for a in range(2) for b in range(2)
]  # the four idempotent binary tables on {0, 1}
TWO_OP_2 = [
    FiniteAlgebra(f"B{i}{j}", 2, [("f", 2, f), ("g", 2, g)])
    for i, f in enumerate(IDEMPOTENT_BINARY_2)
    for j, g in enumerate(IDEMPOTENT_BINARY_2)
]
ONE_OP_2 = [FiniteAlgebra(f"B{i}", 2, [("f", 2, f)]) for i, f in enumerate(IDEMPOTENT_BINARY_2)]
RANDOM_SMALL = random_batch(41, 50, [2, 3])


_VERDICTS: dict = {}


def local(A: FiniteAlgebra) -> Verdict:
    key = ("local", id(A))
    if key not in _VERDICTS:
        _VERDICTS[key] = variety_has_dt_local(A)
    return _VERDICTS[key]


def pentagon(A: FiniteAlgebra) -> Verdict:
    key = ("pentagon", id(A))
    if key not in _VERDICTS:
        _VERDICTS[key] = variety_has_dt_pentagon(A)
    return _VERDICTS[key]


def naive_clone(A: FiniteAlgebra) -> set:
    n = A.size
    points = list(product(range(n), repeat=3))
    clone = {tuple(p[i] for p in points) for i in range(3)}
    while True:
        new = set(clone)
        for i, op in enumerate(A.operations):
            for args in product(sorted(clone), repeat=op.arity):
                new.add(tuple(A.apply(i, [a[j] for a in args]) for j in range(len(points))))
        if new == clone:
            return clone
        clone = new


def clone_has_dto(A: FiniteAlgebra) -> bool:
    return any(verify_dt_table(A, t) for t in enumerate_ternary_clone(A))


# ---------------------------------------------------------------- one algebra


def test_pair_has_ldto_examples():
    w = pair_has_ldto(load_fixture("sl2"), (0, 1, 0), (0, 1, 1))
    assert w == Generator(3)
    w = pair_has_ldto(load_fixture("mal2"), (0, 1, 0), (0, 1, 1))
    assert w == Apply(0, (Generator(1), Generator(2), Generator(3)))
    assert pair_has_ldto(load_fixture("set2"), (0, 1, 0), (0, 1, 1)) is None


def test_pair_has_ldto_same_flags(algebra):
    assert pair_has_ldto(algebra, (0, 0, 0), (0, 0, 0)) == Generator(1)
    assert pair_has_ldto(algebra, (0, 0, 1), (0, 0, 1)) == Generator(3)


@pytest.mark.parametrize("A", CORPUS, ids=lambda A: A.name)
def test_pair_witnesses_meet_their_targets(A):
    """Every witness found evaluates into the target set at the generating pairs."""
    from diffterm.commutator import self_commutator
    from diffterm.congruence import principal_congruence

    n = A.size
    for a, b, a2, b2 in product(range(n), repeat=4):
        w = pair_has_ldto(A, (a, b, 0), (a2, b2, 1))
        if w is None:
            continue
        delta = self_commutator(A, principal_congruence(A, a, b))
        assert evaluate(w, A, (a, b, b)) in [x for x in range(n) if delta.related(x, a)]
        assert evaluate(w, A, (a2, a2, b2)) == b2


def test_has_dto_examples():
    assert has_dto(load_fixture("ndt4")).answer
    v = has_dto(load_fixture("set2"))
    assert not v.answer
    assert v.certificate == FailingPair(LabeledTriple(0, 1, 0), LabeledTriple(0, 1, 1))
    assert has_dto(trivial1()).answer


@pytest.mark.parametrize("A", ONE_OP_2 + TWO_OP_2, ids=lambda A: A.name)
def test_has_dto_against_clone_size_two(A):
    assert has_dto(A).answer == clone_has_dto(A)


@pytest.mark.parametrize("A", CORPUS + RANDOM_SMALL[:25], ids=lambda A: A.name)
def test_has_dto_against_clone(A):
    try:
        expected = clone_has_dto(A)
    except CloneTooLarge:
        pytest.skip("ternary clone above the enumeration cap")
    assert has_dto(A).answer == expected


def test_has_dto_taylor_flag_is_irrelevant_to_answer():
    for A in CORPUS + RANDOM_SMALL:
        from diffterm.tct import omits_type_one

        if omits_type_one(A):
            assert has_dto(A, taylor=True).answer == has_dto(A, taylor=False).answer


@pytest.mark.parametrize("A", CORPUS + RANDOM_SMALL, ids=lambda A: A.name)
def test_failing_pair_replays(A):
    v = has_dto(A)
    if v:
        return
    c = v.certificate
    assert pair_has_ldto(A, c.t0, c.t1) is None
    # lexicographically least: every earlier mixed pair succeeds
    n = A.size
    for a, b, a2, b2 in product(range(n), repeat=4):
        if (a, b, a2, b2) >= (c.t0.a, c.t0.b, c.t1.a, c.t1.b):
            break
        assert pair_has_ldto(A, (a, b, 0), (a2, b2, 1)) is not None


def test_rejects_non_idempotent():
    A = FiniteAlgebra("C", 2, [("c", 1, [0, 0])])
    for f in (has_dto, variety_has_dt_local, variety_has_dt_pentagon):
        with pytest.raises(NotIdempotentError):
            f(A)
    with pytest.raises(NotIdempotentError):
        pair_has_ldto(A, (0, 1, 0), (0, 1, 1))


def test_verdict_invariants():
    with pytest.raises(ValueError):
        Verdict(False)
    with pytest.raises(ValueError):
        Verdict(True, Condition2Witness(0, 1, 2))
    assert Verdict(True) and not Verdict(False, Condition2Witness(0, 1, 2))


# ---------------------------------------------------------------- clone


def test_clone_examples():
    assert len(enumerate_ternary_clone(load_fixture("set2"))) == 3
    mal2 = enumerate_ternary_clone(load_fixture("mal2"))
    assert len(mal2) == 4
    assert any(all(t[x, y, z] == x ^ y ^ z for x, y, z in product(range(2), repeat=3)) for t in mal2)
    sl2 = enumerate_ternary_clone(load_fixture("sl2"))
    assert len(sl2) == 7
    meets = {
        tuple(min([x, y, z][i] for i in range(3) if mask >> i & 1) for x, y, z in product(range(2), repeat=3))
        for mask in range(1, 8)
    }
    assert {tuple(t.entries()) for t in sl2} == meets


@pytest.mark.parametrize("A", CORPUS + RANDOM_SMALL[:12], ids=lambda A: A.name)
def test_clone_against_naive(A):
    try:
        fast = {tuple(t.entries()) for t in enumerate_ternary_clone(A, cap=200)}
    except CloneTooLarge:
        pytest.skip("ternary clone above 200 tables")
    assert fast == naive_clone(A)


def test_clone_cap():
    with pytest.raises(CloneTooLarge):
        enumerate_ternary_clone(load_fixture("sl2"), cap=5)


# ---------------------------------------------------------------- variety level


def test_pentagon_examples():
    v = variety_has_dt_pentagon(load_fixture("ndt4"))
    assert not v.answer
    assert v.certificate == Condition3Witness(0, 0, 1, 3)
    assert v.certificate.generators() == ((0, 0), (1, 0), (0, 3))
    assert variety_has_dt_pentagon(load_fixture("sl2")).answer
    assert variety_has_dt_pentagon(load_fixture("mal2")).answer
    assert isinstance(variety_has_dt_pentagon(load_fixture("set2")).certificate, TypeOneWitness)


def test_local_examples():
    v = variety_has_dt_local(load_fixture("ndt4"))
    assert not v.answer and isinstance(v.certificate, FailingSubalgebra)
    assert variety_has_dt_local(load_fixture("sl2")).answer
    assert variety_has_dt_local(load_fixture("mal2")).answer
    assert variety_has_dt_local(trivial1()).answer
    assert variety_has_dt_pentagon(trivial1()).answer


@pytest.mark.parametrize("A", CORPUS + RANDOM_SMALL, ids=lambda A: A.name)
def test_methods_agree(A):
    assert local(A).answer == pentagon(A).answer


@pytest.mark.parametrize("A", CORPUS + RANDOM_SMALL, ids=lambda A: A.name)
def test_hierarchy(A):
    if local(A):
        assert has_dto(A)
    if pentagon(A):
        assert has_dto(A)


@pytest.mark.parametrize("A", [A for A in CORPUS + RANDOM_SMALL if A.size <= 4], ids=lambda A: A.name)
def test_quotient_stability(A):
    if not has_dto(A):
        return
    for theta in all_congruences(A):
        assert has_dto(quotient(A, theta)[0])


@pytest.mark.parametrize("A", CORPUS + RANDOM_SMALL, ids=lambda A: A.name)
def test_certificates_replay(A):
    n = A.size
    v = pentagon(A)
    c = v.certificate
    if isinstance(c, Condition3Witness):
        assert condition3_violated(A, c.x0, c.x1, c.y0, c.y1)
    elif isinstance(c, Condition2Witness):
        assert condition2_violated(A, c.a, c.b, c.c)
    v = local(A)
    c = v.certificate
    if c is not None:
        codes = [p * n + q for p, q in c.carrier]
        sub = induced_algebra(A, codes, 2)
        sv = has_dto(sub)
        assert not sv and sv.certificate == c.failure
        assert {p for p in c.generators} <= set(c.carrier)


def test_random_batch_exercises_both_answers():
    answers = {local(A).answer for A in RANDOM_SMALL}
    assert answers == {True, False}
    assert np.unique([A.size for A in RANDOM_SMALL]).tolist() == [2, 3]
