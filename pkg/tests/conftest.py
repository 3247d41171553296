from __future__ import annotations

from itertools import product

import numpy as np
import pytest

from diffterm.algebra import FiniteAlgebra
from diffterm.io import load_fixture
from diffterm.partition import Partition

# ---------------------------------------------------------------- corpus


def lattice2() -> FiniteAlgebra:
    return FiniteAlgebra("L2", 2, [("join", 2, [0, 1, 1, 1]), ("meet", 2, [0, 0, 0, 1])])


def affine_z3() -> FiniteAlgebra:
    return FiniteAlgebra.from_function("Z3aff", 3, {"p": (3, lambda x, y, z: (x - y + z) % 3)})


def chain3() -> FiniteAlgebra:
    return FiniteAlgebra.from_function("Chain3", 3, {"min": (2, min)})


def proj3() -> FiniteAlgebra:
    return FiniteAlgebra.from_function("Proj3", 3, {"f": (2, lambda x, y: x)})


def trivial1() -> FiniteAlgebra:
    return FiniteAlgebra("One", 1, [("f", 2, [0])])


def sl2_square() -> FiniteAlgebra:
    from diffterm.algebra import direct_square

    return direct_square(load_fixture("sl2"))


def corpus() -> list[FiniteAlgebra]:
    fixtures = [load_fixture(name) for name in ("ndt4", "sl2", "mal2", "set2")]
    return fixtures + [lattice2(), affine_z3(), chain3(), proj3(), trivial1(), sl2_square()]


CORPUS = corpus()
CORPUS_IDS = [A.name for A in CORPUS]


@pytest.fixture(params=CORPUS, ids=CORPUS_IDS)
def algebra(request) -> FiniteAlgebra:
    return request.param


def random_idempotent(rng: np.random.Generator, n: int, arities=(2,), name="R") -> FiniteAlgebra:
    ops = []
    for i, k in enumerate(arities):
        table = rng.integers(0, n, size=(n,) * k)
        for x in range(n):
            table[(x,) * k] = x
        ops.append((f"f{i}", k, table.ravel().tolist()))
    return FiniteAlgebra(name, n, ops)


def random_batch(seed: int, count: int, sizes, arities=(2,)) -> list[FiniteAlgebra]:
    rng = np.random.default_rng(seed)
    sizes = list(sizes)
    return [
        random_idempotent(rng, sizes[i % len(sizes)], arities, name=f"R{seed}_{i}")
        for i in range(count)
    ]


# ---------------------------------------------------------------- brute-force oracles
# Pure-Python reference implementations that share no code with the library
# beyond FiniteAlgebra.apply.


def naive_closure(A: FiniteAlgebra, gens, coords: int = 1) -> set:
    """Subuniverse of A**coords generated by tuples ``gens`` (ints when coords == 1)."""

    def op_at(i, args):
        if coords == 1:
            return A.apply(i, args)
        return tuple(A.apply(i, [a[c] for a in args]) for c in range(coords))

    current = set(gens)
    while True:
        new = set(current)
        for i, op in enumerate(A.operations):
            for args in product(sorted(current), repeat=op.arity):
                new.add(op_at(i, args))
        if new == current:
            return current
        current = new


def is_closed(A: FiniteAlgebra, subset) -> bool:
    s = set(subset)
    return all(
        A.apply(i, args) in s
        for i, op in enumerate(A.operations)
        for args in product(sorted(s), repeat=op.arity)
    )


def set_partitions(elements):
    elements = list(elements)
    if not elements:
        yield []
        return
    first, rest = elements[0], elements[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]


def all_partitions(n: int) -> list[Partition]:
    return [Partition.from_blocks(n, blocks) for blocks in set_partitions(range(n))]


def naive_is_congruence(A: FiniteAlgebra, p: Partition) -> bool:
    """Full compatibility: related argument tuples give related values."""
    n = A.size
    label = [p.rep(x) for x in range(n)]
    for i, op in enumerate(A.operations):
        for xs in product(range(n), repeat=op.arity):
            fx = label[A.apply(i, xs)]
            options = [[y for y in range(n) if label[y] == label[x]] for x in xs]
            for ys in product(*options):
                if label[A.apply(i, ys)] != fx:
                    return False
    return True


def naive_congruences(A: FiniteAlgebra) -> list[Partition]:
    return [p for p in all_partitions(A.size) if naive_is_congruence(A, p)]


def naive_m(A: FiniteAlgebra, alpha: Partition, beta: Partition) -> set:
    n = A.size
    gens = set()
    for a, a2 in product(range(n), repeat=2):
        if alpha.related(a, a2):
            gens.add((a, a, a2, a2))
    for b, b2 in product(range(n), repeat=2):
        if beta.related(b, b2):
            gens.add((b, b2, b, b2))
    return naive_closure(A, gens, 4)


def naive_commutator(A: FiniteAlgebra, alpha: Partition, beta: Partition, cons=None) -> Partition:
    """Least congruence delta with the term condition C(alpha, beta; delta)."""
    m = naive_m(A, alpha, beta)
    cons = naive_congruences(A) if cons is None else cons
    good = [d for d in cons if all(d.related(u, v) for x, y, u, v in m if d.related(x, y))]
    result = good[0]
    for d in good[1:]:
        result = result.meet(d)
    return result


def naive_omits_type_one(A: FiniteAlgebra) -> bool:
    """No subuniverse has a 2-block congruence whose quotient operations are all projections."""
    n = A.size
    for mask in range(1, 1 << n):
        sub = [x for x in range(n) if mask >> x & 1]
        if len(sub) < 2 or not is_closed(A, sub):
            continue
        for blocks in set_partitions(sub):
            if len(blocks) != 2:
                continue
            label = {x: j for j, block in enumerate(blocks) for x in block}
            if _compatible(A, sub, label) and _quotient_is_set(A, sub, label):
                return False
    return True


def _compatible(A, sub, label) -> bool:
    for i, op in enumerate(A.operations):
        for xs in product(sub, repeat=op.arity):
            for ys in product(sub, repeat=op.arity):
                if all(label[x] == label[y] for x, y in zip(xs, ys)):
                    if label[A.apply(i, xs)] != label[A.apply(i, ys)]:
                        return False
    return True


def _quotient_is_set(A, sub, label) -> bool:
    for i, op in enumerate(A.operations):
        if not any(
            all(label[A.apply(i, xs)] == label[xs[j]] for xs in product(sub, repeat=op.arity))
            for j in range(op.arity)
        ):
            return False
    return True
