"""Type tests for the decision procedures: omitting type 1, and type 2 of a prime quotient."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import FiniteAlgebra, generate_subalgebra, induced_algebra, quotient
from .commutator import is_abelian_over
from .congruence import all_congruences
from .errors import NotIdempotentError, PreconditionError
from .partition import Partition


@dataclass(frozen=True)
class TypeOneWitness:
    """A 2-generated subalgebra with a two-block congruence whose quotient is a set."""

    pair: tuple[int, int]
    subuniverse: tuple[int, ...]
    theta: Partition
    projections: tuple[int, ...]  # per operation, the coordinate it projects onto

    def describe(self) -> str:
        return (
            f"Sg{{{self.pair[0]},{self.pair[1]}}} = {{{','.join(map(str, self.subuniverse))}}} "
            f"modulo {self.theta} is a 2-element set"
        )


def _projection_index(algebra: FiniteAlgebra) -> list[int] | None:
    """For each operation the coordinate it projects onto, or None if some is not a projection."""
    out = []
    for op in algebra.operations:
        k = op.arity
        grid = np.indices((algebra.size,) * k).reshape(k, -1)
        values = op.table.ravel()
        hit = next((i for i in range(k) if np.array_equal(values, grid[i])), None)
        if hit is None:
            return None
        out.append(hit)
    return out


def type_one_witness(algebra: FiniteAlgebra) -> TypeOneWitness | None:
    """A 2-element set in ``HS(A)``, searched over pairs ``a < b`` in order."""
    if not algebra.is_idempotent():
        raise NotIdempotentError(f"{algebra.name} is not idempotent")
    cache = algebra._cache
    if "type1" in cache:
        return cache["type1"]
    result = None
    seen = set()
    n = algebra.size
    for a in range(n):
        for b in range(a + 1, n):
            elems, _ = generate_subalgebra(algebra, [a, b])
            key = tuple(elems)
            if key in seen:
                continue
            seen.add(key)
            sub = induced_algebra(algebra, elems)
            for theta in all_congruences(sub):
                if theta.block_count != 2:
                    continue
                quo, _ = quotient(sub, theta)
                proj = _projection_index(quo)
                if proj is not None:
                    result = TypeOneWitness((a, b), key, theta, tuple(proj))
                    break
            if result:
                break
        if result:
            break
    cache["type1"] = result
    return result


def omits_type_one(algebra: FiniteAlgebra) -> bool:
    return type_one_witness(algebra) is None


def prime_quotient_is_type2(
    algebra: FiniteAlgebra, alpha: Partition, beta: Partition, *, taylor: bool = True
) -> bool:
    """Type 2 test for a prime quotient once type 1 is ruled out: ``[beta, beta] <= alpha``."""
    if not alpha < beta:
        raise PreconditionError(f"{alpha} < {beta} does not hold, not a prime quotient")
    return is_abelian_over(algebra, beta, alpha, taylor=taylor)
