"""Term witnesses: shared DAGs recording how a generated element arose.

Generator indices are 1-based, so ``Generator(1)`` is the variable ``x1``.
Children of an ``Apply`` node are other nodes, never copies, so a witness
built during a closure stays linear in the closure work.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

import numpy as np

if TYPE_CHECKING:
    from .algebra import FiniteAlgebra


@dataclass(frozen=True)
class Generator:
    index: int

    def __repr__(self) -> str:
        return f"Generator({self.index})"


@dataclass(frozen=True)
class Apply:
    op: int
    args: tuple

    def __repr__(self) -> str:
        return f"Apply({self.op}, {list(self.args)!r})"


Term = Union[Generator, Apply]


def _check(term: Term, algebra: FiniteAlgebra, arity: int) -> None:
    seen: set[int] = set()
    stack = [term]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        if isinstance(node, Generator):
            if not 1 <= node.index <= arity:
                raise ValueError(f"generator x{node.index} outside 1..{arity}")
            continue
        if not 0 <= node.op < len(algebra.operations):
            raise ValueError(f"unknown operation index {node.op}")
        if len(node.args) != algebra.operations[node.op].arity:
            raise ValueError(
                f"{algebra.operations[node.op].name} expects "
                f"{algebra.operations[node.op].arity} arguments, got {len(node.args)}"
            )
        stack.extend(node.args)


def evaluate(term: Term, algebra: FiniteAlgebra, values) -> int:
    """Evaluate ``term`` with ``x_i`` bound to ``values[i-1]``."""
    values = [int(v) for v in values]
    _check(term, algebra, len(values))
    memo: dict[int, int] = {}

    def ev(node: Term) -> int:
        key = id(node)
        if key not in memo:
            if isinstance(node, Generator):
                memo[key] = values[node.index - 1]
            else:
                memo[key] = algebra.apply(node.op, [ev(c) for c in node.args])
        return memo[key]

    return ev(term)


def term_table(term: Term, algebra: FiniteAlgebra, arity: int) -> np.ndarray:
    """Cayley table of the term operation, shape ``(n,)*arity``.

    Shared nodes are evaluated once; each node costs one vectorized lookup
    over all ``n**arity`` argument tuples.
    """
    _check(term, algebra, arity)
    n = algebra.size
    grids = np.indices((n,) * arity).reshape(arity, -1)
    memo: dict[int, np.ndarray] = {}

    def ev(node: Term) -> np.ndarray:
        key = id(node)
        if key not in memo:
            if isinstance(node, Generator):
                memo[key] = grids[node.index - 1]
            else:
                table = algebra.operations[node.op].table
                args = tuple(ev(c) for c in node.args)
                if args:
                    memo[key] = table[args]
                else:
                    memo[key] = np.full(grids.shape[1], table[()], dtype=np.int64)
        return memo[key]

    return ev(term).reshape((n,) * arity).astype(np.int64)


def render(term: Term, names=None) -> str:
    """Expanded infix-free rendering, e.g. ``m(x1,x2,x3)``."""
    memo: dict[int, str] = {}

    def rec(node: Term) -> str:
        key = id(node)
        if key not in memo:
            if isinstance(node, Generator):
                memo[key] = f"x{node.index}"
            else:
                name = names[node.op] if names else f"f{node.op}"
                memo[key] = f"{name}({','.join(rec(c) for c in node.args)})"
        return memo[key]

    return rec(term)


def term_size(term: Term) -> int:
    """Number of distinct DAG nodes."""
    seen: set[int] = set()
    stack = [term]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        if isinstance(node, Apply):
            stack.extend(node.args)
    return len(seen)
