"""Finite algebras as dense operation tables.

Elements of a power ``A**c`` are packed as base-``n`` codes with the first
coordinate most significant, so a pair ``(p, q)`` of the square is ``p*n + q``.
All subuniverse generation goes through one breadth-first closure routine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import MalformedAlgebraError
from .tables import TernaryTable
from .terms import Apply, Generator, Term, term_table

# Upper bound on argument tuples materialized at once by the unordered closure.
_CHUNK = 1 << 21


class Operation:
    """A ``k``-ary basic operation; ``table`` has shape ``(n,)*k`` in row-major order."""

    __slots__ = ("name", "arity", "table")

    def __init__(self, name: str, arity: int, table: np.ndarray):
        self.name = name
        self.arity = arity
        table = np.array(table, dtype=np.int64)
        table.setflags(write=False)
        self.table = table

    @property
    def entries(self) -> list[int]:
        return self.table.ravel().tolist()

    def __repr__(self) -> str:
        return f"Operation({self.name!r}, arity={self.arity})"


class FiniteAlgebra:
    """Universe ``{0, ..., size-1}`` with an ordered list of basic operations."""

    def __init__(self, name: str, size: int, operations: Iterable):
        if size < 1:
            raise MalformedAlgebraError(f"size must be at least 1, got {size}")
        self.name = name
        self.size = size
        ops = []
        seen = set()
        for op in operations:
            if not isinstance(op, Operation):
                op_name, arity, entries = op
                op = _make_operation(op_name, arity, entries, size)
            else:
                _validate_table(op.name, op.arity, op.table.ravel(), size)
                if op.table.shape != (size,) * op.arity:
                    raise MalformedAlgebraError(f"operation {op.name}: wrong table shape")
            if op.name in seen:
                raise MalformedAlgebraError(f"duplicate operation name {op.name!r}")
            seen.add(op.name)
            ops.append(op)
        self.operations: tuple[Operation, ...] = tuple(ops)
        # per-instance memo for derived data (translations, commutators, ...)
        self._cache: dict = {}

    @classmethod
    def from_function(cls, name: str, size: int, ops: dict[str, tuple[int, Callable]]) -> "FiniteAlgebra":
        """Build tables by evaluating Python callables on every argument tuple."""
        built = []
        for op_name, (arity, fn) in ops.items():
            entries = [fn(*args) for args in product(range(size), repeat=arity)]
            built.append((op_name, arity, entries))
        return cls(name, size, built)

    def apply(self, op_index: int, args: Sequence[int]) -> int:
        if not 0 <= op_index < len(self.operations):
            raise MalformedAlgebraError(f"no operation with index {op_index}")
        op = self.operations[op_index]
        if len(args) != op.arity:
            raise MalformedAlgebraError(f"{op.name} has arity {op.arity}, got {len(args)} arguments")
        for x in args:
            if not 0 <= x < self.size:
                raise MalformedAlgebraError(f"argument {x} outside universe of size {self.size}")
        return int(op.table[tuple(args)])

    def is_idempotent(self) -> bool:
        diag = np.arange(self.size)
        for op in self.operations:
            if op.arity == 0:
                if self.size > 1 or op.table[()] != 0:
                    return False
                continue
            if not np.array_equal(op.table[(diag,) * op.arity], diag):
                return False
        return True

    @property
    def max_arity(self) -> int:
        return max((op.arity for op in self.operations), default=0)

    def op_names(self) -> list[str]:
        return [op.name for op in self.operations]

    def translations(self) -> list[np.ndarray]:
        """Per (operation, argument position): array ``T[x]`` listing ``f(..., x, ...)``
        over every filling of the other positions."""
        if "translations" not in self._cache:
            out = []
            for op in self.operations:
                for i in range(op.arity):
                    out.append(np.moveaxis(op.table, i, 0).reshape(self.size, -1))
            self._cache["translations"] = out
        return self._cache["translations"]

    def same_tables(self, other: "FiniteAlgebra") -> bool:
        return (
            self.size == other.size
            and len(self.operations) == len(other.operations)
            and all(
                a.name == b.name and a.arity == b.arity and np.array_equal(a.table, b.table)
                for a, b in zip(self.operations, other.operations)
            )
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return self.name == other.name and self.same_tables(other)

    def __hash__(self) -> int:
        return hash((self.name, self.size, tuple(op.table.tobytes() for op in self.operations)))

    def __repr__(self) -> str:
        ops = ", ".join(f"{op.name}/{op.arity}" for op in self.operations)
        return f"FiniteAlgebra({self.name!r}, size={self.size}, ops=[{ops}])"


def _validate_table(name: str, arity: int, flat: np.ndarray, size: int) -> None:
    if arity < 0:
        raise MalformedAlgebraError(f"operation {name}: negative arity")
    if len(flat) != size**arity:
        raise MalformedAlgebraError(
            f"operation {name}: expected {size ** arity} entries, got {len(flat)}"
        )
    if len(flat) and (flat.min() < 0 or flat.max() >= size):
        raise MalformedAlgebraError(f"operation {name}: entries must lie in [0, {size})")


def _make_operation(name: str, arity: int, entries, size: int) -> Operation:
    flat = np.asarray(entries, dtype=np.int64).ravel()
    _validate_table(name, arity, flat, size)
    return Operation(name, arity, flat.reshape((size,) * arity))


def apply(algebra: FiniteAlgebra, op_index: int, args: Sequence[int]) -> int:
    return algebra.apply(op_index, args)


def is_idempotent(algebra: FiniteAlgebra) -> bool:
    return algebra.is_idempotent()


# ---------------------------------------------------------------- packing


def pack(coords: Sequence[int], n: int) -> int:
    code = 0
    for x in coords:
        code = code * n + int(x)
    return code


def unpack(code: int, n: int, c: int) -> tuple[int, ...]:
    out = []
    for _ in range(c):
        code, r = divmod(int(code), n)
        out.append(r)
    return tuple(reversed(out))


def _powers(n: int, c: int) -> np.ndarray:
    return n ** np.arange(c - 1, -1, -1, dtype=np.int64)


def _digits(codes: np.ndarray, n: int, c: int) -> np.ndarray:
    """Shape ``(c, *codes.shape)``: coordinate ``j`` of each code."""
    return (codes[None, ...] // _powers(n, c).reshape((c,) + (1,) * codes.ndim)) % n


def apply_coordinatewise(op: Operation, args: Sequence[np.ndarray], n: int, c: int) -> np.ndarray:
    """Apply ``op`` coordinatewise to packed elements of ``A**c``."""
    if op.arity == 0:
        return np.array([pack([int(op.table[()])] * c, n)], dtype=np.int64)
    digits = tuple(_digits(a, n, c) for a in args)
    res = op.table[digits]
    return np.tensordot(_powers(n, c), res, axes=1)


# ---------------------------------------------------------------- closure


@dataclass
class Closure:
    """Result of a breadth-first subuniverse generation."""

    elements: list[int]
    witnesses: dict[int, Term] | None
    hit: int | None = None
    rounds: int = 0


def _fresh_tuples(fresh: np.ndarray, k: int) -> list[list[np.ndarray]]:
    """Axes for the argument tuples with at least one fresh position,
    split by the first fresh position (the parts are disjoint)."""
    m = len(fresh)
    all_pos = np.arange(m)
    fr = np.flatnonzero(fresh)
    old = np.flatnonzero(~fresh)
    parts = []
    for p in range(k):
        axes = [old] * p + [fr] + [all_pos] * (k - p - 1)
        if all(len(a) for a in axes):
            parts.append(axes)
    return parts


def _grid(axes: list[np.ndarray]) -> np.ndarray:
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in mesh])


def _ordered_tuples(fresh: np.ndarray, k: int) -> np.ndarray:
    m = len(fresh)
    parts = [_grid(axes) for axes in _fresh_tuples(fresh, k)]
    if not parts:
        return np.zeros((k, 0), dtype=np.int64)
    idx = np.concatenate(parts, axis=1)
    flat = np.tensordot(m ** np.arange(k - 1, -1, -1, dtype=np.int64), idx, axes=1)
    return idx[:, np.argsort(flat, kind="stable")]


def _chunked_tuples(fresh: np.ndarray, k: int):
    for axes in _fresh_tuples(fresh, k):
        rest = int(np.prod([len(a) for a in axes[1:]], dtype=np.int64)) if k > 1 else 1
        step = max(1, _CHUNK // max(rest, 1))
        head = axes[0]
        for s in range(0, len(head), step):
            yield _grid([head[s : s + step]] + axes[1:])


def close(
    algebra: FiniteAlgebra,
    seeds: Sequence[int],
    coords: int = 1,
    *,
    stop: np.ndarray | None = None,
    track: bool = True,
) -> Closure:
    """Generate the subuniverse of ``A**coords`` from packed ``seeds``.

    Each round applies every operation (declaration order) to the argument
    tuples over the current elements (ascending) that involve at least one
    element added in the previous round, in row-major order. With ``stop``
    (a boolean mask over codes) generation halts at the first element that
    satisfies it. With ``track=False`` no witnesses are built and tuple order
    is not preserved, only the generated set and whether ``stop`` was met.
    """
    n = algebra.size
    member = np.zeros(n**coords, dtype=bool)
    order: list[int] = []
    wit: dict[int, Term] | None = {} if track else None

    def add(code: int, w) -> bool:
        member[code] = True
        order.append(code)
        if wit is not None:
            wit[code] = w
        return stop is not None and bool(stop[code])

    for i, g in enumerate(seeds):
        g = int(g)
        if not member[g] and add(g, Generator(i + 1) if track else None):
            return Closure(order, wit, g, 0)
    for oi, op in enumerate(algebra.operations):
        if op.arity == 0:
            code = int(apply_coordinatewise(op, (), n, coords)[0])
            if not member[code] and add(code, Apply(oi, ()) if track else None):
                return Closure(order, wit, code, 0)

    fresh_codes = np.array(order, dtype=np.int64)
    rounds = 0
    while len(fresh_codes):
        rounds += 1
        elems = np.array(sorted(order), dtype=np.int64)
        fresh = np.isin(elems, fresh_codes)
        start = len(order)
        for oi, op in enumerate(algebra.operations):
            k = op.arity
            if k == 0:
                continue
            if track:
                batches = [_ordered_tuples(fresh, k)]
            else:
                batches = _chunked_tuples(fresh, k)
            for idx in batches:
                if idx.shape[1] == 0:
                    continue
                args = elems[idx]
                res = apply_coordinatewise(op, list(args), n, coords)
                new = ~member[res]
                if not new.any():
                    continue
                if track:
                    pos = np.flatnonzero(new)
                    _, first = np.unique(res[pos], return_index=True)
                    for j in pos[np.sort(first)]:
                        code = int(res[j])
                        w = Apply(oi, tuple(wit[int(a)] for a in args[:, j]))
                        if add(code, w):
                            return Closure(order, wit, code, rounds)
                else:
                    codes = np.unique(res[new])
                    member[codes] = True
                    order.extend(codes.tolist())
                    if stop is not None:
                        hits = codes[stop[codes]]
                        if len(hits):
                            return Closure(order, wit, int(hits[0]), rounds)
        fresh_codes = np.array(order[start:], dtype=np.int64)
    return Closure(order, wit, None, rounds)


def generate_subalgebra(algebra: FiniteAlgebra, generators: Sequence[int]):
    """Least subuniverse containing ``generators``.

    Returns ``(elements, witnesses)``: the sorted subuniverse and, aligned
    with it, one term witness per element over ``x1, ..., xk`` where
    ``x_i`` stands for ``generators[i-1]``.
    """
    if not generators:
        raise ValueError("need at least one generator")
    for g in generators:
        if not 0 <= g < algebra.size:
            raise MalformedAlgebraError(f"generator {g} outside universe")
    cl = close(algebra, list(generators))
    elems = sorted(cl.elements)
    return elems, [cl.witnesses[e] for e in elems]


# ---------------------------------------------------------------- induced algebras


def induced_algebra(algebra: FiniteAlgebra, codes: Sequence[int], coords: int = 1, name: str | None = None) -> FiniteAlgebra:
    """The algebra induced on a subuniverse of ``A**coords`` given as sorted codes.

    Element ``i`` of the result is ``codes[i]``.
    """
    n = algebra.size
    codes = np.asarray(codes, dtype=np.int64)
    m = len(codes)
    ops = []
    for op in algebra.operations:
        k = op.arity
        if k:
            grid = np.indices((m,) * k).reshape(k, -1)
            res = apply_coordinatewise(op, list(codes[grid]), n, coords)
        else:
            res = apply_coordinatewise(op, (), n, coords)
        pos = np.searchsorted(codes, res)
        pos = np.minimum(pos, m - 1)
        if not np.array_equal(codes[pos], res):
            raise ValueError("codes do not form a subuniverse")
        ops.append(Operation(op.name, k, pos.reshape((m,) * k)))
    return FiniteAlgebra(name or f"{algebra.name}-sub", m, ops)


def direct_square(algebra: FiniteAlgebra) -> FiniteAlgebra:
    """``A x A`` with pair ``(p, q)`` encoded as ``p*n + q``."""
    n = algebra.size
    return induced_algebra(algebra, np.arange(n * n), 2, name=f"{algebra.name}^2")


@dataclass
class SubProduct:
    """A subalgebra of ``A x A``; carrier pairs are sorted, position ``i`` of the
    carrier is element ``i`` of :attr:`algebra`."""

    parent: FiniteAlgebra
    carrier: tuple[tuple[int, int], ...]
    witnesses: tuple[Term, ...]
    generators: tuple[tuple[int, int], ...] = ()
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = {p: i for i, p in enumerate(self.carrier)}

    def __len__(self) -> int:
        return len(self.carrier)

    def index(self, pair) -> int:
        return self._index[tuple(pair)]

    def codes(self) -> list[int]:
        n = self.parent.size
        return [p * n + q for p, q in self.carrier]

    @cached_property
    def algebra(self) -> FiniteAlgebra:
        return induced_algebra(self.parent, self.codes(), 2, name=f"{self.parent.name}-subproduct")


@dataclass(frozen=True)
class Hit:
    """First generated pair that met a stop-set, with its witness."""

    pair: tuple[int, int]
    witness: Term


def _pair_mask(n: int, stop) -> np.ndarray:
    if isinstance(stop, np.ndarray):
        return stop
    mask = np.zeros(n * n, dtype=bool)
    if callable(stop):
        for p in range(n):
            for q in range(n):
                mask[p * n + q] = bool(stop((p, q)))
    else:
        for p, q in stop:
            mask[p * n + q] = True
    return mask


def generate_subproduct(algebra: FiniteAlgebra, pairs: Sequence[tuple[int, int]], stop=None):
    """Subalgebra of ``A x A`` generated by ``pairs``.

    ``stop`` may be a predicate on pairs, a collection of pairs, or a mask over
    pair codes. When given, returns a :class:`Hit` for the first generated pair
    in it, or the full :class:`SubProduct` if the closure never meets it.
    """
    n = algebra.size
    for p, q in pairs:
        if not (0 <= p < n and 0 <= q < n):
            raise MalformedAlgebraError(f"pair {(p, q)} outside universe")
    mask = None if stop is None else _pair_mask(n, stop)
    cl = close(algebra, [p * n + q for p, q in pairs], 2, stop=mask)
    if cl.hit is not None:
        return Hit(divmod(cl.hit, n), cl.witnesses[cl.hit])
    codes = sorted(cl.elements)
    return SubProduct(
        algebra,
        tuple(divmod(c, n) for c in codes),
        tuple(cl.witnesses[c] for c in codes),
        tuple((int(p), int(q)) for p, q in pairs),
    )


def subproduct_carrier(algebra: FiniteAlgebra, pairs: Sequence[tuple[int, int]]) -> list[int]:
    """Sorted pair codes of the generated subalgebra, without witnesses."""
    n = algebra.size
    cl = close(algebra, [p * n + q for p, q in pairs], 2, track=False)
    return sorted(cl.elements)


# ---------------------------------------------------------------- quotients, tables


def quotient(algebra: FiniteAlgebra, theta):
    """``A / theta`` with classes numbered by ascending least element.

    Returns ``(quotient_algebra, class_map)`` where ``class_map[x]`` is the
    class index of ``x``.
    """
    from .congruence import is_congruence

    if not is_congruence(algebra, theta):
        raise ValueError(f"{theta} is not a congruence of {algebra.name}")
    reps = np.asarray(theta.reps)
    leaders = np.unique(reps)
    class_map = np.searchsorted(leaders, reps)
    m = len(leaders)
    ops = []
    for op in algebra.operations:
        k = op.arity
        if k:
            grid = np.indices((m,) * k).reshape(k, -1)
            vals = op.table[tuple(leaders[grid])]
        else:
            vals = np.array([op.table[()]])
        ops.append(Operation(op.name, k, class_map[vals].reshape((m,) * k)))
    return FiniteAlgebra(f"{algebra.name}/theta", m, ops), class_map.tolist()


def witness_to_ternary_table(algebra: FiniteAlgebra, witness: Term) -> TernaryTable:
    """Table of the ternary term operation ``witness(x1, x2, x3)`` on ``A``."""
    return TernaryTable(term_table(witness, algebra, 3), algebra.size)
