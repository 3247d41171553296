"""Cayley tables of difference term operations.

Tables are composed directly (``n**3`` entries each) instead of composing the
witness terms, which would grow across the ``n**4`` compositions.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .algebra import FiniteAlgebra, witness_to_ternary_table
from .commutator import self_commutator
from .congruence import principal_congruence
from .decision import LabeledTriple, _require_idempotent, pair_has_ldto
from .errors import NoLocalDifferenceTerm
from .tables import TernaryTable, pair_enumeration
from .tct import omits_type_one

__all__ = [
    "TernaryTable",
    "pair_enumeration",
    "TableBuilder",
    "ldto_table_for_pair",
    "stage_table",
    "build_dt_table",
    "verify_dt_table",
    "Verification",
]


class TableBuilder:
    """Runs the three table-building steps for one algebra and counts the
    base-step searches (``ldto_calls``)."""

    def __init__(self, algebra: FiniteAlgebra, *, taylor: bool | None = None):
        _require_idempotent(algebra)
        self.algebra = algebra
        self.taylor = omits_type_one(algebra) if taylor is None else taylor
        self.ldto_calls = 0
        self.stage_calls = 0
        self._memo: dict = {}

    def ldto_table(self, t0, t1) -> TernaryTable:
        """Table ``t`` with ``t[a,b,b]`` congruent to ``a`` modulo ``[Cg(a,b),Cg(a,b)]``
        and ``t[a',a',b'] = b'`` for ``t0 = (a,b,0)``, ``t1 = (a',b',1)``."""
        t0, t1 = LabeledTriple(*t0), LabeledTriple(*t1)
        self.ldto_calls += 1
        key = (t0, t1)
        if key not in self._memo:
            w = pair_has_ldto(self.algebra, t0, t1, taylor=self.taylor)
            if w is None:
                raise NoLocalDifferenceTerm(t0, t1)
            self._memo[key] = witness_to_ternary_table(self.algebra, w)
        return self._memo[key]

    def stage(self, a: int, b: int) -> TernaryTable:
        """Table of a local difference term operation for ``{(a,b,0)} | A^2 x {1}``."""
        self.stage_calls += 1
        pairs = pair_enumeration(self.algebra.size)
        a0, b0 = pairs[0]
        t = self.ldto_table((a, b, 0), (a0, b0, 1)).array
        for ai, bi in pairs[1:]:
            s = self.ldto_table((a, b, 0), (int(t[ai, ai, bi]), bi, 1)).array
            # t <- s[t(x,y,z), t(y,y,z), z]
            tyyz = np.broadcast_to(np.einsum("yyz->yz", t)[None, :, :], t.shape)
            z = np.broadcast_to(np.arange(len(t))[None, None, :], t.shape)
            t = s[t, tyyz, z]
        return TernaryTable(t)

    def build(self) -> TernaryTable:
        """Table of a difference term operation; raises :class:`NoLocalDifferenceTerm` if none exists."""
        pairs = pair_enumeration(self.algebra.size)
        a0, b0 = pairs[0]
        d = self.stage(a0, b0).array
        for ak, bk in pairs[1:]:
            d2 = self.stage(ak, int(d[ak, bk, bk])).array
            # d <- d2[x, d(x,y,y), d(x,y,z)]
            dxyy = np.broadcast_to(np.einsum("xyy->xy", d)[:, :, None], d.shape)
            x = np.broadcast_to(np.arange(len(d))[:, None, None], d.shape)
            d = d2[x, dxyy, d]
        return TernaryTable(d)


def ldto_table_for_pair(algebra: FiniteAlgebra, t0, t1, *, taylor: bool | None = None) -> TernaryTable:
    return TableBuilder(algebra, taylor=taylor).ldto_table(t0, t1)


def stage_table(algebra: FiniteAlgebra, a: int, b: int, *, taylor: bool | None = None) -> TernaryTable:
    return TableBuilder(algebra, taylor=taylor).stage(a, b)


def build_dt_table(algebra: FiniteAlgebra, *, taylor: bool | None = None) -> TernaryTable:
    return TableBuilder(algebra, taylor=taylor).build()


class Verification(NamedTuple):
    ok: bool
    violation: tuple[int, int] | None = None
    clause: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_dt_table(algebra: FiniteAlgebra, d: TernaryTable, *, taylor: bool | None = None) -> Verification:
    """Check ``d[a,a,b] = b`` and ``d[a,b,b]`` congruent to ``a`` modulo
    ``[Cg(a,b), Cg(a,b)]`` for all ``a, b``; reports the first failing ``(a, b)``.

    Checking at ``Cg(a,b)`` covers every congruence containing ``(a, b)``
    since the commutator is monotone.
    """
    n = algebra.size
    if d.size != n:
        raise ValueError(f"table has size {d.size}, algebra has {n}")
    if taylor is None:
        taylor = algebra.is_idempotent() and omits_type_one(algebra)
    for a in range(n):
        for b in range(n):
            if d[a, a, b] != b:
                return Verification(False, (a, b), "d(a,a,b) = b")
            delta = self_commutator(algebra, principal_congruence(algebra, a, b), taylor=taylor)
            if not delta.related(a, d[a, b, b]):
                return Verification(False, (a, b), "d(a,b,b) [theta,theta] a")
    return Verification(True)
