"""Ternary Cayley tables ``d[x, y, z]`` over a universe ``{0, ..., n-1}``."""

from __future__ import annotations

import numpy as np


class TernaryTable:
    """An ``n**3`` table, stored with ``index(x, y, z) = x*n*n + y*n + z``."""

    __slots__ = ("size", "_t")

    def __init__(self, entries, size: int | None = None):
        arr = np.asarray(entries, dtype=np.int64)
        if size is None:
            if arr.ndim != 3:
                raise ValueError("pass a 3-d array or give size explicitly")
            size = arr.shape[0]
        arr = arr.reshape(size, size, size).copy()
        if arr.size and (arr.min() < 0 or arr.max() >= size):
            raise ValueError(f"table entries must lie in [0, {size})")
        arr.setflags(write=False)
        self.size = size
        self._t = arr

    @classmethod
    def projection(cls, size: int, which: int) -> "TernaryTable":
        """Table of ``x`` (which=1), ``y`` (2) or ``z`` (3)."""
        grid = np.indices((size,) * 3)
        return cls(grid[which - 1], size)

    @property
    def array(self) -> np.ndarray:
        return self._t

    def entries(self) -> list[int]:
        return self._t.ravel().tolist()

    def __getitem__(self, xyz) -> int:
        return int(self._t[xyz])

    def compose(self, f: "TernaryTable", g: "TernaryTable", h: "TernaryTable") -> "TernaryTable":
        """The table of ``self(f(x,y,z), g(x,y,z), h(x,y,z))``."""
        return TernaryTable(self._t[f._t, g._t, h._t], self.size)

    def has_idempotent_diagonal(self) -> bool:
        i = np.arange(self.size)
        return bool(np.all(self._t[i, i, i] == i))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TernaryTable):
            return NotImplemented
        return self.size == other.size and np.array_equal(self._t, other._t)

    def __hash__(self) -> int:
        return hash((self.size, self._t.tobytes()))

    def __repr__(self) -> str:
        return f"TernaryTable(size={self.size})"


def pair_enumeration(n: int) -> list[tuple[int, int]]:
    """All of ``A x A`` in lexicographic order; position ``k`` is ``(k // n, k % n)``."""
    return [(a, b) for a in range(n) for b in range(n)]
