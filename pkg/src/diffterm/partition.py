"""Partitions of ``{0, ..., n-1}`` in canonical least-representative form.

Text form is ``|0,1|2|3|``: blocks ordered by least element, elements
ascending. Two partitions are equal iff their representative arrays are.
"""

from __future__ import annotations

import re
from typing import Iterable

import numpy as np


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        """Merge the blocks of ``x`` and ``y``; keeps the smaller root. False if already joined."""
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if rx < ry:
            self.parent[ry] = rx
        else:
            self.parent[rx] = ry
        return True

    def roots(self) -> np.ndarray:
        return np.array([self.find(x) for x in range(len(self.parent))], dtype=np.int64)

    def partition(self) -> "Partition":
        # smaller root always wins, so roots are block minima
        return Partition(self.roots())


class Partition:
    __slots__ = ("_reps", "_key")

    def __init__(self, reps):
        arr = np.asarray(reps, dtype=np.int64)
        if arr.ndim != 1 or len(arr) == 0:
            raise ValueError("a partition needs a nonempty 1-d representative array")
        idx = np.arange(len(arr))
        if np.any(arr > idx) or np.any(arr < 0) or np.any(arr[arr] != arr):
            raise ValueError(f"not a canonical representative array: {arr.tolist()}")
        arr = arr.copy()
        arr.setflags(write=False)
        self._reps = arr
        self._key = arr.tobytes()

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        """Partition whose blocks are the level sets of ``labels``."""
        labels = np.asarray(labels)
        _, inv = np.unique(labels, return_inverse=True)
        inv = inv.ravel()
        mins = np.full(inv.max() + 1, len(inv), dtype=np.int64)
        np.minimum.at(mins, inv, np.arange(len(inv)))
        return cls(mins[inv])

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        uf = UnionFind(n)
        for block in blocks:
            block = list(block)
            for x in block[1:]:
                uf.union(block[0], x)
        return uf.partition()

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Partition":
        """Read ``|0,1|2|3|``; whitespace is ignored. Elements must cover ``0..n-1``."""
        body = re.sub(r"\s+", "", text)
        if not (body.startswith("|") and body.endswith("|")) or len(body) < 3:
            raise ValueError(f"malformed partition {text!r}")
        blocks = []
        for chunk in body[1:-1].split("|"):
            if not chunk:
                raise ValueError(f"empty block in {text!r}")
            try:
                blocks.append([int(x) for x in chunk.split(",")])
            except ValueError:
                raise ValueError(f"malformed partition {text!r}") from None
        elems = sorted(x for b in blocks for x in b)
        size = len(elems) if n is None else n
        if elems != list(range(size)):
            raise ValueError(f"partition {text!r} does not cover 0..{size - 1} exactly once")
        return cls.from_blocks(size, blocks)

    @property
    def size(self) -> int:
        return len(self._reps)

    @property
    def reps(self) -> np.ndarray:
        return self._reps

    def rep(self, x: int) -> int:
        return int(self._reps[x])

    def related(self, a: int, b: int) -> bool:
        return self._reps[a] == self._reps[b]

    def blocks(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for x, r in enumerate(self._reps.tolist()):
            out.setdefault(r, []).append(x)
        return list(out.values())

    @property
    def block_count(self) -> int:
        return int(np.count_nonzero(self._reps == np.arange(self.size)))

    def is_bottom(self) -> bool:
        return self.block_count == self.size

    def is_top(self) -> bool:
        return not np.any(self._reps)

    def pairs(self) -> list[tuple[int, int]]:
        """All ``(x, y)`` with ``x < y`` in the same block."""
        return [(x, y) for b in self.blocks() for i, x in enumerate(b) for y in b[i + 1 :]]

    def _check(self, other: "Partition") -> None:
        if self.size != other.size:
            raise ValueError(f"partition sizes differ: {self.size} vs {other.size}")

    def __le__(self, other: "Partition") -> bool:
        self._check(other)
        # every block of self lies inside a block of other
        return bool(np.all(other._reps == other._reps[self._reps]))

    def __lt__(self, other: "Partition") -> bool:
        return self <= other and self != other

    def __ge__(self, other: "Partition") -> bool:
        return other <= self

    def __gt__(self, other: "Partition") -> bool:
        return other < self

    def join(self, other: "Partition") -> "Partition":
        self._check(other)
        uf = UnionFind(self.size)
        for x, r in enumerate(self._reps.tolist()):
            uf.union(x, r)
        for x, r in enumerate(other._reps.tolist()):
            uf.union(x, r)
        return uf.partition()

    def meet(self, other: "Partition") -> "Partition":
        self._check(other)
        return Partition.from_labels(self._reps * self.size + other._reps)

    __or__ = join
    __and__ = meet

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __str__(self) -> str:
        return "|" + "|".join(",".join(map(str, b)) for b in self.blocks()) + "|"

    def __repr__(self) -> str:
        return f"Partition({self})"


def bottom(n: int) -> Partition:
    return Partition(np.arange(n))


def top(n: int) -> Partition:
    return Partition(np.zeros(n, dtype=np.int64))


def join(p: Partition, q: Partition) -> Partition:
    return p.join(q)


def meet(p: Partition, q: Partition) -> Partition:
    return p.meet(q)
