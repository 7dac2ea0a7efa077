"""Partitions, Young diagrams and semistandard tableaux.

Cells use matrix coordinates ``(row, column)`` starting at 1.  Tableaux are
column-strict: rows weakly increase left to right, columns strictly increase
top to bottom.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from math import factorial
from typing import Dict, Iterator, List, Sequence, Tuple

from .exact import RatFunc

Cell = Tuple[int, int]


class Partition(tuple):
    """A weakly decreasing tuple of positive integers (hashable as a tuple)."""

    def __new__(cls, parts: Sequence[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def cells(self) -> Iterator[Cell]:
        for i, row in enumerate(self, start=1):
            for j in range(1, row + 1):
                yield (i, j)

    def conjugate(self) -> Partition:
        return conjugate(self)

    def multiplicities(self) -> Dict[int, int]:
        return dict(Counter(self))

    def __repr__(self) -> str:
        return f"Partition({list(self)})"


def as_partition(parts) -> Partition:
    return parts if isinstance(parts, Partition) else Partition(parts)


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> Tuple[Tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions_of(n: int) -> List[Partition]:
    """All partitions of n in reverse lexicographic order: (n), (n-1,1), ..., (1^n)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return [Partition(p) for p in _partitions(n, n)]


def conjugate(lam: Sequence[int]) -> Partition:
    lam = tuple(lam)
    if not lam:
        return Partition(())
    return Partition(sum(1 for r in lam if r >= j) for j in range(1, lam[0] + 1))


def arm_leg_hook(lam: Sequence[int], s: Cell) -> Tuple[int, int, int]:
    i, j = s
    lam = tuple(lam)
    if not (1 <= i <= len(lam) and 1 <= j <= lam[i - 1]):
        raise ValueError(f"cell {s} is not in the diagram of {list(lam)}")
    arm = lam[i - 1] - j
    leg = sum(1 for r in lam[i:] if r >= j)
    return arm, leg, arm + leg + 1


def n_stat(lam: Sequence[int]) -> int:
    """n(lambda) = sum_i (i-1) lambda_i."""
    return sum(i * r for i, r in enumerate(lam))


def n_stat_by_legs(lam: Sequence[int]) -> int:
    lam = Partition(lam)
    return sum(arm_leg_hook(lam, s)[1] for s in lam.cells())


def n_stat_by_conjugate(lam: Sequence[int]) -> int:
    """sum_j binom(lambda'_j, 2)."""
    return sum(c * (c - 1) // 2 for c in conjugate(lam))


def z_lambda(lam: Sequence[int]) -> int:
    out = 1
    for part, mult in Counter(lam).items():
        out *= part ** mult * factorial(mult)
    return out


def z_lambda_qt(lam: Sequence[int]) -> RatFunc:
    q, t = RatFunc.var("q"), RatFunc.var("t")
    out = RatFunc(z_lambda(lam))
    for r in lam:
        out = out * (1 - q ** r) / (1 - t ** r)
    return out


def dominance_leq(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """True iff lam <= mu in dominance order (partial sums of mu dominate)."""
    if sum(lam) != sum(mu):
        raise ValueError("dominance order compares partitions of equal weight")
    a = b = 0
    for i in range(max(len(lam), len(mu))):
        a += lam[i] if i < len(lam) else 0
        b += mu[i] if i < len(mu) else 0
        if a > b:
            return False
    return True


# -- tableaux -------------------------------------------------------------

class SSYT:
    """Semistandard tableau of a straight shape, stored row by row."""

    __slots__ = ("shape", "rows")

    def __init__(self, shape: Sequence[int], rows: Sequence[Sequence[int]]):
        self.shape = as_partition(shape)
        self.rows = tuple(tuple(r) for r in rows)

    @property
    def entries(self) -> Dict[Cell, int]:
        return {(i + 1, j + 1): v for i, row in enumerate(self.rows) for j, v in enumerate(row)}

    def weight(self) -> Tuple[int, ...]:
        c = Counter(v for row in self.rows for v in row)
        top = max(c) if c else 0
        return tuple(c.get(i, 0) for i in range(1, top + 1))

    def is_valid(self) -> bool:
        if tuple(len(r) for r in self.rows) != tuple(self.shape):
            return False
        for row in self.rows:
            if any(row[j] > row[j + 1] for j in range(len(row) - 1)):
                return False
        for i in range(len(self.rows) - 1):
            for j in range(len(self.rows[i + 1])):
                if self.rows[i][j] >= self.rows[i + 1][j]:
                    return False
        return True

    def chain(self) -> List[Partition]:
        """The sequence of shapes occupied by entries <= 0, 1, 2, ..."""
        top = max((v for row in self.rows for v in row), default=0)
        return [Partition([c for c in (sum(1 for v in row if v <= k) for row in self.rows) if c])
                for k in range(top + 1)]

    def __eq__(self, other) -> bool:
        return isinstance(other, SSYT) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"SSYT({[list(r) for r in self.rows]})"


def horizontal_strips(outer: Partition, size: int) -> Iterator[Partition]:
    """Partitions inner ⊂ outer with outer/inner a horizontal strip of the given size."""
    outer = tuple(outer)
    n = len(outer)

    def rec(i: int, remaining: int, acc: List[int]):
        if i == n:
            if remaining == 0:
                yield Partition([r for r in acc if r])
            return
        lo = outer[i + 1] if i + 1 < n else 0
        for r in range(outer[i], lo - 1, -1):
            removed = outer[i] - r
            if removed > remaining:
                break
            yield from rec(i + 1, remaining - removed, acc + [r])

    yield from rec(0, size, [])


def ssyt_chains(shape: Sequence[int], weight: Sequence[int]) -> List[List[Partition]]:
    """Chains ∅ = λ⁰ ⊂ λ¹ ⊂ ... ⊂ λʳ = shape with horizontal strips of sizes weight_i."""
    shape = as_partition(shape)
    weight = tuple(weight)
    if sum(shape) != sum(weight):
        raise ValueError("shape and weight must have the same size")

    def rec(outer: Partition, k: int) -> Iterator[List[Partition]]:
        if k == 0:
            if not outer:
                yield [outer]
            return
        for inner in horizontal_strips(outer, weight[k - 1]):
            for ch in rec(inner, k - 1):
                yield ch + [outer]

    return list(rec(shape, len(weight)))


def ssyt_enumerate(shape: Sequence[int], weight: Sequence[int]) -> List[SSYT]:
    """All column-strict tableaux of the given shape with content ``weight``."""
    shape = as_partition(shape)
    out = []
    for chain in ssyt_chains(shape, weight):
        rows = [[0] * r for r in shape]
        for k in range(1, len(chain)):
            inner, outer = chain[k - 1], chain[k]
            for i, r in enumerate(outer):
                start = inner[i] if i < len(inner) else 0
                for j in range(start, r):
                    rows[i][j] = k
        out.append(SSYT(shape, rows))
    return out


def count_syt(shape: Sequence[int]) -> int:
    """Number of standard Young tableaux, via the hook length formula."""
    shape = as_partition(shape)
    prod = 1
    for s in shape.cells():
        prod *= arm_leg_hook(shape, s)[2]
    return factorial(shape.weight) // prod
