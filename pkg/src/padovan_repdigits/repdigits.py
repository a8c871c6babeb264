"""Numbers written as a block of one digit followed by a block of another."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import groupby
from typing import Iterator, Optional


@dataclass(frozen=True, order=True)
class RepdigitConcat:
    """d1 repeated l1 times followed by d2 repeated l2 times, with d1 != d2."""

    d1: int
    d2: int
    l1: int
    l2: int

    def __post_init__(self):
        if not 1 <= self.d1 <= 9:
            raise ValueError(f"leading digit must be 1..9, got {self.d1}")
        if not 0 <= self.d2 <= 9:
            raise ValueError(f"second digit must be 0..9, got {self.d2}")
        if self.d1 == self.d2:
            raise ValueError("the two digits must differ")
        if self.l1 < 1 or self.l2 < 1:
            raise ValueError("block lengths must be positive")

    @property
    def value(self) -> int:
        return (self.d1 * (10 ** self.l1 - 1) // 9 * 10 ** self.l2
                + self.d2 * (10 ** self.l2 - 1) // 9)

    @property
    def size(self) -> int:
        return self.l1 + self.l2

    def __str__(self) -> str:
        return str(self.d1) * self.l1 + str(self.d2) * self.l2


def size_of_value(rc: RepdigitConcat) -> int:
    """Number of decimal digits of ``rc.value``."""
    return rc.l1 + rc.l2


def parse_concat(n: int) -> Optional[RepdigitConcat]:
    """Recover (d1, d2, l1, l2) from the decimal string of n, if it has exactly two runs."""
    if n <= 0:
        return None
    runs = [(int(d), len(list(g))) for d, g in groupby(str(n))]
    if len(runs) != 2:
        return None
    (d1, l1), (d2, l2) = runs
    return RepdigitConcat(d1, d2, l1, l2)


def enumerate_concats(max_len: int) -> Iterator[RepdigitConcat]:
    """All concatenations with at most ``max_len`` digits."""
    for total in range(2, max_len + 1):
        for l1 in range(1, total):
            for d1 in range(1, 10):
                for d2 in range(10):
                    if d1 != d2:
                        yield RepdigitConcat(d1, d2, l1, total - l1)
