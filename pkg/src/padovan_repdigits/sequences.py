"""Exact Padovan numbers and certified checks of their analytic estimates."""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .algebraic import get_cubic
from .balls import DEFAULT_PREC, RealBall, escalate
from .errors import BoundViolation


class PadovanCache:
    """Append-only table of P_0, P_1, ... grown on demand.

    Reads of already-filled indices take no lock; extension is serialized.
    """

    def __init__(self):
        self._terms = [0, 1, 1]
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._terms)

    def extend_to(self, n: int) -> None:
        if n < len(self._terms):
            return
        with self._lock:
            t = self._terms
            while len(t) <= n:
                t.append(t[-2] + t[-3])

    def __getitem__(self, n: int) -> int:
        if n < 0:
            raise IndexError("Padovan index must be non-negative")
        self.extend_to(n)
        return self._terms[n]

    @property
    def terms(self) -> tuple[int, ...]:
        return tuple(self._terms)


_CACHE = PadovanCache()


def padovan(n: int) -> int:
    """P_n from P_0 = 0, P_1 = P_2 = 1, P_{n+3} = P_{n+1} + P_n."""
    if n < 0:
        raise ValueError(f"index must be non-negative, got {n}")
    return _CACHE[n]


def _binet_error_at(n: int, prec: int) -> RealBall:
    c = get_cubic(prec)
    err = padovan(n) - c.a * c.alpha ** n
    bound = c.beta_abs ** n
    if not abs(err) < bound:
        raise BoundViolation(f"|e({n})| >= alpha^(-{n}/2)")
    return err


def binet_error(n: int, prec: int = DEFAULT_PREC) -> RealBall:
    """Ball for e(n) = P_n - a alpha^n, certified to satisfy |e(n)| < alpha^(-n/2)."""
    if n < 1:
        raise ValueError("the Binet error bound is stated for n >= 1")
    return escalate(lambda p: _binet_error_at(n, p), prec)


@dataclass(frozen=True)
class SandwichCertificate:
    """alpha^(n-3) <= P_n <= alpha^(n-1), with both margins certified >= 0."""

    n: int
    lower_margin: RealBall  # P_n - alpha^(n-3)
    upper_margin: RealBall  # alpha^(n-1) - P_n


def _sandwich_at(n: int, prec: int) -> SandwichCertificate:
    c = get_cubic(prec)
    p = padovan(n)
    lower = p - c.alpha ** (n - 3)
    upper = c.alpha ** (n - 1) - p
    if not (lower >= 0 and upper >= 0):
        raise BoundViolation(f"power sandwich fails at n={n}")
    return SandwichCertificate(n, lower, upper)


def power_sandwich(n: int, prec: int = DEFAULT_PREC) -> SandwichCertificate:
    if n < 1:
        raise ValueError("the power sandwich is stated for n >= 1")
    return escalate(lambda p: _sandwich_at(n, p), prec)
