"""Linear forms in logarithms: the Matveev-type lower bound and the chain of
estimates that turns it into an absolute (if astronomical) bound on n.

Two modes are supported. ``CERTIFIED`` carries the computed constants
forward. ``PAPER`` substitutes the published constants, but only after
certifying that each one dominates the value recomputed from its own inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence, Union

from .algebraic import (
    get_cubic,
    height_alpha,
    height_eta1_step1,
    log_height_rational,
    step2_height_constant,
)
from .balls import DEFAULT_PREC, RealBall, log_const
from .errors import BoundViolation, PublishedBoundError

Quantity = Union[RealBall, Fraction]

# the exhaustive search covers n <= SEARCH_LIMIT; every bound below assumes n > SEARCH_LIMIT
SEARCH_LIMIT = 500
MATVEEV_FLOOR = Fraction(16, 100)

PUBLISHED: dict[str, Fraction] = {
    "step1_height": Fraction("5.44"),
    "step1_A1": Fraction("16.32"),
    "step1_matveev": Fraction("1.45e30"),
    "step1_l1": Fraction("1.46e30"),
    "step2_height": Fraction("1.48e30"),
    "step2_A1": Fraction("4.44e30"),
    "step2_matveev": Fraction("2.38e43"),
    "step2_n": Fraction("1.70e44"),
    "n_max": Fraction("7.38e48"),
    "l_total_max": Fraction("9.15e47"),
}


class Mode(str, Enum):
    CERTIFIED = "certified"
    PAPER = "paper"


def _ball(x: Quantity | int, prec: int) -> RealBall:
    return x if isinstance(x, RealBall) else RealBall.exact(x, prec)


def ball_max(*xs: RealBall) -> RealBall:
    """Enclosure of max over the points of several balls."""
    return RealBall(max(x.lo for x in xs), max(x.hi for x in xs), max(x.prec for x in xs))


def _lower(x: Quantity | int) -> Fraction:
    return x.interval()[0] if isinstance(x, RealBall) else Fraction(x)


def _upper(x: Quantity | int) -> Fraction:
    return x.interval()[1] if isinstance(x, RealBall) else Fraction(x)


def _dominates(big: Quantity | int, small: Quantity | int) -> bool:
    """Certified big >= small; exact whenever both sides are rationals."""
    return _lower(big) >= _upper(small)


@dataclass(frozen=True)
class BoundRecord:
    label: str
    computed: Quantity
    used: Quantity
    published: Fraction | None = None


@dataclass(frozen=True)
class SymbolicBound:
    """coefficient * (log_offset + log n) ** log_power, as a function of n."""

    coefficient: RealBall
    log_power: int
    log_offset: int = 1

    def __post_init__(self):
        if not self.coefficient > 0:
            raise ValueError("coefficient must be positive")
        if self.log_power < 0:
            raise ValueError("log_power must be non-negative")

    def value_at(self, n: int) -> RealBall:
        factor = self.log_offset + RealBall.exact(n, self.coefficient.prec).log()
        return self.coefficient * factor ** self.log_power

    def __str__(self) -> str:
        c = f"{float(self.coefficient.hi):.4g}"
        if self.log_power == 0:
            return c
        base = "log n" if self.log_offset == 0 else f"{self.log_offset} + log n"
        return f"{c} * ({base})^{self.log_power}"


class _Ledger:
    """Collects BoundRecords and applies the mode's substitution rule."""

    def __init__(self, mode: Mode, prec: int, trail: list | None):
        self.mode = Mode(mode)
        self.prec = prec
        self.trail = trail if trail is not None else []

    def settle(self, label: str, computed: Quantity) -> Quantity:
        published = PUBLISHED.get(label) if self.mode is Mode.PAPER else None
        used: Quantity = computed
        if published is not None:
            if not _dominates(published, computed):
                raise PublishedBoundError(
                    f"{label}: published {float(published):.4g} < recomputed {float(_ball(computed, self.prec).hi):.6g}"
                )
            used = published
        self.trail.append(BoundRecord(label, computed, used, published))
        return used

    def require(self, label: str, big: Quantity, small: Quantity) -> None:
        if not _dominates(big, small):
            raise BoundViolation(f"{label}: certified inequality failed")
        self.trail.append(BoundRecord(label, small, big))


# Matveev / Bugeaud-Mignotte-Siksek ----------------------------------------------


@dataclass(frozen=True)
class MatveevInput:
    t: int
    D: int
    B: Quantity | int
    A: Sequence[Quantity | int]

    def __post_init__(self):
        if self.t < 1 or self.D < 1:
            raise ValueError("t and D must be positive")
        if len(self.A) != self.t:
            raise ValueError(f"expected {self.t} values A_i, got {len(self.A)}")
        for a in self.A:
            if not _dominates(a, MATVEEV_FLOOR):
                raise ValueError(f"A_i = {a!r} is not certified >= 0.16")
        if not _dominates(self.B, 1):
            raise ValueError("B must be at least 1")


def matveev_coefficient(t: int, D: int, A: Sequence[Quantity | int],
                        prec: int = DEFAULT_PREC) -> RealBall:
    """1.4 * 30^(t+3) * t^4.5 * D^2 * (1 + log D) * prod A_i, i.e. without the (1 + log B) factor."""
    c = RealBall.exact(Fraction(14, 10) * 30 ** (t + 3) * t ** 4 * D ** 2, prec)
    c = c * RealBall.exact(t, prec).sqrt() * (1 + log_const(D, prec))
    for a in A:
        c = c * _ball(a, prec)
    return c


def matveev_bound(inp: MatveevInput, prec: int = DEFAULT_PREC) -> RealBall:
    """V with log|Lambda| > -V whenever Lambda = prod eta_i^b_i - 1 is nonzero."""
    return matveev_coefficient(inp.t, inp.D, inp.A, prec) * (1 + _ball(inp.B, prec).log())


def guzman_luca(r: int, H: Quantity | int, prec: int = DEFAULT_PREC) -> RealBall:
    """2^r H (log H)^r: every L with H > L/(log L)^r lies below it. Needs H > (4r^2)^r."""
    if r < 1:
        raise ValueError("r must be a positive integer")
    Hb = _ball(H, prec)
    if not _lower(Hb) > (4 * r * r) ** r:
        raise ValueError(f"precondition H > (4r^2)^r = {(4 * r * r) ** r} fails for H = {float(Hb.hi):.6g}")
    return 2 ** r * Hb * Hb.log() ** r


# size relation between n and the digit count ------------------------------------


def size_relation(l_total: int, prec: int = DEFAULT_PREC) -> tuple[int, int]:
    """Inclusive range of n allowed by (L log 10 - 3) < n log alpha < (L log 10 + 1).

    Rounding is outward: the range can only be a superset of the exact one.
    """
    if l_total < 2:
        raise ValueError("a two-block concatenation has at least two digits")
    c = get_cubic(prec)
    ten = log_const(10, prec)
    low = (l_total * ten - 3) / c.log_alpha
    high = (l_total * ten + 1) / c.log_alpha
    return math.floor(_lower(low)) + 1, math.ceil(_upper(high)) - 1


def check_exponent_bound(prec: int = DEFAULT_PREC) -> RealBall:
    """Margin n(log 10 - log alpha) - 3 at n = SEARCH_LIMIT; positive means l1 + l2 < n."""
    c = get_cubic(prec)
    margin = SEARCH_LIMIT * (log_const(10, prec) - c.log_alpha) - 3
    if not margin > 0:
        raise BoundViolation("cannot take B = n: l1 + l2 < n not certified")
    return margin


# the two Baker steps --------------------------------------------------------------


def _absorb(prec: int) -> RealBall:
    """1 + log SEARCH_LIMIT, the smallest value of (1 + log n) when n > SEARCH_LIMIT."""
    return 1 + log_const(SEARCH_LIMIT, prec)


def _common_A(prec: int) -> tuple[RealBall, RealBall]:
    c = get_cubic(prec)
    floor = RealBall.exact(MATVEEV_FLOOR, prec)
    A2 = ball_max(3 * height_alpha(c), abs(c.log_alpha), floor)
    ten = log_const(10, prec)
    A3 = ball_max(3 * log_height_rational(10, 1, prec), ten, floor)
    return A2, A3


def step1_l1_bound(mode: Mode = Mode.CERTIFIED, prec: int = DEFAULT_PREC,
                   trail: list | None = None) -> SymbolicBound:
    """l1 log 10 < coefficient * (1 + log n), from Lambda_1 = (9a/d1) alpha^n 10^-(l1+l2) - 1.

    |Lambda_1| < 30/10^l1 on one side and the Matveev bound on the other.
    """
    led = _Ledger(mode, prec, trail)
    c = get_cubic(prec)
    led.trail.append(BoundRecord("exponent_margin", check_exponent_bound(prec), Fraction(0)))
    h = ball_max(*(height_eta1_step1(d1, c) for d1 in range(1, 10)))
    h_used = led.settle("step1_height", h)
    A1 = led.settle("step1_A1", 3 * h_used)
    for d1 in range(1, 10):
        led.require(f"step1_A1>=|log eta1|,d1={d1}", A1, abs((9 * c.a / d1).log()))
    led.require("step1_A1>=0.16", A1, MATVEEV_FLOOR)
    A2, A3 = _common_A(prec)
    C = led.settle("step1_matveev", matveev_coefficient(3, 3, [A1, A2, A3], prec))
    coef = led.settle("step1_l1", _ball(C, prec) + log_const(30, prec) / _absorb(prec))
    return SymbolicBound(_ball(coef, prec), 1)


def step2_n_bound(l1_bound: SymbolicBound, mode: Mode = Mode.CERTIFIED,
                  prec: int = DEFAULT_PREC, trail: list | None = None) -> SymbolicBound:
    """n < coefficient * (log n)^2, from Lambda_2 with |Lambda_2| < 4/alpha^n.

    eta_1 = (d1 10^l1 - (d1 - d2)) / (9a); its height is at most
    l1 log 10 + 4 log 9 + h(a) + 2 log 2, and l1 log 10 comes from step one.
    """
    if l1_bound.log_power != 1 or l1_bound.log_offset != 1:
        raise ValueError("step two expects the step-one bound in units of (1 + log n)")
    led = _Ledger(mode, prec, trail)
    c = get_cubic(prec)
    absorb = _absorb(prec)
    led.require("step2_rhs:2/a<=4", Fraction(4), 2 / c.a)
    h = led.settle("step2_height", l1_bound.coefficient + step2_height_constant(c) / absorb)
    A1 = led.settle("step2_A1", 3 * h)
    # 9 <= d1 10^l1 - (d1 - d2) < 10^(l1+1), so 0 < log eta_1 < l1 log 10 + log(10/(9a))
    log_eta = l1_bound.coefficient + (10 / (9 * c.a)).log() / absorb
    led.require("step2_A1>=|log eta1|", A1, log_eta)
    A2, A3 = _common_A(prec)
    C = led.settle("step2_matveev", matveev_coefficient(3, 3, [A1, A2, A3], prec))
    # n log alpha - log 4 < C (1 + log n)^2, then (1 + log n)^2 <= k (log n)^2 for n > SEARCH_LIMIT
    k = (absorb / log_const(SEARCH_LIMIT, prec)) ** 2
    K = (_ball(C, prec) + log_const(4, prec) / absorb ** 2) / c.log_alpha * k
    coef = led.settle("step2_n", K)
    return SymbolicBound(_ball(coef, prec), 2, log_offset=0)


@dataclass(frozen=True)
class InitialBounds:
    mode: Mode
    n_max: Quantity
    l_total_max: Quantity
    reduction_m: int
    trail: tuple[BoundRecord, ...] = field(default=(), compare=False)


def initial_bounds(mode: Mode = Mode.CERTIFIED, prec: int = DEFAULT_PREC) -> InitialBounds:
    """Chain step one, step two, the r = 2 collapse and the size relation.

    ``reduction_m`` is the integer bound on l1 + l2 derived from ``n_max``
    with the certified log alpha; it is what the reduction uses as M.
    """
    mode = Mode(mode)
    trail: list[BoundRecord] = []
    l1b = step1_l1_bound(mode, prec, trail)
    nb = step2_n_bound(l1b, mode, prec, trail)
    led = _Ledger(mode, prec, trail)
    n_max = led.settle("n_max", guzman_luca(2, nb.coefficient, prec))
    c = get_cubic(prec)
    l_total = (_ball(n_max, prec) * c.log_alpha + 3) / log_const(10, prec)
    l_total_max = led.settle("l_total_max", l_total)
    m = math.floor(_upper(l_total))
    return InitialBounds(mode, n_max, l_total_max, m, tuple(trail))
