"""Certified real arithmetic on top of MPFR directed rounding.

A :class:`RealBall` stores a closed interval ``[lo, hi]`` with MPFR endpoints.
Every operation rounds the lower endpoint toward -inf and the upper endpoint
toward +inf, so the exact result of the operation on any points of the inputs
is always enclosed. The public face is the usual midpoint/radius pair.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, TypeVar, Union

import gmpy2
from gmpy2 import mpfr, mpq, mpz

from .errors import PrecisionError, Undecided

DEFAULT_DIGITS = 300
MIN_PREC = 64
MAX_DOUBLINGS = 4

Number = Union[int, Fraction, str, "mpq", "mpz"]
T = TypeVar("T")


def digits_to_bits(digits: int) -> int:
    return math.ceil(digits * math.log2(10))


def bits_to_digits(bits: int) -> int:
    return math.floor(bits * math.log10(2))


DEFAULT_PREC = digits_to_bits(DEFAULT_DIGITS)


@lru_cache(maxsize=None)
def _ctx(prec: int, up: bool) -> gmpy2.context:
    return gmpy2.context(
        precision=prec,
        round=gmpy2.RoundUp if up else gmpy2.RoundDown,
        emax=gmpy2.get_emax_max(),
        emin=gmpy2.get_emin_min(),
    )


def _exact(value) -> "mpq":
    if isinstance(value, (int, mpz)):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        f = Fraction(value)
        return mpq(f.numerator, f.denominator)
    if isinstance(value, type(mpq())):
        return value
    if isinstance(value, type(mpfr())):
        return mpq(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def _round(value, prec: int, up: bool):
    return mpfr(value, prec, context=_ctx(prec, up))


class RealBall:
    """A certified enclosure ``[lo, hi]`` of a real number.

    ``==`` compares enclosures structurally; use ``<``, ``<=``, ``>``, ``>=``
    for certified comparisons, which raise :class:`Undecided` when the answer
    is not determined by the intervals.
    """

    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo, hi, prec: int):
        if gmpy2.is_nan(lo) or gmpy2.is_nan(hi):
            raise ValueError("ball endpoints must not be NaN")
        if lo > hi:
            raise ValueError(f"empty ball: lo={lo} > hi={hi}")
        self.lo = lo
        self.hi = hi
        self.prec = prec

    # construction -------------------------------------------------------

    @classmethod
    def exact(cls, value: Number, prec: int = DEFAULT_PREC) -> "RealBall":
        q = _exact(value)
        return cls(_round(q, prec, False), _round(q, prec, True), prec)

    @classmethod
    def from_bounds(cls, lo: Number, hi: Number, prec: int = DEFAULT_PREC) -> "RealBall":
        return cls(_round(_exact(lo), prec, False), _round(_exact(hi), prec, True), prec)

    @classmethod
    def from_midrad(cls, mid: Number, rad: Number, prec: int = DEFAULT_PREC) -> "RealBall":
        m, r = _exact(mid), _exact(rad)
        if r < 0:
            raise ValueError("radius must be non-negative")
        return cls.from_bounds(m - r, m + r, prec)

    def _coerce(self, other) -> "RealBall":
        if isinstance(other, RealBall):
            return other
        return RealBall.exact(other, self.prec)

    # views --------------------------------------------------------------

    @property
    def midpoint(self):
        return mpfr((mpq(self.lo) + mpq(self.hi)) / 2, self.prec)

    @property
    def radius(self):
        m = mpq(self.midpoint)
        r = max(mpq(self.hi) - m, m - mpq(self.lo))
        return _round(r, 53, True)

    @property
    def width(self):
        return _ctx(self.prec, True).sub(self.hi, self.lo)

    @property
    def digits(self) -> int:
        return bits_to_digits(self.prec)

    def interval(self) -> tuple[Fraction, Fraction]:
        lo, hi = mpq(self.lo), mpq(self.hi)
        return (Fraction(int(lo.numerator), int(lo.denominator)),
                Fraction(int(hi.numerator), int(hi.denominator)))

    def with_prec(self, prec: int) -> "RealBall":
        return RealBall(_round(self.lo, prec, False), _round(self.hi, prec, True), prec)

    def __repr__(self) -> str:
        return f"RealBall({self.midpoint:.20g} +/- {float(self.radius):.3g}, prec={self.prec})"

    def __float__(self) -> float:
        return float(self.midpoint)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RealBall):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self) -> int:
        return hash((mpq(self.lo), mpq(self.hi)))

    # arithmetic ---------------------------------------------------------

    def _prec_with(self, other: "RealBall") -> int:
        return max(self.prec, other.prec)

    def __neg__(self) -> "RealBall":
        # gmpy2's unary minus rounds to the global context; negate in our own
        return RealBall(_ctx(self.prec, False).minus(self.hi),
                        _ctx(self.prec, True).minus(self.lo), self.prec)

    def __pos__(self) -> "RealBall":
        return self

    def __add__(self, other) -> "RealBall":
        o = self._coerce(other)
        p = self._prec_with(o)
        return RealBall(_ctx(p, False).add(self.lo, o.lo), _ctx(p, True).add(self.hi, o.hi), p)

    __radd__ = __add__

    def __sub__(self, other) -> "RealBall":
        o = self._coerce(other)
        p = self._prec_with(o)
        return RealBall(_ctx(p, False).sub(self.lo, o.hi), _ctx(p, True).sub(self.hi, o.lo), p)

    def __rsub__(self, other) -> "RealBall":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RealBall":
        o = self._coerce(other)
        p = self._prec_with(o)
        down, up = _ctx(p, False), _ctx(p, True)
        pairs = [(self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi)]
        return RealBall(min(down.mul(x, y) for x, y in pairs),
                        max(up.mul(x, y) for x, y in pairs), p)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RealBall":
        o = self._coerce(other)
        if o.lo <= 0 <= o.hi:
            raise Undecided("division by a ball that contains zero")
        p = self._prec_with(o)
        down, up = _ctx(p, False), _ctx(p, True)
        pairs = [(self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi)]
        return RealBall(min(down.div(x, y) for x, y in pairs),
                        max(up.div(x, y) for x, y in pairs), p)

    def __rtruediv__(self, other) -> "RealBall":
        return self._coerce(other) / self

    def __pow__(self, k: int) -> "RealBall":
        if not isinstance(k, int):
            raise TypeError("RealBall powers take integer exponents; use exp/log otherwise")
        if k == 0:
            return RealBall.exact(1, self.prec)
        if k < 0:
            return RealBall.exact(1, self.prec) / (self ** -k)
        down, up = _ctx(self.prec, False), _ctx(self.prec, True)
        if k % 2 == 1 or self.lo >= 0:
            return RealBall(down.pow(self.lo, k), up.pow(self.hi, k), self.prec)
        if self.hi <= 0:
            return RealBall(down.pow(self.hi, k), up.pow(self.lo, k), self.prec)
        m = max(up.minus(self.lo), self.hi)
        return RealBall(mpfr(0, self.prec), up.pow(m, k), self.prec)

    def __abs__(self) -> "RealBall":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RealBall(mpfr(0, self.prec),
                        max(_ctx(self.prec, True).minus(self.lo), self.hi), self.prec)

    def _require_positive(self, what: str) -> None:
        if self.hi <= 0:
            raise ValueError(f"{what} of a non-positive number")
        if self.lo <= 0:
            raise Undecided(f"{what}: ball straddles zero")

    def log(self) -> "RealBall":
        self._require_positive("log")
        return RealBall(_ctx(self.prec, False).log(self.lo),
                        _ctx(self.prec, True).log(self.hi), self.prec)

    def exp(self) -> "RealBall":
        return RealBall(_ctx(self.prec, False).exp(self.lo),
                        _ctx(self.prec, True).exp(self.hi), self.prec)

    def sqrt(self) -> "RealBall":
        if self.hi < 0:
            raise ValueError("sqrt of a negative number")
        if self.lo < 0:
            raise Undecided("sqrt: ball straddles zero")
        return RealBall(_ctx(self.prec, False).sqrt(self.lo),
                        _ctx(self.prec, True).sqrt(self.hi), self.prec)

    def root(self, n: int) -> "RealBall":
        """Real n-th root; monotone, so endpoints map to endpoints."""
        if n < 1:
            raise ValueError("root order must be positive")
        if n % 2 == 0 and self.lo < 0:
            if self.hi < 0:
                raise ValueError("even root of a negative number")
            raise Undecided("even root: ball straddles zero")
        return RealBall(_ctx(self.prec, False).rootn(self.lo, n),
                        _ctx(self.prec, True).rootn(self.hi, n), self.prec)

    def floor(self) -> int:
        lo, hi = math.floor(mpq(self.lo)), math.floor(mpq(self.hi))
        if lo != hi:
            raise Undecided(f"floor undecided between {lo} and {hi}")
        return lo

    def ceil(self) -> int:
        lo, hi = math.ceil(mpq(self.lo)), math.ceil(mpq(self.hi))
        if lo != hi:
            raise Undecided(f"ceil undecided between {lo} and {hi}")
        return lo

    # set operations -----------------------------------------------------

    def contains(self, other) -> bool:
        """True when every point of ``other`` lies in this ball."""
        if isinstance(other, RealBall):
            return self.lo <= other.lo and other.hi <= self.hi
        q = _exact(other)
        return mpq(self.lo) <= q <= mpq(self.hi)

    def overlaps(self, other: "RealBall") -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def intersect(self, other: "RealBall") -> "RealBall":
        if not self.overlaps(other):
            raise ValueError("balls are disjoint")
        return RealBall(max(self.lo, other.lo), min(self.hi, other.hi),
                        self._prec_with(other))

    def union(self, other: "RealBall") -> "RealBall":
        return RealBall(min(self.lo, other.lo), max(self.hi, other.hi),
                        self._prec_with(other))

    # certified comparisons ---------------------------------------------

    def _bounds_of(self, other):
        if isinstance(other, RealBall):
            return mpq(other.lo), mpq(other.hi)
        q = _exact(other)
        return q, q

    def __lt__(self, other) -> bool:
        olo, ohi = self._bounds_of(other)
        if mpq(self.hi) < olo:
            return True
        if mpq(self.lo) >= ohi:
            return False
        raise Undecided(f"cannot decide {self!r} < {other!r}")

    def __le__(self, other) -> bool:
        olo, ohi = self._bounds_of(other)
        if mpq(self.hi) <= olo:
            return True
        if mpq(self.lo) > ohi:
            return False
        raise Undecided(f"cannot decide {self!r} <= {other!r}")

    def __gt__(self, other) -> bool:
        olo, ohi = self._bounds_of(other)
        if mpq(self.lo) > ohi:
            return True
        if mpq(self.hi) <= olo:
            return False
        raise Undecided(f"cannot decide {self!r} > {other!r}")

    def __ge__(self, other) -> bool:
        olo, ohi = self._bounds_of(other)
        if mpq(self.lo) >= ohi:
            return True
        if mpq(self.hi) < olo:
            return False
        raise Undecided(f"cannot decide {self!r} >= {other!r}")

    # serialization ------------------------------------------------------

    def to_json(self, sig: int | None = None) -> dict:
        """Midpoint/radius decimal strings whose ball encloses this one."""
        sig = sig or max(self.digits, 20)
        mid = _decimal_nearest(mpq(self.midpoint), sig)
        need = max(mpq(self.hi) - mid, mid - mpq(self.lo))
        return {
            "midpoint": _fraction_to_sci(mid, sig),
            "radius": _decimal_up(need, 6),
            "digits": self.digits,
        }

    @classmethod
    def from_json(cls, data: dict) -> "RealBall":
        prec = digits_to_bits(int(data["digits"])) + 8
        return cls.from_midrad(data["midpoint"], data["radius"], prec)


def _decimal_nearest(q, sig: int):
    """Nearest rational of the form m * 10**e with ``sig`` significant digits."""
    if q == 0:
        return mpq(0)
    e = _decimal_exponent(abs(q)) - sig + 1
    scaled = q / mpq(10) ** e if e >= 0 else q * mpq(10) ** (-e)
    m = _round_half(scaled)
    return mpq(m) * mpq(10) ** e if e >= 0 else mpq(m, 10 ** (-e))


def _round_half(q) -> int:
    n, d = int(q.numerator), int(q.denominator)
    return (2 * n + d) // (2 * d)


def _decimal_exponent(q) -> int:
    """floor(log10(q)) for a positive rational, computed exactly."""
    n, d = int(q.numerator), int(q.denominator)
    e = len(str(n)) - len(str(d))
    if e >= 0:
        if n < d * 10 ** e:
            e -= 1
    elif n * 10 ** (-e) < d:
        e -= 1
    return e


def _fraction_to_sci(q, sig: int) -> str:
    if q == 0:
        return "0"
    sign = "-" if q < 0 else ""
    q = abs(q)
    e = _decimal_exponent(q) - sig + 1
    m = int(q / mpq(10) ** e) if e >= 0 else int(q * mpq(10) ** (-e))
    s = str(m)
    return f"{sign}{s[0]}.{s[1:]}e{e + len(s) - 1}" if len(s) > 1 else f"{sign}{s}e{e}"


def _decimal_up(q, sig: int) -> str:
    """Decimal string >= q with ``sig`` significant digits."""
    if q <= 0:
        return "0"
    e = _decimal_exponent(q) - sig + 1
    scaled = q / mpq(10) ** e if e >= 0 else q * mpq(10) ** (-e)
    m = -((-int(scaled.numerator)) // int(scaled.denominator))
    return _fraction_to_sci(mpq(m) * mpq(10) ** e if e >= 0 else mpq(m, 10 ** (-e)), len(str(m)))


def escalate(fn: Callable[[int], T], prec: int = DEFAULT_PREC,
             doublings: int = MAX_DOUBLINGS) -> T:
    """Call ``fn(prec)``, doubling ``prec`` on :class:`Undecided` up to ``doublings`` times."""
    last: Undecided | None = None
    for i in range(doublings + 1):
        try:
            return fn(prec << i)
        except Undecided as exc:
            last = exc
    raise PrecisionError(
        f"undecided even at {prec << doublings} bits ({bits_to_digits(prec << doublings)} digits): {last}"
    ) from last


@lru_cache(maxsize=None)
def log_const(n: int, prec: int) -> RealBall:
    """Ball for log(n), n a positive integer; cached since log 10, log 2 recur."""
    return RealBall.exact(n, prec).log()
