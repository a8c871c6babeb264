from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from padovan_repdigits.balls import (
    RealBall,
    bits_to_digits,
    digits_to_bits,
    escalate,
    log_const,
)
from padovan_repdigits.errors import PrecisionError, Undecided

rationals = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**6)
nonzero = rationals.filter(lambda x: x != 0)


def encloses(ball: RealBall, x) -> bool:
    lo, hi = ball.interval()
    return lo <= Fraction(x) <= hi


@settings(max_examples=1000, deadline=None)
@given(rationals, nonzero, st.sampled_from([64, 128, 300]))
def test_arithmetic_contains_exact(x, y, prec):
    bx, by = RealBall.exact(x, prec), RealBall.exact(y, prec)
    assert encloses(bx + by, x + y)
    assert encloses(bx - by, x - y)
    assert encloses(bx * by, x * y)
    assert encloses(bx / by, x / y)
    assert encloses(bx ** 3, x ** 3)
    assert encloses(abs(bx), abs(x))


@settings(max_examples=200, deadline=None)
@given(st.fractions(min_value=Fraction(1, 1000), max_value=1000, max_denominator=1000))
def test_transcendental_against_mpmath(x):
    mpmath.mp.dps = 120
    b = RealBall.exact(x, 300)
    xm = mpmath.mpf(x.numerator) / x.denominator
    for ball, ref in [(b.log(), mpmath.log(xm)), (b.sqrt(), mpmath.sqrt(xm)),
                      (b.root(3), mpmath.cbrt(xm))]:
        lo, hi = ball.interval()
        # mpmath at 120 digits is far tighter than the ball width
        assert mpmath.mpf(lo.numerator) / lo.denominator <= ref + mpmath.mpf(10) ** -110
        assert ref - mpmath.mpf(10) ** -110 <= mpmath.mpf(hi.numerator) / hi.denominator
    small = RealBall.exact(x / 1000, 300)
    assert encloses(small.exp().log(), x / 1000)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 10**9))
def test_refinement_is_nested(n):
    coarse, fine = log_const(n, 64), log_const(n, 256)
    assert coarse.contains(fine)
    assert fine.width <= coarse.width


def test_certified_comparisons():
    third = RealBall.exact(1, 200) / 3
    assert third < Fraction(1, 2)
    assert third > Fraction(333, 1000)
    with pytest.raises(Undecided):
        _ = (third * 3) < 1
    assert (third * 3).contains(1)


def test_floor_and_ceil():
    assert RealBall.exact(Fraction(7, 2), 64).floor() == 3
    assert RealBall.exact(-Fraction(7, 2), 64).ceil() == -3
    with pytest.raises(Undecided):
        RealBall.from_bounds(Fraction(99, 100), Fraction(101, 100), 64).floor()


def test_domain_errors():
    straddle = RealBall.from_bounds(-1, 1, 64)
    with pytest.raises(Undecided):
        straddle.log()
    with pytest.raises(Undecided):
        1 / straddle
    with pytest.raises(ValueError):
        RealBall.from_midrad(0, -1, 64)


@settings(max_examples=200, deadline=None)
@given(rationals, st.integers(1, 60))
def test_json_round_trip_encloses(x, sig):
    b = RealBall.exact(x, 300) / 7
    back = RealBall.from_json(b.to_json(sig))
    assert back.contains(b)


def test_digit_bit_conversion():
    assert digits_to_bits(300) == 997
    assert bits_to_digits(digits_to_bits(300)) >= 300


def test_escalate_doubles_then_gives_up():
    seen = []

    def fn(p):
        seen.append(p)
        if p < 256:
            raise Undecided("more")
        return p

    assert escalate(fn, 64) == 256
    assert seen == [64, 128, 256]
    with pytest.raises(PrecisionError):
        escalate(lambda p: (_ for _ in ()).throw(Undecided("never")), 64, doublings=2)
