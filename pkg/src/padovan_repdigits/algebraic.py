"""Constants attached to the Padovan characteristic polynomial x^3 - x - 1.

The complex roots beta, gamma and the complex Binet coefficients b, c are
carried only through their moduli, which is all the bounds ever use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from gmpy2 import mpq

from .balls import DEFAULT_PREC, MIN_PREC, RealBall, log_const
from .errors import BoundViolation, Undecided

# 23x^3 - 5x - 1: minimal polynomial of the real Binet coefficient
A_MINPOLY = (23, 0, -5, -1)
PSI = (1, 0, -1, -1)


def _poly_ball(coeffs: Sequence[int], x: RealBall) -> RealBall:
    acc = RealBall.exact(coeffs[0], x.prec)
    for c in coeffs[1:]:
        acc = acc * x + c
    return acc


def _poly_exact(coeffs: Sequence[int], x) -> "mpq":
    acc = mpq(coeffs[0])
    for c in coeffs[1:]:
        acc = acc * x + c
    return acc


def isolate_alpha(prec: int, lo: Fraction = Fraction(13, 10),
                  hi: Fraction = Fraction(14, 10)) -> RealBall:
    """Certified enclosure of the real root of x^3 - x - 1 in ``[lo, hi]``.

    Sign change at the bracket ends is checked in exact rationals, then the
    interval Newton operator N(X) = m - psi(m)/psi'(X) is iterated until it
    stops shrinking X. N(X) strictly inside X at some step proves a unique root.
    """
    if not (_poly_exact(PSI, mpq(lo.numerator, lo.denominator)) < 0
            < _poly_exact(PSI, mpq(hi.numerator, hi.denominator))):
        raise BoundViolation(f"x^3 - x - 1 has no sign change on [{lo}, {hi}]")
    X = RealBall.from_bounds(lo, hi, prec)
    proved_unique = False
    for _ in range(4 * prec.bit_length() + 64):
        deriv = 3 * X * X - 1
        if deriv.lo <= 0:
            raise Undecided("derivative of x^3 - x - 1 not certified positive on the bracket")
        m = RealBall.exact(mpq(X.midpoint), prec)
        N = m - _poly_ball(PSI, m) / deriv
        if X.lo < N.lo and N.hi < X.hi:
            proved_unique = True
        if not N.overlaps(X):
            raise BoundViolation("interval Newton excluded every point of the bracket")
        new = N.intersect(X)
        if new.lo == X.lo and new.hi == X.hi:
            break
        X = new
    if not proved_unique:
        raise Undecided("interval Newton never contracted strictly inside the bracket")
    # endpoints of the final ball still bracket a sign change
    if not (_poly_exact(PSI, mpq(X.lo)) <= 0 <= _poly_exact(PSI, mpq(X.hi))):
        raise BoundViolation("final alpha ball does not bracket the root")
    return X


def cardano_alpha(prec: int) -> RealBall:
    """alpha = (r1 + r2)/6 with r1, r2 = cbrt(108 +/- 12 sqrt 69)."""
    s = 12 * RealBall.exact(69, prec).sqrt()
    r1 = (108 + s).root(3)
    r2 = (108 - s).root(3)
    return (r1 + r2) / 6


@dataclass(frozen=True)
class CubicData:
    alpha: RealBall
    beta_abs: RealBall
    a: RealBall
    b_abs: RealBall
    log_alpha: RealBall
    prec: int


def compute_cubic(prec: int = DEFAULT_PREC) -> CubicData:
    """Root system of x^3 - x - 1 and the Binet coefficient moduli at ``prec`` bits."""
    if prec < MIN_PREC:
        raise ValueError(f"precision {prec} bits is below the floor of {MIN_PREC}")
    alpha = isolate_alpha(prec)
    # beta * gamma = 1/alpha since the roots multiply to 1
    beta_abs = 1 / alpha.sqrt()
    a = alpha * (alpha + 1) / (2 * alpha + 3)
    # a * b * c = 1/23 from 23x^3 - 5x - 1, and b c = |b|^2
    b_abs = (1 / (23 * a)).sqrt()
    data = CubicData(alpha, beta_abs, a, b_abs, alpha.log(), prec)
    check_cubic(data)
    return data


def check_cubic(c: CubicData) -> None:
    """Raise unless the certified estimates on alpha, |beta|, a, |b| hold."""
    ranges = [
        ("alpha", c.alpha, Fraction(132, 100), Fraction(133, 100)),
        ("|beta|", c.beta_abs, Fraction(86, 100), Fraction(87, 100)),
        ("a", c.a, Fraction(54, 100), Fraction(55, 100)),
        ("|b|", c.b_abs, Fraction(28, 100), Fraction(29, 100)),
    ]
    for name, ball, lo, hi in ranges:
        if not (ball > lo and ball < hi):
            raise BoundViolation(f"{name} = {ball!r} outside ({lo}, {hi})")
    if not _poly_ball(A_MINPOLY, c.a).contains(0):
        raise BoundViolation("23a^3 - 5a - 1 does not vanish on the a ball")
    if not (c.beta_abs ** 2 * c.alpha).contains(1):
        raise BoundViolation("|beta|^2 alpha does not contain 1")


@lru_cache(maxsize=16)
def get_cubic(prec: int = DEFAULT_PREC) -> CubicData:
    return compute_cubic(prec)


# logarithmic heights ----------------------------------------------------------


def log_height_rational(p: int, q: int = 1, prec: int = DEFAULT_PREC) -> RealBall:
    """h(p/q) = log max(|p|, q) for a reduced fraction."""
    if q <= 0:
        raise ValueError("denominator must be positive")
    if math.gcd(p, q) != 1:
        raise ValueError(f"{p}/{q} is not in lowest terms")
    return RealBall.exact(max(abs(p), q), prec).log()


def log_height_from_minpoly(leading: int, root_moduli: Sequence[RealBall],
                            prec: int = DEFAULT_PREC) -> RealBall:
    """(log a0 + sum log max(|root|, 1)) / d, given certified conjugate moduli.

    Each modulus must be certified on one side of 1; otherwise Undecided.
    """
    total = RealBall.exact(leading, prec).log()
    for r in root_moduli:
        if r > 1:
            total = total + r.log()
        elif not r <= 1:
            raise Undecided(f"conjugate modulus {r!r} not separated from 1")
    return total / len(root_moduli)


def height_a(cubic: CubicData) -> RealBall:
    """h(a) = (1/3) log 23: all zeros of 23x^3 - 5x - 1 lie inside the unit disc."""
    return log_height_from_minpoly(23, [cubic.a, cubic.b_abs, cubic.b_abs], cubic.prec)


def height_alpha(cubic: CubicData) -> RealBall:
    return log_height_from_minpoly(1, [cubic.alpha, cubic.beta_abs, cubic.beta_abs], cubic.prec)


def height_eta1_step1(d1: int, cubic: CubicData | None = None) -> RealBall:
    """Upper bound h(9) + h(a) + h(d1) for h(9a/d1)."""
    if not 1 <= d1 <= 9:
        raise ValueError("d1 must be a nonzero digit")
    cubic = cubic or get_cubic()
    p = cubic.prec
    return log_height_rational(9, 1, p) + height_a(cubic) + log_height_rational(d1, 1, p)


def step2_height_constant(cubic: CubicData | None = None) -> RealBall:
    """4 log 9 + h(a) + 2 log 2: the digit-uniform part of the step-two height chain."""
    cubic = cubic or get_cubic()
    p = cubic.prec
    return 4 * log_const(9, p) + height_a(cubic) + 2 * log_const(2, p)


def height_eta1_step2(d1: int, d2: int, l1: int | None = None, *,
                      l1_log10_bound: RealBall | None = None,
                      uniform: bool = False,
                      cubic: CubicData | None = None) -> RealBall:
    """Upper bound for h((d1*10^l1 - (d1 - d2)) / (9a)).

    The chain is h(d1*10^l1) + h(d1 - d2) + h(9) + h(a) + log 2 with
    h(d1*10^l1) <= h(d1) + l1 log 10 and h(d1 - d2) <= h(d1) + h(d2) + log 2.
    ``uniform`` replaces each h(d_i) by log 9. ``l1_log10_bound`` replaces
    the l1 log 10 term by a supplied upper bound.
    """
    if not (1 <= d1 <= 9 and 0 <= d2 <= 9 and d1 != d2):
        raise ValueError("need digits with d1 != d2 and d1 >= 1")
    cubic = cubic or get_cubic()
    p = cubic.prec
    if l1_log10_bound is not None:
        lead = l1_log10_bound
    elif l1 is not None and l1 >= 1:
        lead = l1 * log_const(10, p)
    else:
        raise ValueError("need l1 >= 1 or an explicit bound on l1 log 10")
    if uniform:
        return lead + step2_height_constant(cubic)
    h1, h2 = log_height_rational(d1, 1, p), log_height_rational(d2, 1, p)
    return lead + 2 * h1 + h2 + log_const(9, p) + height_a(cubic) + 2 * log_const(2, p)
