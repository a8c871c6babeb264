"""Certified continued fractions and the Dujella-Petho reduction.

The reduction lemma: let p/q be a convergent of an irrational tau with
q > 6M, and put eps = ||mu q|| - M ||tau q||. If eps > 0, then
|u tau - v + mu| < A B^(-w) has no solution with 0 < u <= M and
w >= log(A q / eps) / log B. The argument also rules out the form being
exactly zero, so no separate nonvanishing check is needed inside the range.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Optional, Union

from gmpy2 import mpq

from .algebraic import get_cubic
from .balls import DEFAULT_PREC, RealBall, escalate, log_const
from .bounds import SEARCH_LIMIT
from .errors import BoundViolation, ReductionFailure, Undecided

MAX_RETRIES = 10


# continued fractions -----------------------------------------------------------------


@dataclass(frozen=True)
class ContinuedFraction:
    """Partial quotients a_0; a_1, ... with their exact convergents.

    ``convergent(k)`` counts from 1, so the first convergent is a_0/1; this is
    the numbering under which the 106th convergent of log 10/log alpha has a
    50-digit denominator. ``source_prec`` is None for an exact rational.
    """

    quotients: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...] = field(repr=False)
    source_prec: Optional[int] = None

    @classmethod
    def from_quotients(cls, quotients: Iterable[int],
                       source_prec: Optional[int] = None) -> "ContinuedFraction":
        quotients = tuple(int(a) for a in quotients)
        convs = []
        p0, p1, q0, q1 = 0, 1, 1, 0
        for a in quotients:
            p0, p1 = p1, a * p1 + p0
            q0, q1 = q1, a * q1 + q0
            convs.append((p1, q1))
        return cls(quotients, tuple(convs), source_prec)

    def __len__(self) -> int:
        return len(self.quotients)

    def convergent(self, k: int) -> tuple[int, int]:
        if not 1 <= k <= len(self.convergents):
            raise IndexError(f"convergent {k} not available (have {len(self.convergents)})")
        return self.convergents[k - 1]

    def first_index_above(self, bound: int) -> Optional[int]:
        """Smallest k with q_k > bound, or None."""
        for k, (_, q) in enumerate(self.convergents, start=1):
            if q > bound:
                return k
        return None


def _expand_rational(x: Fraction, terms: Optional[int]) -> ContinuedFraction:
    out = []
    n, d = x.numerator, x.denominator
    while d and (terms is None or len(out) < terms):
        a, r = divmod(n, d)
        out.append(a)
        n, d = d, r
    return ContinuedFraction.from_quotients(out)


def _expand_ball(x: RealBall, terms: Optional[int], min_q: Optional[int],
                 extra: int) -> ContinuedFraction:
    out: list[int] = []
    q0, q1 = 0, 1  # q_{-2}, q_{-1} shifted: q_{k} recursion seeds
    q_prev, q_cur = 1, 0
    reached = None  # index at which min_q was first exceeded
    y = x
    while True:
        a = y.floor()
        out.append(a)
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        if min_q is not None and reached is None and q_cur > min_q:
            reached = len(out)
        done_terms = terms is None or len(out) >= terms
        done_q = min_q is None or (reached is not None and len(out) >= reached + extra)
        if done_terms and done_q:
            break
        frac = y - a
        if not frac > 0:
            raise Undecided(f"complete quotient {len(out)} not separated from an integer")
        y = 1 / frac
    return ContinuedFraction.from_quotients(out, x.prec)


def continued_fraction(x: Union[RealBall, Fraction, int, Callable[[int], RealBall]], *,
                       terms: Optional[int] = None, min_q: Optional[int] = None,
                       extra: int = 0, prec: int = DEFAULT_PREC) -> ContinuedFraction:
    """Certified expansion of ``x`` until ``terms`` quotients and q > ``min_q`` (+ ``extra`` more).

    A callable ``prec -> RealBall`` lets the expansion escalate precision when a
    quotient is undecided; a bare ball raises :class:`Undecided` instead.
    Rationals are expanded exactly (and completely when no target is given).
    """
    if isinstance(x, (int, Fraction)):
        return _expand_rational(Fraction(x), terms)
    if terms is None and min_q is None:
        raise ValueError("an irrational expansion needs a target: terms or min_q")
    if isinstance(x, RealBall):
        return _expand_ball(x, terms, min_q, extra)
    return escalate(lambda p: _expand_ball(x(p), terms, min_q, extra), prec)


def tau_ball(prec: int = DEFAULT_PREC) -> RealBall:
    """log 10 / log alpha."""
    return log_const(10, prec) / get_cubic(prec).log_alpha


@lru_cache(maxsize=32)
def tau_expansion(*, terms: Optional[int] = None, min_q: Optional[int] = None,
                  extra: int = 0, prec: int = DEFAULT_PREC) -> ContinuedFraction:
    return continued_fraction(tau_ball, terms=terms, min_q=min_q, extra=extra, prec=prec)


# nearest-integer distance ------------------------------------------------------------


def nearest_int_distance(x: RealBall) -> RealBall:
    """Enclosure of ||x|| = min over integers n of |x - n|, always within [0, 1/2].

    ||.|| is piecewise linear with zeros at integers and peaks at half-integers,
    so its range over [lo, hi] is read off the endpoints plus those breakpoints.
    """
    lo, hi = mpq(x.lo), mpq(x.hi)
    half = mpq(1, 2)
    if hi - lo >= 1:
        return RealBall.from_bounds(0, half, x.prec)

    def dist(q):
        return abs(q - math.floor(q + half))

    d_lo, d_hi = dist(lo), dist(hi)
    has_int = math.floor(hi) >= math.ceil(lo)
    has_half = math.floor(hi - half) >= math.ceil(lo - half)
    low = 0 if has_int else min(d_lo, d_hi)
    high = half if has_half else max(d_lo, d_hi)
    return RealBall.from_bounds(low, high, x.prec)


# the reduction lemma --------------------------------------------------------------


@dataclass(frozen=True)
class ReductionParams:
    tau: RealBall
    mu: RealBall
    A: RealBall
    B: RealBall
    M: int

    def __post_init__(self):
        if not self.A > 0:
            raise ValueError("A must be positive")
        if not self.B > 1:
            raise ValueError("B must exceed 1")
        if self.M < 1:
            raise ValueError("M must be a positive integer")


@dataclass(frozen=True)
class ReductionOutcome:
    """No solution with u <= M and w > w_bound; found at convergent ``convergent_index``."""

    q_used: int
    epsilon: RealBall
    w_bound: int
    convergent_index: int
    threshold: RealBall
    skipped: tuple[int, ...] = ()


def epsilon_at(params: ReductionParams, q: int) -> RealBall:
    return nearest_int_distance(params.mu * q) - params.M * nearest_int_distance(params.tau * q)


def dp_reduce(params: ReductionParams, cf: ContinuedFraction, *, lookahead: int = 0,
              max_retries: int = MAX_RETRIES) -> ReductionOutcome:
    """Apply the reduction at the first convergent with q > 6M.

    Convergents whose epsilon is certified non-positive are skipped (at most
    ``max_retries`` of them). With ``lookahead`` > 0 that many further
    convergents are also tried and the smallest bound is kept; any of them is
    a valid choice. An epsilon straddling zero before the first success raises
    :class:`Undecided` so the caller can raise the precision.
    """
    k0 = cf.first_index_above(6 * params.M)
    if k0 is None:
        raise ReductionFailure(f"no convergent with q > 6M = {6 * params.M}")
    best: Optional[ReductionOutcome] = None
    first_ok = None
    skipped: list[int] = []
    for k in range(k0, len(cf) + 1):
        if best is None and k - k0 > max_retries:
            break
        if best is not None and k - first_ok > lookahead:
            break
        q = cf.convergent(k)[1]
        eps = epsilon_at(params, q)
        if eps.lo > 0:
            threshold = (params.A * q / eps).log() / params.B.log()
            w = int(math.ceil(mpq(threshold.hi))) - 1
            if best is None:
                first_ok = k
            if best is None or w < best.w_bound:
                best = ReductionOutcome(q, eps, w, k, threshold)
        elif eps.hi <= 0:
            skipped.append(k)
        elif best is None:
            raise Undecided(f"epsilon at convergent {k} straddles zero: {eps!r}")
    if best is None:
        raise ReductionFailure(
            f"epsilon not certified positive at convergents {k0}..{k0 + len(skipped) - 1}"
        )
    return ReductionOutcome(best.q_used, best.epsilon, best.w_bound,
                            best.convergent_index, best.threshold, tuple(skipped))


def _cf_for(M: int, lookahead: int, prec: int) -> ContinuedFraction:
    return tau_expansion(min_q=6 * M, extra=MAX_RETRIES + lookahead + 1, prec=prec)


# the two rounds ---------------------------------------------------------------------


@dataclass(frozen=True)
class Round1Result:
    M: int
    outcomes: dict[int, ReductionOutcome]
    l1_bound: int

    @property
    def min_epsilon(self) -> RealBall:
        return min((o.epsilon for o in self.outcomes.values()), key=lambda e: e.lo)


def round1_params(d1: int, M: int, prec: int = DEFAULT_PREC) -> ReductionParams:
    """u = l1 + l2, v = n, w = l1, from |Gamma_1| < 60/10^l1."""
    c = get_cubic(prec)
    mu = (RealBall.exact(d1, prec) / (9 * c.a)).log() / c.log_alpha
    return ReductionParams(tau_ball(prec), mu, 60 / c.log_alpha, RealBall.exact(10, prec), M)


def reduction_round1(M: int, prec: int = DEFAULT_PREC, *, lookahead: int = 0,
                     cf: Optional[ContinuedFraction] = None) -> Round1Result:
    """Bound l1 over d1 = 1..9. Assumes l1 >= 2 so that 30/10^l1 <= 3/10 < 1/2;
    l1 = 1 is below every bound returned."""
    if not Fraction(30, 10 ** 2) < Fraction(1, 2):
        raise BoundViolation("round one needs 30/10^2 < 1/2")
    cf = cf or _cf_for(M, lookahead, prec)
    outcomes = {d1: dp_reduce(round1_params(d1, M, prec), cf, lookahead=lookahead)
                for d1 in range(1, 10)}
    l1_bound = max(1, max(o.w_bound for o in outcomes.values()))
    return Round1Result(M, outcomes, l1_bound)


Instance = tuple[int, int, int]


@dataclass(frozen=True)
class Round2Result:
    M: int
    l1_max: int
    outcomes: dict[Instance, ReductionOutcome] = field(repr=False)
    n_bound: int
    worst: Instance

    @property
    def instance_count(self) -> int:
        return len(self.outcomes)

    @property
    def min_epsilon(self) -> RealBall:
        return min((o.epsilon for o in self.outcomes.values()), key=lambda e: e.lo)

    @property
    def convergent_usage(self) -> dict[int, int]:
        usage: dict[int, int] = {}
        for o in self.outcomes.values():
            usage[o.convergent_index] = usage.get(o.convergent_index, 0) + 1
        return dict(sorted(usage.items()))


def round2_params(d1: int, d2: int, l1: int, M: int, prec: int = DEFAULT_PREC) -> ReductionParams:
    """u = l2, v = n, w = n, from |Gamma_2| < 8/alpha^n."""
    c = get_cubic(prec)
    num = d1 * 10 ** l1 - (d1 - d2)
    mu = (RealBall.exact(num, prec) / (9 * c.a)).log() / c.log_alpha
    return ReductionParams(tau_ball(prec), mu, 8 / c.log_alpha, c.alpha, M)


def round2_instances(l1_max: int, include_equal_digits: bool = False) -> list[Instance]:
    return [(d1, d2, l1)
            for d1 in range(1, 10) for d2 in range(10)
            if include_equal_digits or d1 != d2
            for l1 in range(1, l1_max + 1)]


def _round2_chunk(chunk: list[Instance], M: int, prec: int, lookahead: int,
                  cf: ContinuedFraction):
    results, failures = {}, []
    for inst in chunk:
        try:
            results[inst] = dp_reduce(round2_params(*inst, M, prec), cf, lookahead=lookahead)
        except ReductionFailure as exc:
            failures.append((inst, str(exc)))
    return results, failures


def reduction_round2(l1_max: int, M: int, prec: int = DEFAULT_PREC, *, lookahead: int = 1,
                     threads: int = 1, include_equal_digits: bool = False,
                     cf: Optional[ContinuedFraction] = None) -> Round2Result:
    """Bound n over every (d1, d2, l1 <= l1_max). Uses n > SEARCH_LIMIT for 4/alpha^n < 1/2."""
    c = get_cubic(prec)
    if not 4 / c.alpha ** (SEARCH_LIMIT + 1) < Fraction(1, 2):
        raise BoundViolation("round two needs 4/alpha^n < 1/2")
    cf = cf or _cf_for(M, lookahead, prec)
    instances = round2_instances(l1_max, include_equal_digits)
    outcomes: dict[Instance, ReductionOutcome] = {}
    failures: list = []
    if threads > 1:
        chunks = [instances[i::threads] for i in range(threads)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_round2_chunk, ch, M, prec, lookahead, cf) for ch in chunks]
            for fut in futures:
                res, fail = fut.result()
                outcomes.update(res)
                failures.extend(fail)
    else:
        outcomes, failures = _round2_chunk(instances, M, prec, lookahead, cf)
    if failures:
        exc = ReductionFailure(f"{len(failures)} round-two instances failed, first: {failures[0]}")
        exc.failures = failures
        raise exc
    outcomes = {k: outcomes[k] for k in instances}
    worst = max(outcomes, key=lambda k: (outcomes[k].w_bound, k))
    return Round2Result(M, l1_max, outcomes, outcomes[worst].w_bound, worst)
