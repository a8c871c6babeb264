import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from padovan_repdigits.algebraic import get_cubic
from padovan_repdigits.balls import RealBall
from padovan_repdigits.bounds import Mode, initial_bounds
from padovan_repdigits.errors import ReductionFailure, Undecided
from padovan_repdigits.reduction import (
    ContinuedFraction,
    ReductionParams,
    continued_fraction,
    dp_reduce,
    nearest_int_distance,
    reduction_round1,
    reduction_round2,
    round2_instances,
    round2_params,
    round1_params,
    tau_ball,
    tau_expansion,
)

from toy_oracles import max_violating_w, toy_instance

Q106 = 21695574963444524513646677911090250505443859600601
P106 = 177652856036642165557187989663314255133456297895465


@pytest.fixture(scope="module")
def published_m():
    return initial_bounds(Mode.PAPER).reduction_m


def mpmath_quotients(x, n):
    out = []
    for _ in range(n):
        a = int(mpmath.floor(x))
        out.append(a)
        x = 1 / (x - a)
    return out


def test_tau_quotients_against_mpmath():
    mpmath.mp.dps = 500
    alpha = mpmath.findroot(lambda x: x**3 - x - 1, mpmath.mpf("1.3247"))
    ref = mpmath_quotients(mpmath.log(10) / mpmath.log(alpha), 150)
    assert list(tau_expansion(terms=150).quotients) == ref


def test_convergent_106():
    cf = tau_expansion(terms=106)
    assert cf.convergent(106) == (P106, Q106)
    with pytest.raises(IndexError):
        cf.convergent(107)
    with pytest.raises(IndexError):
        cf.convergent(0)


def test_convergent_invariants():
    cf = tau_expansion(terms=120)
    qs = [q for _, q in cf.convergents]
    assert all(b > a for a, b in zip(qs[1:], qs[2:]))
    for (p, q) in cf.convergents:
        assert math.gcd(p, q) == 1
    # seed (p_{-1}, q_{-1}) = (1, 0); the first convergent is (a_0, 1)
    conv = [(1, 0)] + list(cf.convergents)
    assert conv[1] == (cf.quotients[0], 1)
    for k in range(2, len(conv)):
        a = cf.quotients[k - 1]
        assert conv[k] == (a * conv[k - 1][0] + conv[k - 2][0], a * conv[k - 1][1] + conv[k - 2][1])


def test_convergent_quality():
    tau = tau_ball(997)
    cf = tau_expansion(terms=115)
    for k in range(1, 114):
        p, q = cf.convergent(k)
        q_next = cf.convergent(k + 1)[1]
        assert abs(tau - Fraction(p, q)) < Fraction(1, q * q_next)


def test_rational_expansion():
    assert continued_fraction(Fraction(10, 7)).quotients == (1, 2, 3)
    assert continued_fraction(Fraction(10, 7)).convergent(3) == (10, 7)
    assert continued_fraction(5).quotients == (5,)
    assert continued_fraction(Fraction(-7, 3)).quotients == (-3, 1, 2)


def test_irrational_needs_target():
    with pytest.raises(ValueError):
        continued_fraction(tau_ball(128))


def test_bare_ball_raises_undecided():
    with pytest.raises(Undecided):
        continued_fraction(tau_ball(64), terms=100)


def test_min_q_target():
    cf = continued_fraction(tau_ball, min_q=10**40, extra=3)
    k = cf.first_index_above(10**40)
    assert len(cf) == k + 3


def test_deterministic():
    assert continued_fraction(tau_ball, terms=80) == continued_fraction(tau_ball, terms=80)


@pytest.mark.parametrize("x,expect", [
    (Fraction(24, 10), Fraction(4, 10)),
    (Fraction(-1, 2), Fraction(1, 2)),
    (Fraction(7000001, 1000000), Fraction(1, 1000000)),
    (Fraction(3), Fraction(0)),
])
def test_nearest_int_examples(x, expect):
    d = nearest_int_distance(RealBall.exact(x, 170))
    assert d.contains(expect)
    assert d.width < Fraction(1, 10**45)


@settings(max_examples=500, deadline=None)
@given(st.fractions(min_value=-1000, max_value=1000, max_denominator=1000),
       st.fractions(min_value=0, max_value=2, max_denominator=7))
def test_nearest_int_encloses(x, r):
    ball = RealBall.from_midrad(x, r, 64)
    d = nearest_int_distance(ball)
    lo, hi = d.interval()
    assert 0 <= lo and hi <= Fraction(1, 2)
    for t in (x - r, x, x + r, x - r / 3):
        exact = abs(t - round(t))
        assert lo <= exact <= hi


def test_toy_example_sqrt2():
    # tau = sqrt 2, mu = 1/3, A = 10, B = 2, M = 50
    mpmath.mp.dps = 60
    out = toy_instance("sqrt2", Fraction(1, 3), 10, 2, 50)
    assert out.q_used > 300
    assert out.epsilon > 0
    assert max_violating_w(mpmath.sqrt(2), mpmath.mpf(1) / 3, 10, 2, 50) <= out.w_bound


def test_params_validation():
    one = RealBall.exact(1)
    with pytest.raises(ValueError):
        ReductionParams(one, one, RealBall.exact(-1), RealBall.exact(2), 5)
    with pytest.raises(ValueError):
        ReductionParams(one, one, one, one, 5)
    with pytest.raises(ValueError):
        ReductionParams(one, one, one, RealBall.exact(2), 0)


def test_insufficient_convergents(published_m):
    cf = tau_expansion(terms=50)
    with pytest.raises(ReductionFailure):
        dp_reduce(round1_params(1, published_m), cf)


def test_low_precision_is_undecided(published_m):
    cf = tau_expansion(terms=115)
    with pytest.raises(Undecided):
        dp_reduce(round2_params(1, 2, 1, published_m, 128), cf)


def test_nonpositive_epsilon_advances():
    # M = 8e48 leaves q_106 below 6M; the first admissible convergent is q_107
    cf = tau_expansion(terms=130)
    out = dp_reduce(round1_params(9, 8 * 10**48), cf)
    assert out.q_used > 6 * 8 * 10**48
    assert Q106 < 6 * 8 * 10**48
    assert out.convergent_index >= 107


def test_round_one_digit_nine(published_m):
    out = dp_reduce(round1_params(9, published_m), tau_expansion(terms=120))
    assert out.convergent_index == 106 and out.q_used == Q106
    assert out.w_bound <= 53


def test_round_one_published_m(published_m):
    r1 = reduction_round1(published_m)
    assert r1.l1_bound == 53
    assert r1.min_epsilon > Fraction("0.0375413")
    assert {o.q_used for o in r1.outcomes.values()} == {Q106}


def test_round_two_single_instance(published_m):
    out = dp_reduce(round2_params(1, 2, 1, published_m), tau_expansion(terms=120), lookahead=1)
    assert out.w_bound <= 446


def test_round_two_instance_count():
    assert len(round2_instances(53)) == 81 * 53
    assert len(round2_instances(53, include_equal_digits=True)) == 90 * 53


def test_round_two_small_sweep_threads_agree(published_m):
    single = reduction_round2(3, published_m)
    multi = reduction_round2(3, published_m, threads=3)
    assert single.outcomes == multi.outcomes
    assert single.n_bound == multi.n_bound


def test_certified_mode_rounds():
    ib = initial_bounds(Mode.CERTIFIED)
    r1 = reduction_round1(ib.reduction_m, lookahead=1)
    assert r1.l1_bound <= 53
    r2 = reduction_round2(r1.l1_bound, ib.reduction_m)
    assert r2.n_bound < 500
