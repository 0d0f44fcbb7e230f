from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logmatrix.padics import (hecke_roots, is_square_qp, make_context, newton_slopes, slope_floor,
                              sqrt_qp, vp_frac, vp_int)

PRIMES = st.sampled_from([3, 5, 7])
nonzero = st.integers(-10 ** 6, 10 ** 6).filter(bool)
rationals = st.builds(Fraction, st.integers(-10 ** 6, 10 ** 6), st.integers(1, 10 ** 4))


def test_valuations_of_integers_and_fractions():
    assert vp_int(72, 3) == 2
    assert vp_int(250, 5) == 3
    assert vp_frac(Fraction(5, 9), 3) == -2
    assert vp_frac(Fraction(49, 10), 7) == 2


def test_scalar_keeps_denominators():
    ctx = make_context(3, 20)
    x = ctx(Fraction(5, 9))
    assert x.valuation() == -2
    assert x.to_fraction() == Fraction(5, 9)


def test_make_context_rejects_bad_input():
    with pytest.raises(ValueError):
        make_context(4, 10)
    with pytest.raises(ValueError):
        make_context(2, 10)
    with pytest.raises(ValueError, match="reducible"):
        make_context(5, 10, [-4, 0, 1])         # t^2 - 4 splits
    with pytest.raises(ValueError, match="monic"):
        make_context(3, 10, [1, 0, 2])


def test_theta_satisfies_its_minimal_polynomial():
    ctx = make_context(3, 30, [Fraction(3, 4), 0, 1])
    th = ctx.theta()
    assert (th * th + Fraction(3, 4)).is_zero()
    assert th.valuation() == Fraction(1, 2)


def test_newton_slopes_hand_cases():
    # X^2 - 3X + 3 over Q_3: both roots have valuation 1/2
    assert newton_slopes([1, 1, 0]) == [Fraction(1, 2)] * 2
    # X^2 + 3X + 9: collinear points, both roots of valuation 1
    assert newton_slopes([2, 1, 0]) == [1, 1]
    # X^2 - 9X + 3: slopes 1/2 twice since (1, 2) lies above the hull
    assert newton_slopes([1, 2, 0]) == [Fraction(1, 2)] * 2
    # X^2 + 3X: a zero root and one of valuation 1
    assert newton_slopes([None, 1, 0]) == [None, 1]


def test_slope_floor_values():
    assert slope_floor(2, 3) == 0
    assert slope_floor(4, 3) == 1
    assert slope_floor(3, 5) == 0


def test_hecke_roots_supersingular_weight_two():
    r = hecke_roots(3, 2, 3, 1, 30)
    assert r.ctx.degree == 2
    assert r.valuations() == (Fraction(1, 2), Fraction(1, 2))
    assert all(res.valuation() >= 30 for res in r.check())
    assert (r.alpha + r.beta - 3).valuation() >= 30
    assert (r.alpha * r.beta - 3).valuation() >= 30


def test_hecke_roots_rational_case():
    # X^2 - 33X + 9: discriminant 1053 = 81 * 13 is a square in Q_3
    r = hecke_roots(3, 3, 33, 1, 30)
    assert r.ctx.degree == 1
    assert r.valuations() == (1, 1)
    assert all(res.valuation() >= 30 for res in r.check())
    assert not (r.alpha - r.beta).is_zero()


def test_hecke_roots_in_supplied_context():
    ref = hecke_roots(3, 2, 3, 1, 30)
    again = hecke_roots(3, 3, 3, 10, 30, ctx=ref.ctx)
    assert again.ctx.key == ref.ctx.key
    assert all(res.valuation() >= 30 for res in again.check())
    with pytest.raises(ValueError, match="do not lie"):
        hecke_roots(3, 3, 9, 4, 30, ctx=ref.ctx)


def test_hecke_roots_input_errors():
    with pytest.raises(ValueError, match="unit"):
        hecke_roots(3, 2, 3, 3, 20)
    with pytest.raises(ValueError, match="positive"):
        hecke_roots(3, 2, 1, 1, 20)


@given(PRIMES, rationals, rationals)
def test_ring_operations_match_rationals(p, a, b):
    ctx = make_context(p, 25)
    x, y = ctx(a), ctx(b)
    assert (x + y).equals(ctx(a + b), 20)
    assert (x - y).equals(ctx(a - b), 20)
    assert (x * y).equals(ctx(a * b), 15)


@given(PRIMES, nonzero)
def test_inverse_of_nonzero(p, n):
    ctx = make_context(p, 30)
    x = ctx(n)
    assert (x * x.inverse() - 1).valuation() >= 30 - 2 * x.valuation() - 1


@settings(max_examples=50)
@given(st.integers(1, 10 ** 6), st.integers(-10 ** 6, 10 ** 6))
def test_quadratic_norm_is_multiplicative(a, b):
    ctx = make_context(5, 30, [2, 0, 1])        # t^2 + 2, unramified over Q_5
    x = ctx(a) + ctx(b) * ctx.theta()
    y = ctx(b) + ctx(1) * ctx.theta()
    assert ((x * y).norm() - x.norm() * y.norm()).valuation() >= 20
    assert (x * y).valuation() == x.valuation() + y.valuation() or (x * y).is_zero()


@given(PRIMES, st.integers(1, 10 ** 6), st.integers(5, 40))
def test_sqrt_hensel_lift(p, n, m):
    if n % p == 0 or not is_square_qp(n, p):
        return
    r = sqrt_qp(n, p, m)
    assert (r * r - n) % p ** m == 0


@given(st.lists(st.integers(0, 6), min_size=2, max_size=6))
def test_newton_slopes_sum_to_endpoint_drop(vals):
    # the slopes sum to v(a_0) - v(a_d)
    s = newton_slopes(vals)
    assert len(s) == len(vals) - 1
    assert sum(s) == vals[0] - vals[-1]
    assert s == sorted(s, reverse=True)
