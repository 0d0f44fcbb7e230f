from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from logmatrix.padics import make_context
from logmatrix.series1 import SeriesOneVar, t_series
from logmatrix.special_series import (CharacterPoint, CycloRing, character_points, delta_m,
                                      eval_at_character, lambda_pm, log_pm, log_u, omega_n,
                                      phi_cyc_n, phi_nm)

CTX = make_context(3, 30)


def coeffs(f):
    return f.coefficients()


def test_named_polynomials():
    assert [c.to_fraction() for c in coeffs(omega_n(1, CTX, 4))] == [0, 3, 3, 1, 0]
    assert [c.to_fraction() for c in coeffs(phi_cyc_n(2, CTX, 8))] == [3, 9, 18, 21, 15, 6, 1, 0, 0]
    # delta_2 = X (u^-1 (1+X) - 1) with u = 4
    want = [0, Fraction(-3, 4), Fraction(1, 4), 0]
    assert all(c.equals(CTX(w), 28) for c, w in zip(coeffs(delta_m(2, CTX, 3)), want))


def test_truncation_guards():
    with pytest.raises(ValueError):
        omega_n(2, CTX, 5)
    with pytest.raises(ValueError):
        delta_m(4, CTX, 3)
    with pytest.raises(ValueError):
        phi_cyc_n(0, CTX, 5)


def test_log_u_has_valuation_one():
    assert log_u(CTX, 20).valuation() == 1


def test_cyclotomic_ring_relations():
    ring = CycloRing(CTX, 2)
    assert ring.d == 6
    z = ring.zeta_power(1, 20)
    one = ring.one(20)
    zp = one
    for _ in range(9):
        zp = zp * z
    assert (zp - one).is_zero()
    # Phi_9(Z) = 1 + Z^3 + Z^6 = 0
    s = one + ring.zeta_power(3, 20) + ring.zeta_power(6, 20)
    assert s.is_zero()


def test_character_points_enumerate_primitive_roots():
    pts = character_points(3, [0, 1], 3)
    assert len(pts) == 2 * 6
    assert all(pt.zeta_index % 3 for pt in pts)
    assert character_points(5, [0], 1) == [CharacterPoint(0, 1, 0)]
    pt = CharacterPoint(2, 3, 4)
    assert CharacterPoint.from_json(pt.to_json()) == pt
    assert pt.abscissa_valuation(3, 4) == Fraction(1, 6)
    assert CharacterPoint(1, 1, 0).abscissa_valuation(3, 4) == 1
    assert CharacterPoint(0, 1, 0).abscissa_valuation(3, 4) is None


@pytest.mark.parametrize("n", [2, 3])
def test_phi_cyclotomic_vanishes_at_its_roots(n):
    # Phi_s(1+X) vanishes at zeta - 1 for zeta primitive of order p^s, s = n - 1
    f = phi_cyc_n(n - 1, CTX, 2 * 3 ** (n - 1))
    for pt in character_points(3, [0], n):
        assert eval_at_character(f, pt, exact=True).is_zero()


def test_log_pm_vanishes_at_character_points():
    f = log_pm(2, CTX, 300)
    for n in (1, 2):
        for pt in character_points(3, [0, 1], n):
            v = eval_at_character(f, pt)
            assert v.valuation() >= v.aprec >= 15


@pytest.mark.parametrize("n", [2, 3])
def test_phi_nm_vanishes_at_twisted_points(n):
    # level-n points carry zeta of order p^(n-1), so Phi_{n-1,m} vanishes for j < m
    f = phi_nm(n - 1, 2, CTX, 2 * 2 * 3 ** (n - 2))
    for pt in character_points(3, [0, 1], n):
        assert eval_at_character(f, pt, exact=True).is_zero()
    assert not eval_at_character(f, CharacterPoint(2, n, 1), exact=True).is_zero()


def test_lambda_product_is_t_over_pi():
    lp, lm = lambda_pm(CTX, 30, 25)
    t = t_series(CTX, 31, 25).div_by_x()
    assert (lp * lm).agreement(t) >= 15


def test_tail_bound_refuses_overclaiming():
    f = SeriesOneVar.from_rationals(CTX, [1] * 11, "GAMMA0", 30)
    with pytest.raises(ValueError, match="insufficient"):
        eval_at_character(f, CharacterPoint(0, 2, 1), prec=20)


@given(st.lists(st.integers(-1000, 1000), min_size=1, max_size=8), st.integers(0, 2))
def test_constant_and_polynomial_evaluation(cs, j):
    f = SeriesOneVar.from_rationals(CTX, cs, "GAMMA0", 30)
    pt = CharacterPoint(j, 1, 0)
    x = (Fraction(4) ** j) - 1
    want = sum(c * x ** i for i, c in enumerate(cs))
    got = eval_at_character(f, pt, exact=True)
    assert got.to_scalar().equals(CTX(want), 25)


@given(st.integers(-10 ** 6, 10 ** 6), st.sampled_from([1, 2, 3]), st.integers(0, 3))
def test_constant_series_is_constant_everywhere(c, n, j):
    f = SeriesOneVar.constant(CTX, c, 5, "GAMMA0")
    for pt in character_points(3, [j], n)[:2]:
        v = eval_at_character(f, pt)
        assert (v - v.ring.from_scalar(CTX(c))).is_zero()
