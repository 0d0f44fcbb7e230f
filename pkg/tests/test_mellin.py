from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logmatrix.mellin import (MellinBasisCache, character_value, eval_series_at, inverse_mellin,
                              inverse_mellin_phi, mellin, mellin_phi, theta_op)
from logmatrix.padics import make_context
from logmatrix.series1 import SeriesOneVar, phi_act
from logmatrix.special_series import CharacterPoint, CycloRing, eval_at_character

CTX = make_context(3, 40)
CACHE = MellinBasisCache(CTX, 60, 12, 40)


def xseries(cs, N=12):
    return SeriesOneVar.from_rationals(CTX, cs, "GAMMA0", 40, N=N)


def test_image_of_X():
    # X (1+pi) = (1+pi)^4 - (1+pi)
    g = mellin(xseries([0, 1]), CACHE)
    assert [c.to_fraction() for c in g.coefficients()[:6]] == [0, 3, 6, 4, 1, 0]


def test_image_of_X_squared_linear_term():
    # (1+pi)^16 - 2 (1+pi)^4 + (1+pi): pi-coefficient 16 - 8 + 1
    g = mellin(xseries([0, 0, 1]), CACHE)
    assert g.coefficient(0).to_fraction() == 0
    assert g.coefficient(1).to_fraction() == 9


def test_depth_guard():
    with pytest.raises(ValueError, match="depth"):
        mellin(xseries([1] * 20, N=20), CACHE)
    with pytest.raises(ValueError):
        MellinBasisCache(CTX, 10, 20)


poly = st.lists(st.integers(-10 ** 6, 10 ** 6), min_size=1, max_size=13)


@settings(max_examples=25, deadline=None)
@given(poly)
def test_inverse_by_elimination(cs):
    f = xseries(cs)
    # elimination pays roughly the depth (12) in digits; the kernel route pays nothing
    back, resid = inverse_mellin(mellin(f, CACHE), CACHE)
    assert back.agreement(f) >= 40 - 12 - 8
    assert resid >= 40 - 12 - 8


@settings(max_examples=25, deadline=None)
@given(poly)
def test_phi_side_identity(cs):
    f = xseries(cs)
    h = mellin_phi(f, CACHE)
    one_pi = SeriesOneVar.from_rationals(CTX, [1, 1], "PI", 40, N=60)
    lhs = (one_pi * phi_act(h)).truncate(50)
    assert lhs.agreement(mellin(f, CACHE).truncate(50)) >= 30


@settings(max_examples=25, deadline=None)
@given(poly)
def test_inverse_through_kernel(cs):
    f = xseries(cs)
    back = inverse_mellin_phi(mellin_phi(f, CACHE), CACHE)
    assert back.agreement(f) >= 30


def _order_exp(ring, b):
    # e with Z^b of order p^e
    order = ring.order // gcd(ring.order, b)
    e = 0
    while order > 1:
        order //= CTX.p
        e += 1
    return e


def _jets(h, ring, prec):
    ths = [h]
    for _ in range(3):
        ths.append(theta_op(ths[-1]))
    p = CTX.p

    def jet(b, l):
        x = ring.zeta_power(b, prec) - 1
        e = _order_exp(ring, b)
        vx = None if e == 0 else Fraction(1, (p - 1) * p ** (e - 1))
        return eval_series_at(ths[l], x, vx)
    return jet


@pytest.mark.parametrize("pt", [CharacterPoint(0, 1, 0), CharacterPoint(1, 1, 0),
                                CharacterPoint(0, 2, 1), CharacterPoint(1, 2, 2),
                                CharacterPoint(2, 2, 1)])
def test_character_value_matches_direct_evaluation(pt):
    f = xseries([5, -7, 11, 2, 0, 1])
    cache = MellinBasisCache(CTX, 200, 12, 40)
    h = mellin_phi(f, cache)
    ring = CycloRing(CTX, pt.s)
    val = character_value(_jets(h, ring, 44), pt, CTX)
    direct = eval_at_character(f, pt, exact=True)
    assert (val - direct).valuation() >= 20
