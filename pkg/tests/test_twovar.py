import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import package
from logmatrix.padics import make_context
from logmatrix.series1 import SeriesOneVar
from logmatrix.special_series import CharacterPoint, eval_at_character
from logmatrix.twovar import (HeckeEvalPoint, IsotypicFamily, TwoVarSeries, decompose_two_stage,
                              hecke_points, identity_residual, partial_specialize,
                              recompose_quadruple, synth_quadruple, teichmuller)

CTX = make_context(3, 30)
small = st.lists(st.lists(st.integers(-999, 999), min_size=4, max_size=4), min_size=4, max_size=4)


def tv(rows):
    return TwoVarSeries.from_function(CTX, 3, 3, lambda i, j: rows[i][j], 30)


def one_var(cs, tag):
    return SeriesOneVar.from_rationals(CTX, cs, tag, 30, N=3)


@given(small, small)
def test_product_is_commutative_and_distributes(a, b):
    F, G = tv(a), tv(b)
    assert (F * G).agreement(G * F) >= 30
    assert (F * (G + F)).agreement(F * G + F * F) >= 28


@given(small)
def test_transpose_and_slices(a):
    F = tv(a)
    assert F.transpose().transpose().agreement(F) >= 30
    assert F.transpose().coefficient(1, 2).equals(F.coefficient(2, 1))
    assert TwoVarSeries.from_rows(F.rows()).agreement(F) >= 30
    assert TwoVarSeries.from_columns(F.columns()).agreement(F) >= 30


@given(st.lists(st.integers(-99, 99), min_size=4, max_size=4),
       st.lists(st.integers(-99, 99), min_size=4, max_size=4))
def test_outer_product_and_one_variable_multiplication(f, g):
    Ff, Gg = one_var(f, "T1"), one_var(g, "T2")
    O = TwoVarSeries.outer(Ff, Gg)
    assert O.coefficient(2, 3).equals(CTX(f[2] * g[3]))
    ones = TwoVarSeries.outer(one_var([1], "T1"), one_var([1], "T2"))
    assert ones.mul_T1(Ff).mul_T2(Gg).agreement(O) >= 30


@given(small)
def test_partial_derivatives(a):
    F = tv(a)
    d1 = F.derivative_T1()
    assert d1.coefficient(1, 2).equals(CTX(2 * a[2][2]))
    assert F.derivative_T2().coefficient(2, 1).equals(CTX(2 * a[2][2]))


def test_evaluation_factors_for_outer_products():
    f = one_var([1, 2, 0, 5], "T1")
    g = one_var([3, 0, 1, 1], "T2")
    O = TwoVarSeries.outer(f, g)
    pt = HeckeEvalPoint(1, 2, 1, 0, 2, 2)
    x1, x2 = pt.abscissae(CTX, 30)
    got = O.evaluate(x1, x2)
    a = eval_at_character(f.retag("GAMMA0"), pt.point_p, exact=True)
    b = eval_at_character(g.retag("GAMMA0"), pt.point_pbar, exact=True)
    assert (got - a * b).valuation() >= 28


def test_partial_specialization_then_evaluation():
    F = tv([[1, 2, 3, 4], [5, 6, 7, 8], [0, 1, 0, 1], [2, 0, 2, 0]])
    pt1 = CharacterPoint(0, 2, 1)
    restr = partial_specialize(F, "T1", pt1)
    pt = HeckeEvalPoint(0, 2, 1, 0, 2, 1)
    x1, x2 = pt.abscissae(CTX, 30)
    # F is read as a truncated series, so the specialization carries its tail bound
    d = restr.evaluate(x2) - F.evaluate(x1, x2)
    assert d.valuation() >= min(c.aprec for c in restr.coeffs) >= 2
    # coefficientwise it is the exact column evaluation
    for j, col in enumerate(F.columns()):
        exact = eval_at_character(col.retag("GAMMA0"), pt1, exact=True)
        assert (restr.coeffs[j] - exact).valuation() >= restr.coeffs[j].aprec


def test_context_mismatch():
    other = make_context(3, 30, [Fraction(3, 4), 0, 1])
    with pytest.raises(ValueError):
        TwoVarSeries.zero(CTX, 2, 2) + TwoVarSeries.zero(other, 2, 2)


def test_teichmuller_lifts_are_roots_of_unity():
    for p in (3, 5, 7):
        for g in range(1, p):
            w = teichmuller(g, p, 20)
            assert w % p == g
            assert pow(w, p - 1, p ** 20) == 1


def _family(orders, seed):
    rng = random.Random(seed)
    elements = list(itertools.product(*[range(n) for n in orders]))
    comps = {g: tv([[rng.randrange(-99, 99) for _ in range(4)] for _ in range(4)]) for g in elements}
    return IsotypicFamily(orders, comps)


@pytest.mark.parametrize("orders", [(2,), (1,), (2, 1)])
def test_isotypic_projectors(orders):
    fam = _family(orders, 3)
    chars = fam.characters()
    total = None
    for eta in chars:
        P = fam.project(eta)
        assert P.project(eta).agreement(P) >= 25
        for other in chars:
            if other != eta:
                Q = P.project(other)
                assert all(Q.components[g].agreement(TwoVarSeries.zero(CTX, 3, 3)) >= 25
                           for g in fam.elements())
        total = P if total is None else total + P
    assert total.agreement(fam) >= 25


def test_isotypic_rejects_bad_input():
    with pytest.raises(ValueError, match="missing"):
        IsotypicFamily((2,), {(0,): tv([[0] * 4] * 4)})
    fam = _family((2,), 1)
    with pytest.raises(ValueError, match="unknown character"):
        fam.image((5,))
    with pytest.raises(ValueError, match="divide"):
        _family((4,), 1).image((1,))


def test_hecke_points_shape():
    pts = hecke_points(1, 2)
    assert len(pts) == 2 * 3 * 2
    assert all(pt.n_pbar >= 2 for pt in pts)
    assert pts[0].to_json() == {"a": 0, "n_p": 1, "zeta_p": 1, "b": 0, "n_pbar": 2, "zeta_pbar": 1}
    assert HeckeEvalPoint(0, 3, 1, 0, 2, 1).valuations(3) == (Fraction(1, 6), Fraction(1, 2))


def test_small_round_trip_and_identity():
    pp = package(3, 2, 3, 1, 30, None, 48)
    pb = package(3, 2, -3, 1, 30, None, 48, share_with=(3, 2, 3, 1, 30, None, 48))
    sq = synth_quadruple(21, pp, pb, degree=(8, 8))
    L = recompose_quadruple(sq, pp, pb)
    r = decompose_two_stage(L, pp, pb)
    assert identity_residual(L, r, pp, pb) >= 15
    with pytest.raises(ValueError, match="order"):
        decompose_two_stage(L, pp, pb, order="diagonal")
    with pytest.raises(ValueError, match="share"):
        recompose_quadruple(sq, pp, package(5, 2, 5, 1))
