from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import package
from logmatrix.decompose import (AdmissiblePair, SignedPair, _det_inverse, boundedness_check,
                                 decompose_pair, default_floor, division_degree, pair_growth,
                                 pair_values, recompose, synth_admissible_pair, synth_signed_pair)
from logmatrix.series1 import SeriesOneVar
from logmatrix.special_series import character_points


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 40))
def test_round_trip_any_seed_and_degree(pkg32, seed, degree):
    pair, sp = synth_admissible_pair(seed, degree, pkg32)
    out = decompose_pair(pair, pkg32)
    upto = min(degree, out.F_sharp.N)
    assert out.F_sharp.agreement(sp.F_sharp, upto) >= pkg32.prec - 11
    assert out.F_flat.agreement(sp.F_flat, upto) >= pkg32.prec - 11
    assert out.certificates["F_sharp"]["bounded"] and out.certificates["F_flat"]["bounded"]


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_decompose_then_recompose(pkg33, seed):
    pair, _ = synth_admissible_pair(seed, 20, pkg33)
    sp = decompose_pair(pair, pkg33)
    again = recompose(sp, pkg33)
    D = sp.F_sharp.N
    assert again.F_alpha.agreement(pair.F_alpha.truncate(D)) >= pkg33.prec - 12
    assert again.F_beta.agreement(pair.F_beta.truncate(D)) >= pkg33.prec - 12


def test_synth_is_deterministic(pkg32):
    a, b = synth_signed_pair(4, 10, pkg32), synth_signed_pair(4, 10, pkg32)
    assert a.F_sharp.equals(b.F_sharp) and a.F_flat.equals(b.F_flat)
    c = synth_signed_pair(5, 10, pkg32)
    assert not a.F_sharp.equals(c.F_sharp)
    with pytest.raises(ValueError):
        synth_signed_pair(0, 10 ** 4, pkg32)


def test_division_degree_is_maximal(pkg32):
    D = division_degree(pkg32, 48)
    assert _det_inverse(pkg32, D).aprec >= 48
    if D < pkg32.detQinvM.N:
        assert _det_inverse(pkg32, D + 1).aprec < 48
    assert division_degree(pkg32, 30) >= D


def test_unbounded_input_is_rejected(pkg32):
    ctx = pkg32.ctx
    big = SeriesOneVar.from_rationals(ctx, [Fraction(1, 3 ** 25), 1], "GAMMA0", 40, N=64)
    one = SeriesOneVar.constant(ctx, 1, 64, "GAMMA0")
    with pytest.raises(ArithmeticError, match="interpolation hypothesis"):
        decompose_pair(AdmissiblePair(big, one, pkg32.roots), pkg32)


def test_roots_must_match(pkg32, pkg33):
    pair, _ = synth_admissible_pair(0, 5, pkg33)
    with pytest.raises(ValueError):
        decompose_pair(pair, pkg32)


def test_boundedness_verdict():
    pkg = package(3, 2, 3, 1)
    f = SeriesOneVar.from_rationals(pkg.ctx, [Fraction(1, 9), 1], "GAMMA0", 30)
    assert not boundedness_check(f, 1)["bounded"]
    assert boundedness_check(f, 2)["bounded"]
    assert default_floor(pkg) >= 2


def test_recomposed_pairs_have_claimed_growth(pkg32):
    pair, _ = synth_admissible_pair(1, 30, pkg32)
    assert pair.orders == (Fraction(1, 2), Fraction(1, 2))
    assert all(row["within"] for row in pair_growth(pair))


def test_pair_values_two_routes(pkg33):
    # route B (pi-side values of Q^-1 M times exact polynomials) against
    # direct evaluation of the recomposed X-series with its honest tail
    pair, _ = synth_admissible_pair(2, 10, pkg33)
    bare = AdmissiblePair(pair.F_alpha, pair.F_beta, pair.roots)
    for pt in character_points(3, [0, 1], 2):
        _, (fa, fb) = pair_values(pair, pkg33, pt)
        _, (ga, gb) = pair_values(bare, pkg33, pt)
        assert (fa - ga).valuation() >= min(ga.aprec, 25)
        assert (fb - gb).valuation() >= min(gb.aprec, 25)


def test_signed_pair_of_zero(pkg32):
    z = SeriesOneVar.zero(pkg32.ctx, 64, "GAMMA0")
    out = decompose_pair(recompose(SignedPair(z, z), pkg32), pkg32)
    assert out.F_sharp.is_zero() and out.F_flat.is_zero()
