"""Acceptance criteria 1-10, at their stated tolerances and time budgets.

Each test records a verdict; the summary hook prints one PASS/FAIL line per
criterion at the end of the run.
"""

import time
from fractions import Fraction

import pytest

from conftest import GRID, package, record
from logmatrix import io_cli
from logmatrix.decompose import decompose_pair, numerator_residuals, synth_admissible_pair
from logmatrix.padics import hecke_roots
from logmatrix.twovar import (SignedQuadruple, decompose_two_stage, hecke_points,
                              lmatrix_family, partial_derivative_consistency,
                              quadruple_family_image, recompose_quadruple, synth_family,
                              synth_quadruple)
from logmatrix.wach import (G_residual, PiSideEvaluator, blz_z, build_wach_data, comparison_G,
                            corrupt_package, det_G_check, verify_log_matrix)

PK = [g[:2] for g in GRID]


@pytest.mark.parametrize("p,k,a,v", GRID, ids=["p%dk%d" % g for g in PK])
def test_c01_blz_integrality(p, k, a, v):
    ctx = hecke_roots(p, k, a, v, 40).ctx
    t0 = time.time()
    z = blz_z(p, k, a, ctx, prec=40)
    dt = time.time() - t0
    vals = [x for x in z.coeff_valuations() if x is not None]
    ok = all(x >= 0 for x in vals) and z.aprec >= 40 and dt < 1
    record(1, ok, "z integral at prec 40 on the 6-point grid, < 1 s each")
    assert ok, (vals, dt)


@pytest.mark.parametrize("p,k,a,v", GRID, ids=["p%dk%d" % g for g in PK])
def test_c02_comparison_residual(p, k, a, v):
    t0 = time.time()
    # family constants carry extra digits, as in build_package
    wd = build_wach_data(p, k, a, v, N=200, prec=60)
    G, phiG, info = comparison_G(wd, 200, 40)
    res = G_residual(wd, G)
    dG = det_G_check(G, k)
    dt = time.time() - t0
    ok = res["zero"] and res["precision"] >= 40 and info["claimed_digits"] >= 40 and dG >= 40 and dt < 30
    record(2, ok, "G - A phi(G) P^-1 = 0 mod (pi^200, p^40); det G = (t/pi)^(k-1); < 30 s")
    assert ok, (res, dG, dt)


@pytest.mark.parametrize("p,k,a,v", GRID, ids=["p%dk%d" % g for g in PK])
def test_c03_log_matrix_lemmas(p, k, a, v):
    pkg = package(p, k, a, v)
    t0 = time.time()
    rep = verify_log_matrix(pkg, n_list=(2, 3), t_max=4)
    dt = time.time() - t0 + pkg.meta["build_seconds"]
    worst = min(Fraction(x["residual_valuation"]) for x in rep["divisibility"]["points"])
    ok = rep["pass"] and worst >= pkg.prec - 5 and dt < 60
    record(3, ok, "divisibility >= prec-5, det ratio unit, growth within 1/4; < 60 s")
    assert ok, (rep["divisibility"].get("note"), rep["det_ratio"], rep["growth"]["rows"], dt)


@pytest.mark.parametrize("p,k,a,v", GRID, ids=["p%dk%d" % g for g in PK])
def test_c04_one_variable_round_trip(p, k, a, v):
    pkg = package(p, k, a, v)
    need = pkg.prec - (k - 1) - 10
    t0 = time.time()
    worst = None
    for seed in range(50):
        pair, sp = synth_admissible_pair(seed, 30, pkg)
        out = decompose_pair(pair, pkg)
        agree = min(out.F_sharp.agreement(sp.F_sharp, 30), out.F_flat.agreement(sp.F_flat, 30))
        worst = agree if worst is None else min(worst, agree)
    dt = time.time() - t0
    ok = worst >= need and dt < 10
    record(4, ok, "50 seeds, degree 30, >= prec-(k-1)-10 digits; < 10 s per point")
    assert ok, (worst, need, dt)


@pytest.mark.parametrize("p,k,a,v", GRID, ids=["p%dk%d" % g for g in PK])
def test_c05_numerator_vanishing(p, k, a, v):
    pkg = package(p, k, a, v)
    ev = PiSideEvaluator(pkg)
    worst = None
    for seed in range(3):
        pair, _ = synth_admissible_pair(seed, 30, pkg)
        rows = numerator_residuals(pair, pkg, (2, 3), ev)
        w = min(r["min"] for r in rows)
        worst = w if worst is None else min(worst, w)
    ok = worst >= pkg.prec - 8
    record(5, ok, "P4 Fa - P2 Fb and P1 Fb - P3 Fa vanish at j <= k-2, n in {2,3}, >= prec-8")
    assert ok, worst


# two variables: engine weight = Bianchi weight + 2, shared context Q_3(sqrt(-3))
TWO_VAR = {
    "k0_l0": ((3, 2, 3, 1, 30, None, 48), (3, 2, -3, 1, 30, None, 48)),
    "k1_l1": ((3, 3, 3, 1, 30, None, 48), (3, 3, -3, 1, 30, None, 48)),
}


def _pair(spec_p, spec_pbar):
    pp = package(*spec_p)
    pb = package(*spec_pbar, share_with=spec_p)
    return pp, pb


@pytest.mark.parametrize("name", sorted(TWO_VAR))
@pytest.mark.parametrize("orders", [(), (2,)], ids=["trivial", "order2"])
def test_c06_two_variable_round_trip(name, orders):
    t0 = time.time()
    pp, pb = _pair(*TWO_VAR[name])
    quads = synth_family(11, orders, pp, pb, degree=(30, 30))
    Lf = lmatrix_family(quads, orders, pp, pb)
    need = min(pp.prec, pb.prec) - 15
    worst = None
    for eta in Lf[0][0].characters():
        L = [[Lf[i][j].image(eta) for j in range(2)] for i in range(2)]
        r1 = decompose_two_stage(L, pp, pb, order="T1_first")
        r2 = decompose_two_stage(L, pp, pb, order="T2_first")
        exp = quadruple_family_image(quads, orders, eta)
        n1, n2 = r1.L_ss.N1, r1.L_ss.N2
        ex = SignedQuadruple(*[x.truncate(n1, n2) for row in exp.matrix() for x in row])
        a = min(r1.agreement(ex), r2.agreement(ex), r1.agreement(r2))
        worst = a if worst is None else min(worst, a)
    dt = time.time() - t0
    ok = worst >= need and dt < 120
    record(6, ok, "trivial and order-2 Delta_K, Bianchi (3,0),(3,1), N1=N2=48, >= prec-15, swap agrees")
    assert ok, (worst, need, dt)


def test_c07_non_parallel_weights():
    # (k, l) = (0, 1): engine weights 2 and 3, unit factors u_p = 1, v_p = 10
    spec_p, spec_pbar = (3, 2, 3, 1, 30, None, 48), (3, 3, 3, 10, 30, None, 48)
    pp, pb = _pair(spec_p, spec_pbar)
    sq = synth_quadruple(5, pp, pb)
    L = recompose_quadruple(sq, pp, pb)
    r1 = decompose_two_stage(L, pp, pb, order="T1_first")
    r2 = decompose_two_stage(L, pp, pb, order="T2_first")
    n1, n2 = r1.L_ss.N1, r1.L_ss.N2
    ex = SignedQuadruple(*[x.truncate(n1, n2) for row in sq.matrix() for x in row])
    worst = min(r1.agreement(ex), r2.agreement(ex), r1.agreement(r2))
    ok = worst >= 15
    record(7, ok, "(k,l)=(0,1), u_p=1 != v_p=10, same tolerance as criterion 6")
    assert ok, worst


def test_c08_partial_derivative_consistency():
    # prec 20: a degree-48 truncation only resolves about 49/(p-1) digits at these points
    spec_p, spec_pbar = (3, 3, 3, 1, 20, None, 48), (3, 3, -3, 1, 20, None, 48)
    pp, pb = _pair(spec_p, spec_pbar)
    worst = None
    for seed in (1, 2):
        L = recompose_quadruple(synth_quadruple(seed, pp, pb), pp, pb)
        pts = hecke_points(1, 1, zeta_pbar=(1, 2))
        res = partial_derivative_consistency(L[0][0], L[0][1], pb.roots, pts)
        w = Fraction(res["min_residual_valuation"])
        worst = w if worst is None else min(worst, w)
    ok = worst >= pp.prec - 10
    record(8, ok, "alpha^n dL_aa = beta^n dL_ab at Hecke points, >= prec-10 (prec 20)")
    assert ok, worst


def _cli_run(tmp, tag):
    out = {}
    pkg = str(tmp / ("pkg_%s.json" % tag))
    steps = [
        ("build", ["build-matrix", "--p", "3", "--k", "2", "--ap", "3", "--prec", "40", "--npi", "200",
                   "--depth", "64", "-o", pkg]),
        ("synth", ["synth", pkg, "--seed", "9", "--degree", "30", "-o", str(tmp / ("pair_%s.json" % tag))]),
        ("dec", ["decompose1", pkg, str(tmp / ("pair_%s.json" % tag)), "-o", str(tmp / ("dec_%s.json" % tag))]),
        ("verify", ["verify-matrix", pkg, "--n-list", "2", "-o", str(tmp / ("ver_%s.json" % tag))]),
    ]
    for name, argv in steps:
        assert io_cli.main(argv) == 0, name
        out[name] = open(argv[argv.index("-o") + 1], "rb").read()
    return out


def test_c09_cli_determinism(tmp_path):
    first = _cli_run(tmp_path, "a")
    second = _cli_run(tmp_path, "b")
    same = {k: first[k] == second[k] for k in first}
    ok = all(same.values())
    record(9, ok, "byte-identical build/synth/decompose/verify outputs across two runs")
    assert ok, same


CORRUPTIONS = [(t, e, d) for t in ("M", "QinvM", "H") for e in ((0, 0), (0, 1), (1, 0), (1, 1))
               for d in (1, 7)]


@pytest.mark.parametrize("target,entry,degree", CORRUPTIONS,
                         ids=["%s-%d%d-deg%d" % (t, e[0], e[1], d) for t, e, d in CORRUPTIONS])
def test_c10_fault_detection(pkg32, target, entry, degree):
    bad = corrupt_package(pkg32, entry=entry, degree=degree, delta=1, target=target)
    rep = verify_log_matrix(bad, n_list=(2, 3))
    ok = not rep["pass"]
    record(10, ok, "every single-coefficient corruption of M, Q^-1 M or H fails verification")
    assert ok
