"""One-variable signed decomposition: (F_alpha, F_beta) = Q^{-1}M (F_sharp, F_flat).

Division by det(Q^{-1}M) costs precision roughly linearly in the degree, so
quotients are formed at the largest truncation that still carries the
requested number of digits.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .series1 import SeriesOneVar, norm_profile
from .special_series import character_points, eval_at_character
from .wach import PiSideEvaluator, mat_det


@dataclass
class AdmissiblePair:
    F_alpha: SeriesOneVar
    F_beta: SeriesOneVar
    roots: object
    orders: tuple = ()
    source: object = None           # the SignedPair it was recomposed from, if any

    def __post_init__(self):
        if not self.orders:
            self.orders = tuple(self.roots.valuations())


@dataclass
class SignedPair:
    F_sharp: SeriesOneVar
    F_flat: SeriesOneVar
    certificates: dict = field(default_factory=dict)


def boundedness_check(f, floor_B=0):
    """Verdict: every known coefficient valuation is >= -floor_B."""
    vals = [v for v in f.coeff_valuations() if v is not None]
    minv = min(vals) if vals else Fraction(f.aprec)
    return {"bounded": bool(minv >= -floor_B), "min_valuation": str(minv), "floor": str(floor_B),
            "precision": f.aprec}


def default_floor(pkg, guard=2):
    Q = pkg.wach.Q
    return int(-min(Fraction(0), mat_det(Q).valuation()) // 1) + int(-min(Fraction(0), Q[0][0].valuation()) // 1) + guard


def recompose(sp, pkg):
    P1, P2, P3, P4 = pkg.P
    N = min(P1.N, sp.F_sharp.N, sp.F_flat.N)
    fs, ff = sp.F_sharp.truncate(N), sp.F_flat.truncate(N)
    Fa = P1.truncate(N) * fs + P2.truncate(N) * ff
    Fb = P3.truncate(N) * fs + P4.truncate(N) * ff
    return AdmissiblePair(Fa, Fb, pkg.roots, source=sp)


def _det_inverse(pkg, D):
    cache = pkg.meta.setdefault("_inv_det", {})
    if D not in cache:
        cache[D] = pkg.detQinvM.truncate(D).inverse()
    return cache[D]


def division_degree(pkg, digits, top=None):
    """Largest truncation D at which 1/det(Q^{-1}M) keeps ``digits`` digits."""
    top = pkg.detQinvM.N if top is None else min(top, pkg.detQinvM.N)
    lo, hi = 0, top
    if _det_inverse(pkg, lo).aprec < digits:
        return 0
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if _det_inverse(pkg, mid).aprec >= digits:
            lo = mid
        else:
            hi = mid - 1
    return lo


def decompose_pair(pair, pkg, degree=None, floor_B=None, digits=None):
    """F_sharp = (P4 F_alpha - P2 F_beta)/det, F_flat = (-P3 F_alpha + P1 F_beta)/det."""
    if pair.roots is not pkg.roots and (pair.roots.alpha - pkg.roots.alpha).valuation() < pkg.prec // 2:
        raise ValueError("pair and package have different Hecke roots")
    det0 = pkg.detQinvM.coefficient(0)
    if det0.is_zero():
        raise ArithmeticError("det(Q^{-1}M) has vanishing constant term")
    P1, P2, P3, P4 = pkg.P
    N = min(pair.F_alpha.N, pair.F_beta.N, P1.N)
    if degree is None:
        want = pkg.prec if digits is None else digits
        degree = max(1, division_degree(pkg, want + 8, N))
    D = min(degree, N)
    Fa, Fb = pair.F_alpha.truncate(D), pair.F_beta.truncate(D)
    num_s = P4.truncate(D) * Fa - P2.truncate(D) * Fb
    num_f = P1.truncate(D) * Fb - P3.truncate(D) * Fa
    inv = _det_inverse(pkg, D)
    fs, ff = num_s * inv, num_f * inv
    floor_B = default_floor(pkg) if floor_B is None else floor_B
    cs, cf = boundedness_check(fs, floor_B), boundedness_check(ff, floor_B)
    certs = {"F_sharp": cs, "F_flat": cf, "degree": D}
    if not (cs["bounded"] and cf["bounded"]):
        raise ArithmeticError("inputs violate interpolation hypothesis (unbounded quotient: %s, %s)"
                              % (cs["min_valuation"], cf["min_valuation"]))
    return SignedPair(fs, ff, certs)


def synth_signed_pair(seed, degree, pkg, digits=None):
    """Uniform integral F_sharp, F_flat of the given degree (deterministic in ``seed``)."""
    ctx = pkg.ctx
    N = pkg.P[0].N
    if degree > N:
        raise ValueError("degree exceeds package depth")
    digits = pkg.meta.get("working_digits", pkg.prec) if digits is None else digits
    rng = random.Random(seed)
    mod = ctx.p ** digits

    def draw():
        comps = [[rng.randrange(mod) for _ in range(degree + 1)] + [0] * (N - degree)
                 for _ in range(ctx.degree)]
        return SeriesOneVar(ctx, comps, 0, digits, "GAMMA0")

    return SignedPair(draw(), draw())


def synth_admissible_pair(seed, degree, pkg, digits=None):
    sp = synth_signed_pair(seed, degree, pkg, digits)
    return recompose(sp, pkg), sp


def pair_growth(pair, t_max=4):
    out = []
    for f, target in ((pair.F_alpha, pair.orders[0]), (pair.F_beta, pair.orders[1])):
        prof = norm_profile(f, t_max)
        out.append({"estimated_order": str(prof.slope), "claimed": str(target),
                    "within": bool(prof.slope <= target + Fraction(1, 4))})
    return out


def _poly_at(f, x):
    acc = x.ring.from_scalar(f.coefficient(f.N))
    for i in range(f.N - 1, -1, -1):
        acc = acc * x + f.coefficient(i)
    return acc


def pair_values(pair, pkg, pt, evaluator=None):
    """(F_alpha, F_beta) at a character point.

    Recomposed pairs use the pi-side values of Q^{-1}M and exact polynomial
    values of F_sharp, F_flat; other pairs are evaluated from their X-series
    with the truncation tail counted.
    """
    wd = pkg.wach
    if pair.source is not None:
        ev = evaluator or PiSideEvaluator(pkg)
        Mv = ev.M_at(pt)
        ring = Mv[0][0].ring
        Qi = [[ring.from_scalar(e) for e in row] for row in wd.Q_inv]
        P = [[Qi[i][0] * Mv[0][j] + Qi[i][1] * Mv[1][j] for j in range(2)] for i in range(2)]
        x = pt.abscissa(pkg.ctx, pkg.meta.get("working_digits", pkg.prec) + 4)
        fs = _poly_at(pair.source.F_sharp, x)
        ff = _poly_at(pair.source.F_flat, x)
        return P, (P[0][0] * fs + P[0][1] * ff, P[1][0] * fs + P[1][1] * ff)
    x = pt.abscissa(pkg.ctx, pkg.meta.get("working_digits", pkg.prec) + 4)
    P = [[eval_at_character(f, pt, x=x) for f in row] for row in pkg.QinvM]
    return P, (eval_at_character(pair.F_alpha, pt, x=x), eval_at_character(pair.F_beta, pt, x=x))


def numerator_residuals(pair, pkg, n_list=(2, 3), evaluator=None):
    """Valuations of P4 F_alpha - P2 F_beta and -P3 F_alpha + P1 F_beta at character points."""
    ev = evaluator
    if ev is None and pair.source is not None:
        ev = PiSideEvaluator(pkg)
    out = []
    for n in n_list:
        for pt in character_points(pkg.ctx.p, range(pkg.k - 1), n):
            P, (fa, fb) = pair_values(pair, pkg, pt, ev)
            r1 = P[1][1] * fa - P[0][1] * fb
            r2 = P[0][0] * fb - P[1][0] * fa
            out.append({"j": pt.j, "n": n, "zeta_index": pt.zeta_index,
                        "valuations": [str(r1.valuation()), str(r2.valuation())],
                        "min": min(r1.valuation(), r2.valuation())})
    return out
