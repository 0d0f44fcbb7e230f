"""Two-variable series in (T1, T2) = (gamma_p - 1, gamma_pbar - 1) and the
two-stage signed decomposition.

The L-matrix is indexed (p-root, pbar-root):

    L = A_p(T1) . S . A_pbar(T2)^T,   A = Q^{-1} M of the relevant package,

with S the signed quadruple ((L_ss, L_sf), (L_fs, L_ff)), s = sharp, f = flat.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .decompose import AdmissiblePair, _det_inverse, decompose_pair, default_floor
from .padics import PadicScalar
from .series1 import SeriesOneVar
from .special_series import CharacterPoint, CycloRing


class TwoVarSeries:
    """p^(-s) * sum c[e][i][j] theta^e T1^i T2^j, modulo p^(aprec+s) and (T1^(N1+1), T2^(N2+1))."""

    __slots__ = ("ctx", "c", "s", "aprec")

    def __init__(self, ctx, comps, s, aprec):
        p = ctx.p
        m = aprec + s
        if m <= 0:
            comps = [[[0] * len(r) for r in comp] for comp in comps]
            s = max(0, -aprec)
        else:
            mod = p ** m
            comps = [[[x % mod for x in r] for r in comp] for comp in comps]
        if s > 0:
            j = s
            for comp in comps:
                for r in comp:
                    for x in r:
                        while j and x % p ** j:
                            j -= 1
                    if not j:
                        break
            if j:
                f = p ** j
                comps = [[[x // f for x in r] for r in comp] for comp in comps]
                s -= j
        self.ctx, self.c, self.s, self.aprec = ctx, comps, s, aprec

    # shape
    @property
    def N1(self):
        return len(self.c[0]) - 1

    @property
    def N2(self):
        return len(self.c[0][0]) - 1

    @classmethod
    def zero(cls, ctx, N1, N2, prec=None):
        prec = ctx.prec if prec is None else prec
        return cls(ctx, [[[0] * (N2 + 1) for _ in range(N1 + 1)] for _ in range(ctx.degree)], 0, prec)

    @classmethod
    def from_rows(cls, rows):
        """Rows are series in T2 indexed by the T1-degree."""
        ctx = rows[0].ctx
        s = max(r.s for r in rows)
        aprec = min(r.aprec for r in rows)
        p = ctx.p
        comps = [[[x * p ** (s - r.s) for x in r.c[e]] for r in rows] for e in range(ctx.degree)]
        return cls(ctx, comps, s, aprec)

    @classmethod
    def from_columns(cls, cols):
        return cls.from_rows(cols).transpose()

    @classmethod
    def from_function(cls, ctx, N1, N2, fn, prec=None):
        """Coefficients from fn(i, j) -> rational or PadicScalar."""
        prec = ctx.prec if prec is None else prec
        rows = []
        for i in range(N1 + 1):
            vals = [fn(i, j) for j in range(N2 + 1)]
            vals = [v if isinstance(v, PadicScalar) else ctx(v, prec) for v in vals]
            rows.append(SeriesOneVar.from_scalars(ctx, vals, "T2", prec))
        return cls.from_rows(rows)

    @classmethod
    def outer(cls, f, g):
        """f(T1) g(T2)."""
        rows = [g.retag("T2").scalar_mul(f.coefficient(i)) for i in range(f.N + 1)]
        return cls.from_rows(rows)

    def row(self, i):
        return SeriesOneVar(self.ctx, [comp[i] for comp in self.c], self.s, self.aprec, "T2")

    def column(self, j):
        return SeriesOneVar(self.ctx, [[r[j] for r in comp] for comp in self.c], self.s, self.aprec, "T1")

    def rows(self):
        return [self.row(i) for i in range(self.N1 + 1)]

    def columns(self):
        return [self.column(j) for j in range(self.N2 + 1)]

    def transpose(self):
        comps = [[list(col) for col in zip(*comp)] for comp in self.c]
        return TwoVarSeries(self.ctx, comps, self.s, self.aprec)

    def coefficient(self, i, j):
        return PadicScalar(self.ctx, tuple(comp[i][j] for comp in self.c), self.s, self.aprec)

    def truncate(self, N1, N2):
        comps = [[r[:N2 + 1] for r in comp[:N1 + 1]] for comp in self.c]
        return TwoVarSeries(self.ctx, comps, self.s, self.aprec)

    def with_prec(self, aprec):
        return TwoVarSeries(self.ctx, self.c, self.s, min(aprec, self.aprec))

    def coeff_valuations(self):
        return [r.coeff_valuations() for r in self.rows()]

    def min_valuation(self):
        vals = [v for row in self.coeff_valuations() for v in row if v is not None]
        return min(vals) if vals else None

    def is_zero(self):
        return all(x == 0 for comp in self.c for r in comp for x in r)

    # arithmetic
    def _check(self, other):
        if not isinstance(other, TwoVarSeries):
            raise TypeError("expected TwoVarSeries")
        if other.ctx.key != self.ctx.key:
            raise ValueError("series from different contexts")

    def __add__(self, other):
        self._check(other)
        n1, n2 = min(self.N1, other.N1), min(self.N2, other.N2)
        a, b = self.truncate(n1, n2), other.truncate(n1, n2)
        p = self.ctx.p
        s = max(a.s, b.s)
        fa, fb = p ** (s - a.s), p ** (s - b.s)
        comps = [[[x * fa + y * fb for x, y in zip(ra, rb)] for ra, rb in zip(ca, cb)]
                 for ca, cb in zip(a.c, b.c)]
        return TwoVarSeries(self.ctx, comps, s, min(a.aprec, b.aprec))

    def __neg__(self):
        return TwoVarSeries(self.ctx, [[[-x for x in r] for r in comp] for comp in self.c], self.s, self.aprec)

    def __sub__(self, other):
        return self + (-other)

    def scalar_mul(self, x):
        return TwoVarSeries.from_rows([r.scalar_mul(x) for r in self.rows()])

    def mul_T1(self, f):
        """Product with a series in T1 alone."""
        f = f.retag("T1")
        return TwoVarSeries.from_columns([c * f for c in self.columns()])

    def mul_T2(self, g):
        g = g.retag("T2")
        return TwoVarSeries.from_rows([r * g for r in self.rows()])

    def __mul__(self, other):
        if isinstance(other, (PadicScalar, int, Fraction)):
            return self.scalar_mul(other if isinstance(other, PadicScalar) else self.ctx(other, self.aprec + self.s + 4))
        self._check(other)
        n1 = min(self.N1, other.N1)
        A, B = self.rows(), other.rows()
        out = []
        for i in range(n1 + 1):
            acc = None
            for a in range(i + 1):
                t = A[a] * B[i - a]
                acc = t if acc is None else acc + t
            out.append(acc)
        return TwoVarSeries.from_rows(out)

    def derivative_T1(self):
        rows = self.rows()
        out = [rows[i].scalar_mul(self.ctx(i, self.aprec + self.s + 4)) for i in range(1, len(rows))]
        return TwoVarSeries.from_rows(out) if out else self.truncate(0, self.N2)

    def derivative_T2(self):
        return TwoVarSeries.from_rows([r.derivative() for r in self.rows()])

    def agreement(self, other):
        d = self - other
        if d.is_zero():
            return Fraction(d.aprec)
        return d.min_valuation()

    def evaluate(self, x1, x2, v1=None, v2=None):
        """Value at (x1, x2) in a cyclotomic ring, tail counted when v1, v2 are given."""
        ring = x1.ring
        vals = []
        for r in self.rows():
            acc = ring.from_scalar(r.coefficient(r.N))
            for j in range(r.N - 1, -1, -1):
                acc = acc * x2 + r.coefficient(j)
            vals.append(acc)
        acc = vals[-1]
        for i in range(len(vals) - 2, -1, -1):
            acc = acc * x1 + vals[i]
        if v1 is not None and v2 is not None:
            vmin = self.min_valuation()
            vmin = Fraction(self.aprec) if vmin is None else vmin
            tail = vmin + min((self.N1 + 1) * v1, (self.N2 + 1) * v2)
            acc = acc.with_prec(int(min(tail, acc.aprec) // 1))
        return acc

    def __repr__(self):
        return "TwoVarSeries(N1=%d, N2=%d, s=%d, aprec=%d)" % (self.N1, self.N2, self.s, self.aprec)


def change_variable(f, target):
    """tau_q: gamma_0 -> gamma_q is the identity on coefficients."""
    return f.retag(target)


# specialization ------------------------------------------------------------------

class CycloSeries:
    """A one-variable truncated series with coefficients in a cyclotomic ring."""

    def __init__(self, ring, coeffs, tag):
        self.ring, self.coeffs, self.tag = ring, list(coeffs), tag

    @property
    def N(self):
        return len(self.coeffs) - 1

    def __add__(self, other):
        n = min(self.N, other.N) + 1
        return CycloSeries(self.ring, [a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])], self.tag)

    def __mul__(self, other):
        n = min(self.N, other.N) + 1
        out = []
        for i in range(n):
            acc = self.coeffs[0] * other.coeffs[i]
            for a in range(1, i + 1):
                acc = acc + self.coeffs[a] * other.coeffs[i - a]
            out.append(acc)
        return CycloSeries(self.ring, out, self.tag)

    def evaluate(self, x):
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def agreement(self, other):
        n = min(self.N, other.N) + 1
        return min((a - b).valuation() for a, b in zip(self.coeffs[:n], other.coeffs[:n]))


def partial_specialize(F, which, pt, prec=None):
    """Evaluate T1 (or T2) at u^j zeta - 1; the other variable stays formal."""
    ctx = F.ctx
    prec = F.aprec + F.s + 4 if prec is None else prec
    ring = CycloRing(ctx, pt.s)
    x = pt.abscissa(ctx, prec)
    vx = pt.abscissa_valuation(ctx.p, ctx.u)
    series = F.columns() if which == "T1" else F.rows()
    Nv = F.N1 if which == "T1" else F.N2
    vmin = F.min_valuation()
    vmin = Fraction(F.aprec) if vmin is None else vmin
    tail = prec if vx is None else int((vmin + (Nv + 1) * vx) // 1)
    out = []
    for f in series:
        acc = ring.from_scalar(f.coefficient(f.N))
        for i in range(f.N - 1, -1, -1):
            acc = acc * x + f.coefficient(i)
        out.append(acc.with_prec(min(tail, acc.aprec)))
    return CycloSeries(ring, out, "T2" if which == "T1" else "T1")


# isotypic families -----------------------------------------------------------------

def teichmuller(g, p, prec):
    mod = p ** prec
    x = g % mod
    for _ in range(prec + 1):
        x = pow(x, p, mod)
    return x


def _root_of_unity(ctx, order, prec):
    p = ctx.p
    if (p - 1) % order:
        raise ValueError("character orders must divide p-1 (values in Z_p)")
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in _prime_factors(p - 1)):
            break
    else:
        g = 1
    return teichmuller(pow(g, (p - 1) // order, p), p, prec)


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class IsotypicFamily:
    """A Delta_K-algebra-valued series F = sum_sigma F_sigma [sigma], Delta_K a product of cyclic groups."""

    def __init__(self, orders, components):
        self.orders = tuple(orders)
        self.components = dict(components)
        for g in self.elements():
            if g not in self.components:
                raise ValueError("missing component for group element %r" % (g,))

    def elements(self):
        return list(itertools.product(*[range(n) for n in self.orders])) if self.orders else [()]

    characters = elements

    @property
    def ctx(self):
        return next(iter(self.components.values())).ctx

    @property
    def size(self):
        out = 1
        for n in self.orders:
            out *= n
        return out

    def char_value(self, eta, g, prec):
        """eta(g) as an integer residue mod p^prec (Teichmuller lift)."""
        ctx = self.ctx
        val = 1
        mod = ctx.p ** prec
        for n, e, x in zip(self.orders, eta, g):
            if n > 1:
                val = val * pow(_root_of_unity(ctx, n, prec), (e * x) % n, mod) % mod
        return val

    def _check_eta(self, eta):
        eta = tuple(eta)
        if len(eta) != len(self.orders) or any(not 0 <= e < n for e, n in zip(eta, self.orders)):
            raise ValueError("unknown character %r" % (eta,))
        return eta

    def image(self, eta):
        """F^eta = sum_sigma eta(sigma) F_sigma."""
        eta = self._check_eta(eta)
        acc = None
        for g, F in self.components.items():
            prec = F.aprec + F.s + 4
            w = self.ctx(self.char_value(eta, g, prec), prec)
            t = F.scalar_mul(w)
            acc = t if acc is None else acc + t
        return acc

    def project(self, eta):
        """e_eta F as a family: component at tau is eta(tau)^{-1} F^eta / |Delta|."""
        eta = self._check_eta(eta)
        Fe = self.image(eta)
        prec = Fe.aprec + Fe.s + 4
        inv_n = self.ctx(Fraction(1, self.size), prec)
        comps = {}
        for g in self.elements():
            inv = [(-x) % n for x, n in zip(g, self.orders)]
            w = self.ctx(self.char_value(eta, inv, prec), prec) * inv_n
            comps[g] = Fe.scalar_mul(w)
        return IsotypicFamily(self.orders, comps)

    def __add__(self, other):
        return IsotypicFamily(self.orders, {g: self.components[g] + other.components[g] for g in self.elements()})

    def agreement(self, other):
        return min(self.components[g].agreement(other.components[g]) for g in self.elements())


def isotypic_project(fam, eta):
    return fam.image(eta)


# evaluation points ------------------------------------------------------------------

@dataclass(frozen=True)
class HeckeEvalPoint:
    a: int
    n_p: int
    zeta_p: int
    b: int
    n_pbar: int
    zeta_pbar: int

    @property
    def point_p(self):
        return CharacterPoint(self.a, self.n_p, self.zeta_p)

    @property
    def point_pbar(self):
        return CharacterPoint(self.b, self.n_pbar, self.zeta_pbar)

    @property
    def s(self):
        return max(self.n_p, self.n_pbar) - 1

    def abscissae(self, ctx, prec):
        """(u^a zeta_p - 1, u^b zeta_pbar - 1) in the ring of order p^s."""
        ring = CycloRing(ctx, self.s)
        out = []
        for j, n, z in ((self.a, self.n_p, self.zeta_p), (self.b, self.n_pbar, self.zeta_pbar)):
            e = z * ctx.p ** (self.s - (n - 1)) if n > 1 else 0
            uj = ctx(Fraction(ctx.u) ** j, prec)
            out.append(ring.zeta_power(e, prec) * uj - 1)
        return out

    def valuations(self, p):
        return tuple(Fraction(1) if n <= 1 else Fraction(1, (p - 1) * p ** (n - 2)) for n in (self.n_p, self.n_pbar))

    def to_json(self):
        return {"a": self.a, "n_p": self.n_p, "zeta_p": self.zeta_p,
                "b": self.b, "n_pbar": self.n_pbar, "zeta_pbar": self.zeta_pbar}


def hecke_points(k, l, n_p=(1, 2), n_pbar=(2,), zeta_pbar=(1,)):
    """a <= k, b <= l (Bianchi weights).

    The pbar-level starts at 2: in this parametrisation the relation behind
    the derivative identity holds for zeta_pbar of order p^(n-1), n >= 2.
    """
    return [HeckeEvalPoint(a, m, 1, b, n, z) for a in range(k + 1) for b in range(l + 1)
            for m in n_p for n in n_pbar for z in zeta_pbar]


# signed quadruples and the two stages ------------------------------------------------

@dataclass
class SignedQuadruple:
    L_ss: TwoVarSeries
    L_sf: TwoVarSeries
    L_fs: TwoVarSeries
    L_ff: TwoVarSeries
    certificates: dict = field(default_factory=dict)

    def matrix(self):
        return [[self.L_ss, self.L_sf], [self.L_fs, self.L_ff]]

    def agreement(self, other):
        return min(a.agreement(b) for ra, rb in zip(self.matrix(), other.matrix()) for a, b in zip(ra, rb))


def _check_pair(pkg_p, pkg_pbar):
    if pkg_p.ctx.key != pkg_pbar.ctx.key:
        raise ValueError("both packages must share one coefficient context")


def recompose_quadruple(sq, pkg_p, pkg_pbar):
    """L[i][j] = sum_{s,t} A_p[i][s](T1) S[s][t] A_pbar[j][t](T2)."""
    _check_pair(pkg_p, pkg_pbar)
    S = sq.matrix()
    Ap = [[change_variable(x, "T1") for x in row] for row in pkg_p.QinvM]
    Ab = [[change_variable(x, "T2") for x in row] for row in pkg_pbar.QinvM]
    B = [[S[s][0].mul_T2(Ab[j][0]) + S[s][1].mul_T2(Ab[j][1]) for j in range(2)] for s in range(2)]
    return [[B[0][j].mul_T1(Ap[i][0]) + B[1][j].mul_T1(Ap[i][1]) for j in range(2)] for i in range(2)]


def _decompose_slices(Fa, Fb, pkg, axis, degree=None, floor_B=None):
    """Decompose (Fa, Fb) slice by slice: axis 'T1' divides along T1 for each T2-degree."""
    sa = Fa.columns() if axis == "T1" else Fa.rows()
    sb = Fb.columns() if axis == "T1" else Fb.rows()
    outs, outf, mins = [], [], []
    for x, y in zip(sa, sb):
        pair = AdmissiblePair(x.retag("GAMMA0"), y.retag("GAMMA0"), pkg.roots)
        sp = decompose_pair(pair, pkg, degree=degree, floor_B=floor_B)
        outs.append(sp.F_sharp.retag(axis))
        outf.append(sp.F_flat.retag(axis))
        mins.append(min(Fraction(sp.certificates["F_sharp"]["min_valuation"]),
                        Fraction(sp.certificates["F_flat"]["min_valuation"])))
    build = TwoVarSeries.from_columns if axis == "T1" else TwoVarSeries.from_rows
    cert = {"axis": axis, "min_valuation": str(min(mins)), "degree": outs[0].N}
    return build(outs), build(outf), cert


def decompose_stage1(L_alpha, L_beta, pkg_p, degree=None, floor_B=None):
    """(L_{alpha_p,dag}, L_{beta_p,dag}) -> (L_{sharp,dag}, L_{flat,dag}) dividing in T1."""
    return _decompose_slices(L_alpha, L_beta, pkg_p, "T1", degree, floor_B)


def decompose_stage2(L_alpha, L_beta, pkg_pbar, degree=None, floor_B=None):
    """(L_{dag,alpha_pbar}, L_{dag,beta_pbar}) -> (L_{dag,sharp}, L_{dag,flat}) dividing in T2."""
    return _decompose_slices(L_alpha, L_beta, pkg_pbar, "T2", degree, floor_B)


def _first_stage_floor(pkg, other, floor_B):
    """First-stage quotients still carry the other package's Q^{-1}M denominators."""
    base = default_floor(pkg) if floor_B is None else floor_B
    vals = [v for row in other.QinvM for f in row for v in f.coeff_valuations() if v is not None]
    extra = -min(vals + [Fraction(0)])
    return base + int(-(-extra // 1))


def _stage_estimate(aprec, lv, pkg, D):
    inv = _det_inverse(pkg, D)
    lvP = min(f.truncate(D).lattice_valuation() for f in pkg.P)
    return min(aprec + lvP + inv.lattice_valuation(), inv.aprec + lv + lvP)


def two_stage_degree(L, pkg_p, pkg_pbar, digits, floor1=None):
    """Largest common division degree whose estimated final precision is >= digits.

    The intermediate quotient is assumed to sit at the first-stage floor.
    """
    aprec = min(x.aprec for row in L for x in row)
    lv = min(x.min_valuation() or 0 for row in L for x in row)
    f1 = _first_stage_floor(pkg_p, pkg_pbar, None) if floor1 is None else floor1
    top = min(min(x.N1, x.N2) for row in L for x in row)
    for D in range(top, 0, -1):
        a1 = _stage_estimate(aprec, lv, pkg_p, D)
        a2 = _stage_estimate(a1, -f1, pkg_pbar, D)
        if a2 >= digits:
            return D
    return 1


def decompose_two_stage(L, pkg_p, pkg_pbar, order="T1_first", degree=None, floor_B=None, digits=None):
    """Recover the signed quadruple from the L-matrix (indexed (p-root, pbar-root))."""
    _check_pair(pkg_p, pkg_pbar)
    if degree is None:
        want = min(pkg_p.prec, pkg_pbar.prec) if digits is None else digits
        degree = min(two_stage_degree(L, pkg_p, pkg_pbar, want),
                     two_stage_degree(L, pkg_pbar, pkg_p, want))
    if order == "T1_first":
        f1 = _first_stage_floor(pkg_p, pkg_pbar, floor_B)
        cols = [decompose_stage1(L[0][j], L[1][j], pkg_p, degree, f1) for j in range(2)]
        # cols[j] = (L_{s,j}, L_{f,j})
        rows = [decompose_stage2(cols[0][i], cols[1][i], pkg_pbar, degree, floor_B) for i in range(2)]
        S = [[rows[i][0], rows[i][1]] for i in range(2)]
        certs = {"stage1": [c[2] for c in cols], "stage2": [r[2] for r in rows], "order": order}
    elif order == "T2_first":
        f1 = _first_stage_floor(pkg_pbar, pkg_p, floor_B)
        rows = [decompose_stage2(L[i][0], L[i][1], pkg_pbar, degree, f1) for i in range(2)]
        # rows[i] = (L_{i,s}, L_{i,f})
        cols = [decompose_stage1(rows[0][t], rows[1][t], pkg_p, degree, floor_B) for t in range(2)]
        S = [[cols[t][s] for t in range(2)] for s in range(2)]
        certs = {"stage1": [c[2] for c in cols], "stage2": [r[2] for r in rows], "order": order}
    else:
        raise ValueError("order must be 'T1_first' or 'T2_first'")
    n1 = min(x.N1 for row in S for x in row)
    n2 = min(x.N2 for row in S for x in row)
    S = [[x.truncate(n1, n2) for x in row] for row in S]
    return SignedQuadruple(S[0][0], S[0][1], S[1][0], S[1][1], certs)


def identity_residual(L, sq, pkg_p, pkg_pbar):
    """Agreement of L with A_p . S . A_pbar^T on the common truncation."""
    R = recompose_quadruple(sq, pkg_p, pkg_pbar)
    out = None
    for i in range(2):
        for j in range(2):
            n1, n2 = min(L[i][j].N1, R[i][j].N1), min(L[i][j].N2, R[i][j].N2)
            a = L[i][j].truncate(n1, n2).agreement(R[i][j].truncate(n1, n2))
            out = a if out is None else min(out, a)
    return out


def synth_quadruple(seed, pkg_p, pkg_pbar, degree=(30, 30), digits=None):
    _check_pair(pkg_p, pkg_pbar)
    ctx = pkg_p.ctx
    N1, N2 = pkg_p.QinvM[0][0].N, pkg_pbar.QinvM[0][0].N
    d1, d2 = degree
    if d1 > N1 or d2 > N2:
        raise ValueError("degree exceeds package depth")
    if digits is None:
        digits = min(pkg_p.meta.get("working_digits", pkg_p.prec), pkg_pbar.meta.get("working_digits", pkg_pbar.prec))
    rng = random.Random(seed)
    mod = ctx.p ** digits

    def draw():
        comps = [[[rng.randrange(mod) if (i <= d1 and j <= d2) else 0 for j in range(N2 + 1)]
                  for i in range(N1 + 1)] for _ in range(ctx.degree)]
        return TwoVarSeries(ctx, comps, 0, digits)

    return SignedQuadruple(draw(), draw(), draw(), draw())


def synth_family(seed, orders, pkg_p, pkg_pbar, degree=(30, 30)):
    """A Delta_K-family of quadruples (one per group element) and its L-matrices."""
    elements = list(itertools.product(*[range(n) for n in orders])) if orders else [()]
    quads = {}
    for idx, g in enumerate(elements):
        quads[g] = synth_quadruple(seed * 1009 + idx, pkg_p, pkg_pbar, degree)
    return quads


def quadruple_family_image(quads, orders, eta):
    """Apply eta to each entry of a quadruple family."""
    entries = []
    for pos in range(4):
        comps = {g: q.matrix()[pos // 2][pos % 2] for g, q in quads.items()}
        entries.append(IsotypicFamily(orders, comps).image(eta))
    return SignedQuadruple(*entries)


def lmatrix_family(quads, orders, pkg_p, pkg_pbar):
    """L-matrix entries as isotypic families (recompose each group component)."""
    Ls = {g: recompose_quadruple(q, pkg_p, pkg_pbar) for g, q in quads.items()}
    return [[IsotypicFamily(orders, {g: Ls[g][i][j] for g in Ls}) for j in range(2)] for i in range(2)]


def partial_derivative_consistency(L_aa, L_ab, roots_pbar, points, tol=None, prec=None):
    """alpha_pbar^n d/dT1 L_aa = beta_pbar^n d/dT1 L_ab at each point, n = its pbar level."""
    if (roots_pbar.alpha - roots_pbar.beta).is_zero():
        raise ValueError("alpha_pbar = beta_pbar is excluded")
    ctx = L_aa.ctx
    p = ctx.p
    dA, dB = L_aa.derivative_T1(), L_ab.derivative_T1()
    prec = max(dA.aprec, dB.aprec) + 8 if prec is None else prec
    results = []
    worst = None
    for pt in points:
        x1, x2 = pt.abscissae(ctx, prec)
        v1, v2 = pt.valuations(p)
        va = dA.evaluate(x1, x2, v1, v2)
        vb = dB.evaluate(x1, x2, v1, v2)
        n = pt.n_pbar
        r = va * (roots_pbar.alpha ** n) - vb * (roots_pbar.beta ** n)
        v = r.valuation()
        worst = v if worst is None else min(worst, v)
        results.append({"point": pt.to_json(), "residual_valuation": str(v), "precision": r.aprec})
    ok = worst is None or tol is None or worst >= tol
    return {"pass": bool(ok), "min_residual_valuation": None if worst is None else str(worst),
            "points": results}
