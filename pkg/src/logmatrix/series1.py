"""Truncated one-variable power series over a PadicContext.

A series is ``p**(-s) * sum_n (A_n + B_n*theta) X^n + O(X^(N+1))`` with a single
absolute precision for all coefficients.  Components are kept as plain integer
lists reduced modulo ``p**(aprec + s)``; products use Kronecker substitution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .padics import PadicScalar, lattice_val, residue, vp_int

TAGS = ("PI", "GAMMA0", "T1", "T2")


# Kronecker substitution -----------------------------------------------------

def _pack(a, nb):
    return int.from_bytes(b"".join(x.to_bytes(nb, "little") for x in a), "little")


def _unpack(x, nb, n):
    b = x.to_bytes(max((x.bit_length() + 7) // 8, nb * n), "little")
    return [int.from_bytes(b[i * nb:(i + 1) * nb], "little") for i in range(n)]


def pmul(a, b, n, mod):
    """First n coefficients of a*b modulo mod."""
    la, lb = min(len(a), n), min(len(b), n)
    a = [x % mod for x in a[:la]]
    b = [x % mod for x in b[:lb]]
    if la == 0 or lb == 0:
        return [0] * n
    if la < 8 or lb < 8:
        out = [0] * n
        for i in range(la):
            ai = a[i]
            if ai:
                for j in range(min(lb, n - i)):
                    out[i + j] += ai * b[j]
        return [c % mod for c in out]
    bits = 2 * mod.bit_length() + min(la, lb).bit_length() + 1
    nb = (bits + 7) // 8
    x = _pack(a[:la], nb) * _pack(b[:lb], nb)
    out = _unpack(x, nb, min(n, la + lb - 1))
    out = [c % mod for c in out]
    return out + [0] * (n - len(out))


def _min_lv(comps, p, cap):
    vals = []
    for comp in comps:
        vals.append(lattice_val(comp, p, cap))
    return min(vals)


class SeriesOneVar:
    """Truncated power series; immutable by convention."""

    __slots__ = ("ctx", "c", "s", "aprec", "tag")

    def __init__(self, ctx, comps, s, aprec, tag="PI"):
        if tag not in TAGS:
            raise ValueError("unknown variable tag %r" % tag)
        p = ctx.p
        m = aprec + s
        n = len(comps[0])
        if m <= 0:
            comps = [[0] * n for _ in range(ctx.degree)]
            s = max(0, -aprec)
        else:
            mod = p ** m
            comps = [[x % mod for x in comp] for comp in comps]
        self.ctx, self.c, self.s, self.aprec, self.tag = ctx, comps, s, aprec, tag
        self._normalize()

    def _normalize(self):
        if self.s < 0:
            f = self.ctx.p ** (-self.s)
            self.c = [[x * f for x in comp] for comp in self.c]
            self.s = 0
            return
        if self.s == 0:
            return
        p = self.ctx.p
        j = min(self.s, _min_lv(self.c, p, self.s))
        if j:
            f = p ** j
            self.c = [[x // f for x in comp] for comp in self.c]
            self.s -= j

    # constructors
    @classmethod
    def from_scalars(cls, ctx, coeffs, tag="PI", prec=None):
        coeffs = list(coeffs)
        if not coeffs:
            raise ValueError("need at least one coefficient")
        s = max(x.s for x in coeffs)
        aprec = min(x.aprec for x in coeffs)
        if prec is not None:
            aprec = min(aprec, prec)
        p = ctx.p
        comps = [[x.c[i] * p ** (s - x.s) for x in coeffs] for i in range(ctx.degree)]
        return cls(ctx, comps, s, aprec, tag)

    @classmethod
    def from_rationals(cls, ctx, coeffs, tag="PI", prec=None, N=None):
        prec = ctx.prec if prec is None else prec
        coeffs = [Fraction(x) for x in coeffs]
        if N is not None:
            coeffs = (coeffs + [Fraction(0)] * (N + 1))[:N + 1]
        p = ctx.p
        s = 0
        for x in coeffs:
            if x:
                s = max(s, -(vp_int(x.numerator, p) - vp_int(x.denominator, p)))
        m = prec + s
        scale = Fraction(p) ** s
        first = [residue(x * scale, p, m) if m > 0 else 0 for x in coeffs]
        comps = [first] + [[0] * len(first) for _ in range(ctx.degree - 1)]
        return cls(ctx, comps, s, prec, tag)

    @classmethod
    def zero(cls, ctx, N, tag="PI", prec=None):
        prec = ctx.prec if prec is None else prec
        return cls(ctx, [[0] * (N + 1) for _ in range(ctx.degree)], 0, prec, tag)

    @classmethod
    def constant(cls, ctx, x, N, tag="PI", prec=None):
        if not isinstance(x, PadicScalar):
            x = ctx(x, prec)
        out = [x] + [ctx.zero(x.aprec)] * N
        return cls.from_scalars(ctx, out, tag, prec)

    @classmethod
    def variable(cls, ctx, N, tag="PI", prec=None):
        return cls.from_rationals(ctx, [0, 1], tag, prec, N)

    # basic data
    @property
    def N(self):
        return len(self.c[0]) - 1

    @property
    def p(self):
        return self.ctx.p

    @property
    def modulus(self):
        return self.ctx.p ** (self.aprec + self.s)

    def coefficient(self, i):
        return PadicScalar(self.ctx, tuple(comp[i] for comp in self.c), self.s, self.aprec)

    def coefficients(self):
        return [self.coefficient(i) for i in range(self.N + 1)]

    __getitem__ = coefficient

    def lattice_valuation(self):
        cap = self.aprec + self.s
        return _min_lv(self.c, self.ctx.p, cap) - self.s

    def is_zero(self):
        return all(x == 0 for comp in self.c for x in comp)

    def coeff_valuations(self):
        """True valuations per coefficient; None where indistinguishable from 0."""
        out = []
        for i in range(self.N + 1):
            x = self.coefficient(i)
            out.append(None if x.is_zero() else x.valuation())
        return out

    def _like(self, comps, s, aprec, tag=None):
        return SeriesOneVar(self.ctx, comps, s, aprec, self.tag if tag is None else tag)

    def with_prec(self, aprec):
        return self._like(self.c, self.s, min(aprec, self.aprec))

    def lift(self, aprec):
        """Reinterpret the stored digits at precision ``aprec`` (exact inputs)."""
        return self._like(self.c, self.s, aprec)

    def retag(self, tag):
        return self._like(self.c, self.s, self.aprec, tag)

    def truncate(self, d):
        if d > self.N:
            raise ValueError("truncation degree exceeds N")
        return self._like([comp[:d + 1] for comp in self.c], self.s, self.aprec)

    def extend(self, N):
        """Pad with zero coefficients up to degree N (only for exact polynomials)."""
        pad = N - self.N
        if pad < 0:
            return self.truncate(N)
        return self._like([comp + [0] * pad for comp in self.c], self.s, self.aprec)

    def shift(self, j):
        """Multiply by X^j, dropping terms beyond N."""
        n = self.N + 1
        return self._like([([0] * j + comp)[:n] for comp in self.c], self.s, self.aprec)

    def _check(self, other):
        if not isinstance(other, SeriesOneVar):
            raise TypeError("expected SeriesOneVar")
        if other.tag != self.tag:
            raise ValueError("variable tag mismatch: %s vs %s" % (self.tag, other.tag))
        if other.ctx.key != self.ctx.key:
            raise ValueError("series from different contexts")

    # arithmetic
    def __add__(self, other):
        if isinstance(other, (int, Fraction, PadicScalar)):
            return self + SeriesOneVar.constant(self.ctx, other, self.N, self.tag, self.aprec + self.s + 4)
        self._check(other)
        p = self.ctx.p
        n = min(self.N, other.N) + 1
        s = max(self.s, other.s)
        fa, fb = p ** (s - self.s), p ** (s - other.s)
        comps = [[x * fa + y * fb for x, y in zip(ca[:n], cb[:n])] for ca, cb in zip(self.c, other.c)]
        return self._like(comps, s, min(self.aprec, other.aprec))

    __radd__ = __add__

    def __neg__(self):
        return self._like([[-x for x in comp] for comp in self.c], self.s, self.aprec)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scalar_mul(self, x):
        if not isinstance(x, PadicScalar):
            x = self.ctx(x, self.aprec + self.s + 4)
        s = self.s + x.s
        aprec = min(self.aprec + x.lattice_valuation(), x.aprec + self.lattice_valuation())
        m = aprec + s
        if m <= 0:
            return SeriesOneVar.zero(self.ctx, self.N, self.tag, aprec)
        if self.ctx.degree == 1:
            a = x.c[0]
            comps = [[y * a for y in self.c[0]]]
        else:
            c0, c1 = self.ctx.consts(m)
            a0, a1 = x.c
            A, B = self.c
            comps = [[y0 * a0 - c0 * a1 * y1 for y0, y1 in zip(A, B)],
                     [y0 * a1 + y1 * a0 - c1 * a1 * y1 for y0, y1 in zip(A, B)]]
        return self._like(comps, s, aprec)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, PadicScalar)):
            return self.scalar_mul(other)
        self._check(other)
        n = min(self.N, other.N) + 1
        s = self.s + other.s
        aprec = min(self.aprec + other.lattice_valuation(), other.aprec + self.lattice_valuation())
        m = aprec + s
        if m <= 0:
            return SeriesOneVar.zero(self.ctx, n - 1, self.tag, aprec)
        comps = _poly_mul_e(self.ctx, self.c, other.c, n, m)
        return self._like(comps, s, aprec)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        r = SeriesOneVar.constant(self.ctx, 1, self.N, self.tag, self.aprec + self.s)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def inverse(self):
        return series_inverse(self)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, PadicScalar)):
            if not isinstance(other, PadicScalar):
                other = self.ctx(other, self.aprec + self.s + 4)
            return self.scalar_mul(other.inverse())
        return self * series_inverse(other)

    def derivative(self):
        """d/dX, truncated at N-1."""
        n = self.N
        if n == 0:
            return self._like([[0] for _ in self.c], 0, self.aprec)
        comps = [[comp[i] * i for i in range(1, n + 1)] for comp in self.c]
        return self._like(comps, self.s, self.aprec)

    def div_by_x(self):
        """Exact division by X; the constant term must vanish."""
        if any(comp[0] for comp in self.c):
            raise ValueError("constant term is not zero")
        return self._like([comp[1:] for comp in self.c], self.s, self.aprec)

    def evaluate(self, x):
        """Horner evaluation at a scalar of positive valuation (no tail bound)."""
        acc = self.coefficient(self.N)
        for i in range(self.N - 1, -1, -1):
            acc = acc * x + self.coefficient(i)
        return acc

    # comparisons
    def agreement(self, other, upto=None):
        """Number of p-adic digits to which the two series agree (flat)."""
        d = self - other
        if upto is not None:
            d = d.truncate(upto)
        if d.is_zero():
            return Fraction(d.aprec)
        return min(v for v in d.coeff_valuations() if v is not None)

    def equals(self, other, digits=None):
        d = self - other
        if digits is None:
            return d.is_zero()
        return d.is_zero() or d.lattice_valuation() >= digits

    def __eq__(self, other):
        if isinstance(other, SeriesOneVar):
            try:
                return (self - other).is_zero()
            except ValueError:
                return False
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        terms = []
        for i in range(min(self.N, 6) + 1):
            x = self.coefficient(i)
            if not x.is_zero():
                terms.append("(%s)*%s^%d" % (repr(x).split(" + O(")[0], self.tag, i))
        return "SeriesOneVar[%s](%s + ..., N=%d, O(%d^%d))" % (
            self.tag, " + ".join(terms) or "0", self.N, self.ctx.p, self.aprec)


def _poly_mul_e(ctx, A, B, n, m):
    mod = ctx.p ** m
    if ctx.degree == 1:
        return [pmul(A[0], B[0], n, mod)]
    a0, a1 = A
    b0, b1 = B
    c0, c1 = ctx.consts(m)
    p00 = pmul(a0, b0, n, mod)
    p11 = pmul(a1, b1, n, mod)
    sa = [(x + y) % mod for x, y in zip(a0, a1)]
    sb = [(x + y) % mod for x, y in zip(b0, b1)]
    mix = pmul(sa, sb, n, mod)
    out0 = [x - c0 * z for x, z in zip(p00, p11)]
    out1 = [w - x - z - c1 * z for w, x, z in zip(mix, p00, p11)]
    return [out0, out1]


def series_inverse(f):
    """Formal inverse of a series with nonzero constant term.

    The digits of f are lifted to integers and inverted exactly enough; the
    declared precision is aprec(f) + 2*lv(1/f), the first-order error bound.
    """
    ctx, p = f.ctx, f.ctx.p
    n = f.N + 1
    f0 = f.coefficient(0)
    if f0.is_zero():
        raise ZeroDivisionError("constant term indistinguishable from 0")
    F = f.c
    if ctx.degree == 1:
        w = vp_int(F[0][0], p)
        conj0 = (1, 0)
        unit = F[0][0] // p ** w
    else:
        a0, a1 = F[0][0], F[1][0]
        c0, c1 = ctx.c0, ctx.c1
        nr = Fraction(a0 * a0) - c1 * a0 * a1 + c0 * a1 * a1
        w = vp_int(nr.numerator, p)
        unit = nr / Fraction(p) ** w
        conj0 = None
    m_work = f.aprec + f.s + (n + 1) * w + 4
    mod = p ** m_work
    uinv = pow(unit, -1, mod) if ctx.degree == 1 else residue(1 / unit, p, m_work)
    if ctx.degree == 2:
        cc0, cc1 = ctx.consts(m_work)
        conj0 = ((a0 - cc1 * a1) % mod, (-a1) % mod)
    pw = [1]
    for _ in range(n):
        pw.append(pw[-1] * p ** w)
    if ctx.degree == 1:
        Fl = F[0]
        H = [uinv % mod]
        for k in range(1, n):
            acc = 0
            for i in range(1, k + 1):
                fi = Fl[i]
                if fi:
                    acc += fi * pw[i - 1] * H[k - i]
            H.append((-acc * uinv) % mod)
        comps = [[h * pw[n - 1 - k] % mod for k, h in enumerate(H)]]
    else:
        cc0, cc1 = ctx.consts(m_work)
        g0, g1 = conj0
        k0 = (g0 * uinv) % mod
        k1 = (g1 * uinv) % mod
        FA, FB = F
        HA, HB = [k0], [k1]
        for k in range(1, n):
            sa = sb = 0
            for i in range(1, k + 1):
                xa, xb = FA[i], FB[i]
                if xa or xb:
                    ya, yb = HA[k - i], HB[k - i]
                    t = pw[i - 1]
                    prod_b = xb * yb
                    sa += (xa * ya - cc0 * prod_b) * t
                    sb += (xa * yb + xb * ya - cc1 * prod_b) * t
            sa %= mod
            sb %= mod
            prod_b = k1 * sb
            HA.append((-(k0 * sa - cc0 * prod_b)) % mod)
            HB.append((-(k0 * sb + k1 * sa - cc1 * prod_b)) % mod)
        comps = [[h * pw[n - 1 - k] % mod for k, h in enumerate(HA)],
                 [h * pw[n - 1 - k] % mod for k, h in enumerate(HB)]]
    # value = p^{f.s} * p^{-n w} * comps
    s = n * w - f.s
    raw = SeriesOneVar(ctx, comps, s, m_work - s, f.tag)
    aprec = f.aprec + 2 * raw.lattice_valuation()
    return raw.with_prec(aprec)


# composition and the phi / Gamma actions ------------------------------------

def substitute(f, h):
    """f(h) truncated at min(N_f, N_h); requires h(0) = 0."""
    if any(comp[0] for comp in h.c) and not h.coefficient(0).is_zero():
        raise ValueError("substitute requires h(0) = 0")
    if f.ctx.key != h.ctx.key:
        raise ValueError("series from different contexts")
    n = min(f.N, h.N)
    h = h.truncate(n).retag(f.tag)
    acc = SeriesOneVar.constant(f.ctx, f.coefficient(n), n, f.tag, f.aprec + f.s)
    acc = acc.with_prec(f.aprec)
    for i in range(n - 1, -1, -1):
        acc = acc * h + f.coefficient(i)
    return acc


def binomial_series(ctx, c, N, prec, tag="PI"):
    """(1+X)^c - 1 for c in Z_p given as a rational or integral scalar."""
    if isinstance(c, PadicScalar):
        if c.ctx.degree != 1 and any(c.c[1:]):
            raise ValueError("exponent must lie in Z_p")
        if c.s:
            raise ValueError("exponent must lie in Z_p")
        c = c.c[0]
    c = Fraction(c)
    p = ctx.p
    m = prec + 2
    mod = p ** m
    if c.denominator % p == 0:
        raise ValueError("exponent must lie in Z_p")
    if c.denominator == 1 and c >= 0:
        from math import comb
        out = [0] + [comb(int(c), k) % mod for k in range(1, N + 1)]
    else:
        # C(c, k) = C(c, k-1) (c - k + 1) / k; c - k + 1 never vanishes here
        big = p ** (m + N // (p - 1) + 2)
        cr = residue(c, p, m + N // (p - 1) + 2)
        unit, v = 1, 0
        out = [0]
        for k in range(1, N + 1):
            t = (cr - k + 1) % big
            vt = vp_int(t, p) if t else m + N
            unit = unit * (t // p ** vt if t else 1) % big
            v += vt
            vk = vp_int(k, p)
            unit = unit * pow(k // p ** vk, -1, big) % big
            v -= vk
            out.append(unit * p ** v % mod if v < m else 0)
    comps = [out[:N + 1]] + [[0] * (N + 1) for _ in range(ctx.degree - 1)]
    return SeriesOneVar(ctx, comps, 0, prec, tag)


def gamma_act(f, c):
    """f((1+pi)^c - 1) for a unit c of Z_p."""
    if f.tag != "PI":
        raise ValueError("gamma_act needs a PI series")
    cv = c if not isinstance(c, PadicScalar) else c.to_fraction()
    cv = Fraction(cv)
    if cv == 0 or cv.numerator % f.ctx.p == 0 or cv.denominator % f.ctx.p == 0:
        raise ValueError("gamma_act needs a p-adic unit")
    h = binomial_series(f.ctx, cv, f.N, f.aprec + f.s + 2)
    return substitute(f, h)


def phi_poly(ctx, N, prec=None, tag="PI"):
    """(1+pi)^p - 1 as a series."""
    from math import comb
    p = ctx.p
    coeffs = [comb(p, i) if i <= p else 0 for i in range(N + 1)]
    coeffs[0] = 0
    return SeriesOneVar.from_rationals(ctx, coeffs, tag, prec)


def phi_act(f):
    """f((1+pi)^p - 1)."""
    if f.tag != "PI":
        raise ValueError("phi_act needs a PI series")
    return substitute(f, phi_poly(f.ctx, f.N, f.aprec + f.s + 2))


def q_series(ctx, N, prec=None):
    from math import comb
    p = ctx.p
    coeffs = [comb(p, i + 1) if i + 1 <= p else 0 for i in range(N + 1)]
    return SeriesOneVar.from_rationals(ctx, coeffs, "PI", prec)


def t_series(ctx, N, prec=None, tag="PI"):
    coeffs = [Fraction(0)] + [Fraction((-1) ** (n + 1), n) for n in range(1, N + 1)]
    return SeriesOneVar.from_rationals(ctx, coeffs, tag, prec)


# growth ----------------------------------------------------------------------

@dataclass
class GrowthReport:
    """log_p of sup norms at rho_t, and the estimated log-growth order."""

    log_norms: list
    order: Fraction
    bounded: bool
    t_range: tuple
    min_valuation: object = None
    radii: list = field(default_factory=list)
    slope: Fraction = Fraction(0)
    reliable_t: int = 1

    def norms(self):
        return [(t, None if ln is None else float(self.radii[i][1])) for i, (t, ln) in enumerate(self.log_norms)]


def norm_profile(f, t_max=4, floor_B=0):
    """Sup norms at rho_t = p^(-1/(p^(t-1)(p-1))) and a growth-order estimate.

    ``order`` is the least r >= 0 with p^(-t r) ||f||_{rho_t} non-increasing
    over t = 1..t_max.  It overshoots when the increments oscillate (order 1/2
    alternates steps near 0 and 1), so ``slope`` also gives the average
    increment over the radii the truncation resolves: t with p^(t-1) <= N.
    Both are diagnostics on the sampled radii only.
    """
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    p = f.ctx.p
    vals = f.coeff_valuations()
    known = [(n, v) for n, v in enumerate(vals) if v is not None]
    logs = []
    radii = []
    for t in range(1, t_max + 1):
        r = Fraction(1, p ** (t - 1) * (p - 1))
        if not known:
            logs.append((t, None))
            radii.append((t, 0.0))
            continue
        L = max(-v - n * r for n, v in known)
        logs.append((t, L))
        radii.append((t, float(p) ** float(L)))
    order = Fraction(0)
    for (t1, a), (t2, b) in zip(logs, logs[1:]):
        if a is not None and b is not None:
            order = max(order, b - a)
    t_rel = 1
    while t_rel < t_max and p ** t_rel <= f.N:
        t_rel += 1
    slope = Fraction(0)
    if t_rel > 1 and logs[0][1] is not None:
        slope = max(Fraction(0), (logs[t_rel - 1][1] - logs[0][1]) / (t_rel - 1))
    minv = min((v for _, v in known), default=None)
    bounded = order == 0 and (minv is None or minv >= -floor_B)
    return GrowthReport(logs, order, bounded, (1, t_max), minv, radii, slope, t_rel)
