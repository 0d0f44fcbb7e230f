"""Named series (omega_n, Phi_n, Phi_{n,m}, omega_{n,m}, delta_m, log_{p,m},
ell_i, lambda_+/-) and evaluation of gamma_0 - 1 series at character points.

Character points u^j*zeta - 1 live in the cyclotomic ring E[Z]/Phi_{p^s}(Z),
where zeta = Z^e has order p^s and s = n - 1 for a character of conductor p^n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .padics import PadicScalar, lattice_val
from .series1 import SeriesOneVar, pmul, t_series


# cyclotomic ring --------------------------------------------------------------

class CycloRing:
    """E[Z]/Phi_{p^s}(Z); for s = 0 this is E itself (Z = 1)."""

    def __init__(self, ctx, s):
        self.ctx = ctx
        self.s = s
        p = ctx.p
        self.order = p ** s
        self.d = (p - 1) * p ** (s - 1) if s >= 1 else 1
        self.step = p ** (s - 1) if s >= 1 else 1

    @property
    def key(self):
        return (self.ctx.key, self.s)

    def reduce(self, poly):
        """Reduce an integer coefficient list modulo Phi_{p^s}."""
        d = self.d
        if self.s == 0:
            return [sum(poly)]
        poly = list(poly)
        p, step = self.ctx.p, self.step
        for deg in range(len(poly) - 1, d - 1, -1):
            c = poly[deg]
            if c:
                poly[deg] = 0
                r = deg - d
                for i in range(p - 1):
                    poly[r + i * step] -= c
        return (poly + [0] * d)[:d]

    def element(self, comps, s, aprec):
        return CycloElement(self, comps, s, aprec)

    def from_scalar(self, x):
        comps = [[c] + [0] * (self.d - 1) for c in x.c]
        return CycloElement(self, comps, x.s, x.aprec)

    def zeta_power(self, e, prec):
        e %= self.order
        poly = [0] * (e + 1)
        poly[e] = 1
        red = self.reduce(poly)
        comps = [red] + [[0] * self.d for _ in range(self.ctx.degree - 1)]
        return CycloElement(self, comps, 0, prec)

    def one(self, prec):
        return self.zeta_power(0, prec)


class CycloElement:
    __slots__ = ("ring", "c", "s", "aprec")

    def __init__(self, ring, comps, s, aprec):
        p = ring.ctx.p
        m = aprec + s
        if m <= 0:
            comps = [[0] * ring.d for _ in comps]
            s = max(0, -aprec)
        else:
            mod = p ** m
            comps = [[x % mod for x in comp] for comp in comps]
        if s > 0:
            j = min(s, min(lattice_val(comp, p, s) for comp in comps))
            if j:
                comps = [[x // p ** j for x in comp] for comp in comps]
                s -= j
        elif s < 0:
            comps = [[x * p ** (-s) for x in comp] for comp in comps]
            s = 0
        self.ring, self.c, self.s, self.aprec = ring, comps, s, aprec

    @property
    def ctx(self):
        return self.ring.ctx

    def lattice_valuation(self):
        m = self.aprec + self.s
        return min(lattice_val(comp, self.ctx.p, m) for comp in self.c) - self.s

    def valuation(self):
        """Lower bound for the valuation (exact up to an error < 1)."""
        if self.is_zero():
            return Fraction(self.aprec)
        return Fraction(self.lattice_valuation())

    def is_zero(self):
        return all(x == 0 for comp in self.c for x in comp)

    def _coerce(self, other):
        if isinstance(other, CycloElement):
            if other.ring.key != self.ring.key:
                raise ValueError("elements of different cyclotomic rings")
            return other
        if isinstance(other, PadicScalar):
            return self.ring.from_scalar(other)
        if isinstance(other, (int, Fraction)):
            return self.ring.from_scalar(self.ctx(other, self.aprec + self.s + 4))
        raise TypeError("cannot combine with %r" % type(other))

    def __add__(self, other):
        other = self._coerce(other)
        p = self.ctx.p
        s = max(self.s, other.s)
        fa, fb = p ** (s - self.s), p ** (s - other.s)
        comps = [[x * fa + y * fb for x, y in zip(a, b)] for a, b in zip(self.c, other.c)]
        return CycloElement(self.ring, comps, s, min(self.aprec, other.aprec))

    __radd__ = __add__

    def __neg__(self):
        return CycloElement(self.ring, [[-x for x in comp] for comp in self.c], self.s, self.aprec)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        ring, ctx = self.ring, self.ctx
        s = self.s + other.s
        aprec = min(self.aprec + other.lattice_valuation(), other.aprec + self.lattice_valuation())
        m = aprec + s
        if m <= 0:
            return CycloElement(ring, [[0] * ring.d for _ in self.c], 0, aprec)
        mod = ctx.p ** m
        n = 2 * ring.d - 1

        def mul(a, b):
            return ring.reduce(pmul(a, b, n, mod))

        if ctx.degree == 1:
            comps = [mul(self.c[0], other.c[0])]
        else:
            c0, c1 = ctx.consts(m)
            a0, a1 = self.c
            b0, b1 = other.c
            p00, p11 = mul(a0, b0), mul(a1, b1)
            mix = mul([x + y for x, y in zip(a0, a1)], [x + y for x, y in zip(b0, b1)])
            comps = [[x - c0 * z for x, z in zip(p00, p11)],
                     [w - x - z - c1 * z for w, x, z in zip(mix, p00, p11)]]
        return CycloElement(ring, comps, s, aprec)

    __rmul__ = __mul__

    def __pow__(self, e):
        r = self.ring.one(self.aprec + self.s * max(e, 1))
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def mul_zeta(self, e):
        """Multiply by Z^e (a rotation followed by reduction)."""
        ring = self.ring
        e %= ring.order
        comps = []
        for comp in self.c:
            poly = [0] * (ring.d + e)
            poly[e:e + ring.d] = comp
            comps.append(ring.reduce(poly))
        return CycloElement(ring, comps, self.s, self.aprec)

    def with_prec(self, aprec):
        return CycloElement(self.ring, self.c, self.s, min(aprec, self.aprec))

    def to_scalar(self):
        """The value as a scalar of the base context (requires no Z-part)."""
        if any(x for comp in self.c for x in comp[1:]):
            raise ValueError("element does not lie in the base field")
        return PadicScalar(self.ctx, tuple(comp[0] for comp in self.c), self.s, self.aprec)

    def equals(self, other, digits):
        d = self - other
        return d.is_zero() or d.valuation() >= digits

    def __repr__(self):
        return "CycloElement(s=%d, d=%d, val>=%s, O(p^%d))" % (
            self.ring.s, self.ring.d, self.valuation(), self.aprec)


# character points -------------------------------------------------------------

@dataclass(frozen=True)
class CharacterPoint:
    """The character gamma_0 -> u^j * zeta with zeta = Z^zeta_index of order p^(n-1)."""

    j: int
    n: int
    zeta_index: int = 1

    @property
    def s(self):
        return max(self.n - 1, 0)

    def ring(self, ctx):
        return CycloRing(ctx, self.s)

    def zeta(self, ctx, prec):
        ring = self.ring(ctx)
        e = self.zeta_index if self.s else 0
        return ring.zeta_power(e, prec)

    def abscissa(self, ctx, prec):
        """x = u^j zeta - 1."""
        uj = ctx(Fraction(ctx.u) ** self.j, prec + 2)
        return self.zeta(ctx, prec + 2) * uj - 1

    def abscissa_valuation(self, p, u):
        """Exact valuation of u^j zeta - 1."""
        if self.s == 0:
            if self.j == 0:
                return None
            from .padics import vp_frac
            return Fraction(vp_frac(Fraction(u) ** self.j - 1, p))
        return Fraction(1, (p - 1) * p ** (self.s - 1))

    def to_json(self):
        return {"j": self.j, "n": self.n, "zeta_index": self.zeta_index}

    @classmethod
    def from_json(cls, d):
        return cls(int(d["j"]), int(d["n"]), int(d.get("zeta_index", 1)))


def character_points(p, js, n):
    """All points (j, n, e) with zeta = Z^e primitive of order p^(n-1)."""
    s = max(n - 1, 0)
    if s == 0:
        return [CharacterPoint(j, n, 0) for j in js]
    return [CharacterPoint(j, n, e) for j in js for e in range(p ** s) if e % p]


def eval_at_character(f, pt, prec=None, x=None, exact=False):
    """f(u^j zeta - 1) with the truncation tail folded into the precision.

    The dropped tail is bounded by assuming |c_n| <= max observed |c_n|;
    ``exact`` declares f a polynomial, so there is no tail.
    """
    ctx = f.ctx
    if x is None:
        x = pt.abscissa(ctx, f.aprec + f.s + 4)
    ring = x.ring
    vx = pt.abscissa_valuation(ctx.p, ctx.u)
    acc = ring.from_scalar(f.coefficient(f.N))
    for i in range(f.N - 1, -1, -1):
        acc = acc * x + f.coefficient(i)
    if vx is not None and not exact:
        vals = [v for v in f.coeff_valuations() if v is not None]
        minv = min(vals) if vals else Fraction(f.aprec)
        tail = minv + (f.N + 1) * vx
        acc = acc.with_prec(int(tail // 1))
    if prec is not None and acc.aprec < prec:
        raise ValueError("insufficient truncation for the requested precision "
                         "(%d < %d digits)" % (acc.aprec, prec))
    return acc


def eval_poly_at(f, x):
    """Exact evaluation of a polynomial series at a cyclotomic element."""
    acc = x.ring.from_scalar(f.coefficient(f.N))
    for i in range(f.N - 1, -1, -1):
        acc = acc * x + f.coefficient(i)
    return acc


# gadget series ----------------------------------------------------------------

def _binom_poly(ctx, e, scale, N, prec, tag):
    """(scale*(1+X))^e as a series, scale a rational p-adic unit."""
    coeffs = [Fraction(scale) ** e * comb(e, i) for i in range(min(e, N) + 1)]
    return SeriesOneVar.from_rationals(ctx, coeffs, tag, prec, N)


def omega_n(n, ctx, N, tag="GAMMA0", prec=None):
    """(1+X)^(p^n) - 1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if ctx.p ** n > N:
        raise ValueError("truncation too small for omega_%d" % n)
    f = _binom_poly(ctx, ctx.p ** n, 1, N, prec, tag)
    return f - 1


def phi_cyc_n(n, ctx, N, tag="GAMMA0", prec=None):
    """Phi_n(1+X) = omega_n/omega_{n-1} = sum_{i<p} (1+X)^(i p^(n-1))."""
    if n < 1:
        raise ValueError("n must be >= 1")
    p = ctx.p
    if (p - 1) * p ** (n - 1) > N:
        raise ValueError("truncation too small for Phi_%d" % n)
    coeffs = [0] * (N + 1)
    for i in range(p):
        e = i * p ** (n - 1)
        for r in range(e + 1):
            coeffs[r] += comb(e, r)
    return SeriesOneVar.from_rationals(ctx, coeffs, tag, prec)


def _product(ctx, factors, N, tag, prec):
    out = SeriesOneVar.constant(ctx, 1, N, tag, prec)
    for f in factors:
        out = out * f
    return out


def _scaled_cyclo_factor(ctx, n, j, N, tag, prec, omega):
    """Phi_n(u^{-j}(1+X)) or omega_n(u^{-j}(1+X)) as a polynomial series."""
    p = ctx.p
    w = Fraction(1, ctx.u) ** j
    coeffs = [Fraction(0)] * (N + 1)
    if omega:
        e = p ** n
        if e > N:
            raise ValueError("truncation too small for omega_%d" % n)
        for r in range(e + 1):
            coeffs[r] += w ** e * comb(e, r)
        coeffs[0] -= 1
    else:
        if (p - 1) * p ** (n - 1) > N:
            raise ValueError("truncation too small for Phi_%d" % n)
        for i in range(p):
            e = i * p ** (n - 1)
            for r in range(e + 1):
                coeffs[r] += w ** e * comb(e, r)
    return SeriesOneVar.from_rationals(ctx, coeffs, tag, prec)


def phi_nm(n, m, ctx, N, tag="GAMMA0", prec=None):
    """prod_{j<m} Phi_n(u^{-j}(1+X))."""
    if m < 1 or n < 1:
        raise ValueError("need n >= 1 and m >= 1")
    prec = ctx.prec if prec is None else prec
    return _product(ctx, [_scaled_cyclo_factor(ctx, n, j, N, tag, prec, False) for j in range(m)],
                    N, tag, prec)


def omega_nm(n, m, ctx, N, tag="GAMMA0", prec=None):
    """prod_{j<m} omega_n(u^{-j}(1+X)); omega_{0,m} = delta_m."""
    if m < 1 or n < 0:
        raise ValueError("need n >= 0 and m >= 1")
    prec = ctx.prec if prec is None else prec
    return _product(ctx, [_scaled_cyclo_factor(ctx, n, j, N, tag, prec, True) for j in range(m)],
                    N, tag, prec)


def delta_m(m, ctx, N, tag="GAMMA0", prec=None):
    """prod_{j<m} (u^{-j}(1+X) - 1), a polynomial of degree m."""
    if m > N:
        raise ValueError("truncation too small for delta_%d" % m)
    return omega_nm(0, m, ctx, N, tag, prec)


def log_p_scalar(x, p, prec):
    """log_p of a rational principal unit x = 1 + p*y, as a rational mod p^prec."""
    y = Fraction(x) - 1
    out = Fraction(0)
    n = 1
    while True:
        term = Fraction((-1) ** (n + 1), n) * y ** n
        if term and _vq(term, p) >= prec + 4 and n > 2 * prec + 8:
            break
        out += term
        n += 1
        if n > 10 * (prec + 10):
            break
    return out


def _vq(x, p):
    from .padics import vp_frac
    return vp_frac(x, p)


def log_u(ctx, prec):
    """log_p(u) as a scalar; its valuation is 1 for u = 1 + p * unit."""
    val = log_p_scalar(ctx.u, ctx.p, prec + 4)
    return ctx(val, prec)


def log_series(ctx, N, tag="GAMMA0", prec=None):
    """log_p(1+X) truncated."""
    return t_series(ctx, N, prec, tag)


def log_pm(m, ctx, N, tag="GAMMA0", prec=None):
    """prod_{j<m} log_p(u^{-j}(1+X)) = prod_j (log_p(1+X) - j log_p(u))."""
    prec = ctx.prec if prec is None else prec
    lg = log_series(ctx, N, tag, prec)
    lu = log_u(ctx, prec + 2)
    return _product(ctx, [lg - lu * j for j in range(m)], N, tag, prec)


def ell_i(i, ctx, N, tag="GAMMA0", prec=None):
    """log_p(1+X)/log_p(u) - i."""
    prec = ctx.prec if prec is None else prec
    lg = log_series(ctx, N, tag, prec + 2)
    return lg / log_u(ctx, prec + 4) - i


def _phi_q_factors(ctx, N, prec, count, tag="PI"):
    """phi^n(q)/p for n < count, computed from (1+pi)^(p^n) by repeated p-th powers."""
    p = ctx.p
    m = prec + 1
    mod = p ** m
    y = [1, 1] + [0] * (N - 1)
    y = y[:N + 1]
    out = []
    for _ in range(count):
        acc = [0] * (N + 1)
        pw = [1] + [0] * N
        for _i in range(p):
            acc = [(a + b) % mod for a, b in zip(acc, pw)]
            pw = pmul(pw, y, N + 1, mod)
        # pw is now y^p, the next (1+pi)^(p^(n+1))
        comps = [acc] + [[0] * (N + 1) for _ in range(ctx.degree - 1)]
        out.append(SeriesOneVar(ctx, comps, 1, prec, tag))
        y = pw
    return out


def phi_power_q(ctx, n, N, prec, tag="PI"):
    """phi^n(q)/p = (1/p) sum_{i<p} (1+pi)^(i p^n), truncated."""
    return _phi_q_factors(ctx, N, prec, n + 1, tag)[n]


def lambda_pm(ctx, N, prec=None):
    """(lambda_+, lambda_-) truncated at pi^N.

    Factor n differs from 1 by terms of valuation >= n - 1 - log_p(N), so the
    products run until that exceeds the precision.
    """
    prec = ctx.prec if prec is None else prec
    p = ctx.p
    logN = 0
    while p ** (logN + 1) <= N:
        logN += 1
    factors = _phi_q_factors(ctx, N, prec, prec + logN + 3)
    plus = SeriesOneVar.constant(ctx, 1, N, "PI", prec)
    minus = SeriesOneVar.constant(ctx, 1, N, "PI", prec)
    for n, f in enumerate(factors):
        if n % 2:
            plus = plus * f
        else:
            minus = minus * f
    return plus, minus
