"""Fixed-precision arithmetic in Q_p and in quadratic extensions E = Q_p[theta]/(f).

An element is stored as ``p**(-s) * (c0 + c1*theta)`` with integer components
reduced modulo ``p**(aprec + s)``; ``aprec`` is the absolute precision, so the
value is known modulo ``p**aprec * Z_p[theta]``.  Valuations are exact
``Fraction`` objects whose denominator divides the ramification index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def vp_int(n, p):
    """Valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_frac(x, p):
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of 0")
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


def residue(x, p, m):
    """Image of a p-integral rational in Z/p^m."""
    x = Fraction(x)
    mod = p ** m
    if x.denominator % p == 0:
        raise ValueError("not p-integral: %s" % x)
    return x.numerator * pow(x.denominator, -1, mod) % mod


def lattice_val(comps, p, cap):
    """Minimum valuation of the integer components, capped at ``cap``."""
    g = 0
    for c in comps:
        g = math.gcd(g, c)
    if g == 0:
        return cap
    v = 0
    while g % p == 0 and v < cap:
        g //= p
        v += 1
    return v


def legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def slope_floor(k, p, convention="default"):
    """Threshold m in the assumption v_p(a) > m.

    ``default`` is floor((k-2)/(p-1)); ``bianchi`` and ``bianchi_alt`` are the
    two alternatives floor(k/(p-1)) and floor(k/(p-2)) used for Bianchi weights.
    """
    if convention == "default":
        return (k - 2) // (p - 1)
    if convention == "bianchi":
        return k // (p - 1)
    if convention == "bianchi_alt":
        return k // (p - 2)
    raise ValueError("unknown slope convention %r" % convention)


class PadicContext:
    """Q_p or a quadratic extension, with a default precision for new values.

    ``minpoly`` is ``(c0, c1)`` for theta^2 + c1*theta + c0, both p-integral.
    """

    def __init__(self, p, prec, minpoly=None, u=None):
        self.p = p
        self.prec = prec
        self.u = (1 + p) if u is None else u
        if minpoly is None:
            self.degree = 1
            self.c0 = self.c1 = Fraction(0)
            self.e = 1
            self.disc_val = 0
        else:
            c0, c1 = (Fraction(c) for c in minpoly)
            self.degree = 2
            self.c0, self.c1 = c0, c1
            disc = c1 * c1 - 4 * c0
            self.disc_val = vp_frac(disc, p)
            self.e = 2 if self.disc_val % 2 else 1
        self._cache = {}

    @property
    def key(self):
        return (self.p, self.degree, self.c0, self.c1)

    def gap(self):
        """Bound on how much true valuation can exceed lattice valuation."""
        return Fraction(self.disc_val, 2)

    def consts(self, m):
        """(c0, c1) reduced modulo p^m."""
        r = self._cache.get(m)
        if r is None:
            r = (residue(self.c0, self.p, m), residue(self.c1, self.p, m))
            self._cache[m] = r
        return r

    def with_prec(self, prec):
        c = PadicContext.__new__(PadicContext)
        c.__dict__.update(self.__dict__)
        c.prec = prec
        c._cache = self._cache
        return c

    # constructors
    def __call__(self, x, prec=None):
        return PadicScalar.from_rational(self, x, prec)

    def theta(self, prec=None):
        if self.degree == 1:
            raise ValueError("context has no extension generator")
        prec = self.prec if prec is None else prec
        return PadicScalar(self, (0, 1), 0, prec)

    def zero(self, prec=None):
        return PadicScalar(self, (0,) * self.degree, 0, self.prec if prec is None else prec)

    def one(self, prec=None):
        return self(1, prec)

    def __repr__(self):
        if self.degree == 1:
            return "PadicContext(Q_%d, prec=%d)" % (self.p, self.prec)
        return "PadicContext(Q_%d[t]/(t^2 + (%s)*t + (%s)), e=%d, prec=%d)" % (
            self.p, self.c1, self.c0, self.e, self.prec)


def make_context(p, prec_digits, minpoly=None, u=None):
    """Build a context; ``minpoly`` is a coefficient list, lowest degree first."""
    if not is_prime(p) or p == 2:
        raise ValueError("p must be an odd prime, got %r" % p)
    if prec_digits < 1:
        raise ValueError("prec_digits must be positive")
    if minpoly is None:
        return PadicContext(p, prec_digits, None, u)
    coeffs = [Fraction(c) for c in minpoly]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if coeffs[-1] != 1:
        raise ValueError("minpoly must be monic")
    if len(coeffs) == 2:
        return PadicContext(p, prec_digits, None, u)
    if len(coeffs) != 3:
        raise ValueError("minpoly must have degree <= 2")
    c0, c1 = coeffs[0], coeffs[1]
    for c in (c0, c1):
        if c != 0 and vp_frac(c, p) < 0:
            raise ValueError("minpoly must have p-integral coefficients")
    disc = c1 * c1 - 4 * c0
    if is_square_qp(disc, p):
        raise ValueError("minpoly is reducible over Q_%d" % p)
    return PadicContext(p, prec_digits, (c0, c1), u)


def is_square_qp(x, p):
    x = Fraction(x)
    if x == 0:
        return True
    v = vp_frac(x, p)
    if v % 2:
        return False
    unit = x / Fraction(p) ** v
    return legendre(residue(unit, p, 1), p) == 1


def sqrt_qp(x, p, m):
    """Square root of a p-adic unit square modulo p^m (Hensel lifting)."""
    a = residue(x, p, m + 1)
    r = next(r for r in range(1, p) if (r * r - a) % p == 0)
    mod = p
    while mod < p ** (m + 1):
        mod = min(mod * mod, p ** (m + 1))
        r = (r - (r * r - a) * pow(2 * r, -1, mod)) % mod
    return r % p ** m


class PadicScalar:
    """Immutable element of a PadicContext at finite absolute precision."""

    __slots__ = ("ctx", "c", "s", "aprec")

    def __init__(self, ctx, comps, s, aprec):
        p = ctx.p
        m = aprec + s
        if m <= 0:
            comps = (0,) * ctx.degree
            s = max(0, -aprec)
        else:
            mod = p ** m
            comps = tuple(c % mod for c in comps)
        self.ctx = ctx
        self.c = comps
        self.s = s
        self.aprec = aprec
        self._normalize()

    def _normalize(self):
        if self.s <= 0:
            if self.s < 0:
                f = self.ctx.p ** (-self.s)
                self.c = tuple(c * f for c in self.c)
                self.s = 0
            return
        p = self.ctx.p
        j = 0
        comps = self.c
        while j < self.s and all(c % p == 0 for c in comps):
            comps = tuple(c // p for c in comps)
            j += 1
        if j:
            self.c = comps
            self.s -= j

    @classmethod
    def from_rational(cls, ctx, x, prec=None):
        prec = ctx.prec if prec is None else prec
        x = Fraction(x)
        if x == 0:
            return cls(ctx, (0,) * ctx.degree, 0, prec)
        v = vp_frac(x, ctx.p)
        s = max(0, -v)
        m = prec + s
        if m <= 0:
            return cls(ctx, (0,) * ctx.degree, 0, prec)
        val = residue(x * Fraction(ctx.p) ** s, ctx.p, m)
        return cls(ctx, (val,) + (0,) * (ctx.degree - 1), s, prec)

    # basic queries
    @property
    def p(self):
        return self.ctx.p

    def lattice_valuation(self):
        return lattice_val(self.c, self.ctx.p, self.aprec + self.s) - self.s

    def is_zero(self):
        return all(c == 0 for c in self.c)

    def valuation(self):
        """Exact valuation; for values indistinguishable from 0, the bound aprec."""
        if self.is_zero():
            return Fraction(self.aprec)
        if self.ctx.degree == 1:
            return Fraction(self.lattice_valuation())
        n = self.norm()
        if n.is_zero():
            return Fraction(self.aprec)
        return Fraction(n.lattice_valuation(), 2)

    def _compat(self, other):
        if isinstance(other, PadicScalar):
            if other.ctx.key != self.ctx.key:
                raise ValueError("scalars from different contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicScalar.from_rational(self.ctx, other, self.aprec + max(0, self.s) + 8)
        return NotImplemented

    # ring operations
    def __add__(self, other):
        other = self._compat(other)
        if other is NotImplemented:
            return other
        p = self.ctx.p
        s = max(self.s, other.s)
        aprec = min(self.aprec, other.aprec)
        fa, fb = p ** (s - self.s), p ** (s - other.s)
        comps = tuple(a * fa + b * fb for a, b in zip(self.c, other.c))
        return PadicScalar(self.ctx, comps, s, aprec)

    __radd__ = __add__

    def __neg__(self):
        return PadicScalar(self.ctx, tuple(-c for c in self.c), self.s, self.aprec)

    def __sub__(self, other):
        other = self._compat(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._compat(other)
        if other is NotImplemented:
            return other
        ctx = self.ctx
        s = self.s + other.s
        aprec = min(self.aprec + other.lattice_valuation(), other.aprec + self.lattice_valuation())
        m = aprec + s
        if m <= 0:
            return PadicScalar(ctx, (0,) * ctx.degree, 0, aprec)
        if ctx.degree == 1:
            comps = (self.c[0] * other.c[0],)
        else:
            c0, c1 = ctx.consts(m)
            a0, a1 = self.c
            b0, b1 = other.c
            t = a1 * b1
            comps = (a0 * b0 - c0 * t, a0 * b1 + a1 * b0 - c1 * t)
        return PadicScalar(ctx, comps, s, aprec)

    __rmul__ = __mul__

    def conj(self):
        if self.ctx.degree == 1:
            return self
        m = self.aprec + self.s
        _, c1 = self.ctx.consts(max(m, 1))
        a0, a1 = self.c
        return PadicScalar(self.ctx, (a0 - c1 * a1, -a1), self.s, self.aprec)

    def norm(self):
        """Norm to Q_p, returned as a scalar of this context."""
        if self.ctx.degree == 1:
            return self * self
        n = self * self.conj()
        return PadicScalar(self.ctx, (n.c[0], 0), n.s, n.aprec)

    def _inv_base(self):
        # self has zero theta-component
        p = self.ctx.p
        a = self.c[0]
        if a == 0:
            raise ZeroDivisionError("division by a scalar indistinguishable from 0")
        v = vp_int(a, p)
        unit = a // p ** v
        val = v - self.s
        rel = self.aprec - val
        if rel <= 0:
            raise ZeroDivisionError("division by a scalar indistinguishable from 0")
        inv = pow(unit, -1, p ** rel)
        comps = (inv,) + (0,) * (self.ctx.degree - 1)
        return PadicScalar(self.ctx, comps, val, rel - val)

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("division by a scalar indistinguishable from 0")
        if self.ctx.degree == 1:
            return self._inv_base()
        return self.conj() * self.norm()._inv_base()

    def __truediv__(self, other):
        other = self._compat(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        r = PadicScalar.from_rational(self.ctx, 1, self.aprec + max(self.s, 0) * max(n, 1))
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def add_prec(self, aprec):
        """Return self with precision lowered to ``aprec`` (never raised)."""
        return PadicScalar(self.ctx, self.c, self.s, min(aprec, self.aprec))

    def lift(self, aprec):
        """Reinterpret the stored digits at a higher precision (exact inputs only)."""
        return PadicScalar(self.ctx, self.c, self.s, aprec)

    def equals(self, other, digits=None):
        """Equality modulo p^digits (default: the joint precision)."""
        d = self - other
        if digits is None:
            return d.is_zero()
        return d.is_zero() or d.valuation() >= digits

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, PadicScalar)):
            try:
                return (self - other).is_zero()
            except ValueError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.key, self.c, self.s))

    def to_fraction(self):
        """Rational representative (only for elements of Q_p)."""
        if any(self.c[1:]):
            raise ValueError("element is not in Q_p")
        m = self.aprec + self.s
        a = self.c[0]
        if m > 0 and a > p_half(self.ctx.p, m):
            a -= self.ctx.p ** m
        return Fraction(a, self.ctx.p ** self.s)

    def residue_int(self):
        """The Q_p component as an integer modulo p^aprec (requires s == 0)."""
        if self.s:
            raise ValueError("element is not integral")
        return self.c[0]

    def __repr__(self):
        if self.is_zero():
            return "O(%d^%d)" % (self.ctx.p, self.aprec)
        parts = []
        for i, c in enumerate(self.c):
            if c:
                parts.append(str(c) + ("" if i == 0 else "*t"))
        head = " + ".join(parts)
        if self.s:
            head = "(%s)/%d^%d" % (head, self.ctx.p, self.s)
        return "%s + O(%d^%d)" % (head, self.ctx.p, self.aprec)


def p_half(p, m):
    return p ** m // 2


@dataclass(frozen=True)
class HeckeRootPair:
    alpha: PadicScalar
    beta: PadicScalar
    k: int
    a: PadicScalar
    v_unit: PadicScalar
    const_exp: int

    @property
    def ctx(self):
        return self.alpha.ctx

    def valuations(self):
        return self.alpha.valuation(), self.beta.valuation()

    def check(self):
        """Residual of X^2 - aX + v p^e at both roots."""
        c = self.v_unit * Fraction(self.ctx.p) ** self.const_exp
        return [r * r - self.a * r + c for r in (self.alpha, self.beta)]


def newton_slopes(vals):
    """Slopes (root valuations) from the lower convex hull of (i, vals[i]).

    ``vals[i]`` is the valuation of the coefficient of X^i, or None for 0.
    Returns one valuation per root, as Fractions.
    """
    pts = [(i, Fraction(v)) for i, v in enumerate(vals) if v is not None]
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    out = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        out.extend([-(y2 - y1) / (x2 - x1)] * (x2 - x1))
    lead = pts[0][0]
    return [None] * lead + out


def hecke_roots(p, k, a, v_unit, prec, const_exp=None, u=None, require_sqrt_v=True, ctx=None):
    """Roots of X^2 - aX + v*p^const_exp (default exponent k-1).

    ``a`` and ``v_unit`` are rationals.  If the polynomial is irreducible the
    roots live in a fresh quadratic context generated by theta with
    theta^2 = D/(4 p^{2t}), D the discriminant; pass ``ctx`` to express them
    in an existing context instead.
    """
    a = Fraction(a)
    v_unit = Fraction(v_unit)
    e = k - 1 if const_exp is None else const_exp
    if v_unit == 0 or vp_frac(v_unit, p) != 0:
        raise ValueError("v must be a p-adic unit")
    if a != 0 and vp_frac(a, p) <= 0:
        raise ValueError("v_p(a) must be positive")
    c = v_unit * Fraction(p) ** e
    d4 = a * a / 4 - c
    if d4 == 0:
        raise ValueError("non-distinct roots")
    vd = vp_frac(d4, p)
    t = vd // 2
    dprime = d4 / Fraction(p) ** (2 * t)
    if ctx is not None:
        return _roots_in_context(ctx, p, k, a, v_unit, e, dprime, t, prec, require_sqrt_v)
    if is_square_qp(dprime, p):
        ctx = PadicContext(p, prec, None, u)
        r = Fraction(sqrt_qp(dprime, p, prec + 2 * abs(t) + 4))
        root = PadicScalar.from_rational(ctx, r, prec + abs(t) + 2)
        half = ctx(a / 2, prec + 2)
        scale = ctx(Fraction(p) ** t, prec + 2)
        alpha = half + scale * root
        beta = half - scale * root
    else:
        ctx = PadicContext(p, prec, (-dprime, Fraction(0)), u)
        th = ctx.theta(prec + abs(t) + 4)
        half = ctx(a / 2, prec + 4)
        scale = ctx(Fraction(p) ** t, prec + 4)
        alpha = (half + scale * th).add_prec(prec + e)
        beta = (half - scale * th).add_prec(prec + e)
    if require_sqrt_v and not unit_is_square(ctx, v_unit):
        raise ValueError("v must be a square in the coefficient field")
    return HeckeRootPair(alpha, beta, k, ctx(a, prec + e), ctx(v_unit, prec + e), e)


def _roots_in_context(ctx, p, k, a, v_unit, e, dprime, t, prec, require_sqrt_v):
    if ctx.p != p:
        raise ValueError("context has a different prime")
    ctx = ctx.with_prec(prec)
    if is_square_qp(dprime, p):
        root = PadicScalar.from_rational(ctx, Fraction(sqrt_qp(dprime, p, prec + 2 * abs(t) + 4)),
                                         prec + abs(t) + 2)
    else:
        if ctx.degree == 1 or ctx.c1 != 0:
            raise ValueError("the Hecke roots do not lie in the supplied context")
        ratio = dprime / -ctx.c0
        if not is_square_qp(ratio, p) or vp_frac(ratio, p) != 0:
            raise ValueError("the Hecke roots do not lie in the supplied context")
        r = PadicScalar.from_rational(ctx, Fraction(sqrt_qp(ratio, p, prec + 2 * abs(t) + 6)),
                                      prec + abs(t) + 4)
        root = r * ctx.theta(prec + abs(t) + 4)
    half = ctx(a / 2, prec + 4)
    scale = ctx(Fraction(p) ** t, prec + 4)
    alpha = (half + scale * root).add_prec(prec + e)
    beta = (half - scale * root).add_prec(prec + e)
    if require_sqrt_v and not unit_is_square(ctx, v_unit):
        raise ValueError("v must be a square in the coefficient field")
    return HeckeRootPair(alpha, beta, k, ctx(a, prec + e), ctx(v_unit, prec + e), e)


def unit_is_square(ctx, v):
    p = ctx.p
    if legendre(residue(v, p, 1), p) == 1:
        return True
    # every Z_p-unit is a square in the unramified quadratic extension
    return ctx.degree == 2 and ctx.e == 1
