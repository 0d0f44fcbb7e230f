"""Mellin transform between gamma_0 - 1 series and pi-series.

Two inverse routes are provided.  ``inverse_mellin`` solves the linear system
on pi-coefficients of the images X^i (1+pi) directly and pays roughly ``depth``
digits.  ``inverse_mellin_phi`` starts from h with M(f) = (1+pi) phi(h): in
measure language h is the pushforward of the measure of f along
x -> (u^x - 1)/p, so the coefficients of f are h paired with the Mahler
expansion of binomial(x(y), i), x(y) = log(1+py)/log(u).  That kernel is
integral, so this route loses no precision.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .padics import vp_int
from .series1 import SeriesOneVar, pmul
from .special_series import CycloRing


def _int_power_series(base, e, N, mod):
    """base^e truncated at degree N (base an integer list, e >= 0)."""
    out = [1] + [0] * N
    b = list(base)
    while e:
        if e & 1:
            out = pmul(out, b, N + 1, mod)
        e >>= 1
        if e:
            b = pmul(b, b, N + 1, mod)
    return out


def _padic_log_int(l, p, prec):
    """log_p(1 + p*l) modulo p^prec as an integer (l an integer)."""
    mod_extra = prec + 8
    big = p ** (mod_extra + 40)
    y = p * l
    acc = 0
    n = 1
    yn = y % big
    while True:
        v = vp_int(n, p)
        if yn == 0 or (n - v > mod_extra + 2 and n > 3):
            break
        nu = n // p ** v
        term = (yn // p ** v) * pow(nu, -1, big)
        acc += term if n % 2 else -term
        n += 1
        yn = yn * y % big
    return acc % p ** prec


class MellinBasisCache:
    """Images of X^i under the Mellin map and its phi-side variant.

    ``images[i]``     = X^i (1+pi)                   (pi-series, degree N)
    ``phi_images[i]`` = sum_l (-1)^(i-l) C(i,l) (1+pi)^((u^l-1)/p)
    so that M(f) = (1+pi) phi(h) with h = sum c_i phi_images[i].
    """

    def __init__(self, ctx, N, depth, prec=None):
        if depth > N:
            raise ValueError("depth must not exceed N")
        self.ctx = ctx
        self.N = N
        self.depth = depth
        self.prec = ctx.prec if prec is None else prec
        self.u = ctx.u
        self._images = None
        self._phi_images = None
        self._kernel = {}

    def _combine(self, powers):
        p = self.ctx.p
        mod = p ** self.prec
        out = []
        for i in range(self.depth + 1):
            acc = [0] * (self.N + 1)
            for l in range(i + 1):
                c = comb(i, l) * (-1) ** (i - l)
                row = powers[l]
                acc = [a + c * r for a, r in zip(acc, row)]
            comps = [[a % mod for a in acc]] + [[0] * (self.N + 1) for _ in range(self.ctx.degree - 1)]
            out.append(SeriesOneVar(self.ctx, comps, 0, self.prec, "PI"))
        return out

    @property
    def images(self):
        if self._images is None:
            p = self.ctx.p
            mod = p ** self.prec
            N = self.N
            base = [1, 1] + [0] * (N - 1)
            powers = []
            y = base[:N + 1]
            for _l in range(self.depth + 1):
                powers.append(y)
                y = _int_power_series(y, self.u, N, mod)
            self._images = self._combine(powers)
        return self._images

    @property
    def phi_images(self):
        if self._phi_images is None:
            p = self.ctx.p
            mod = p ** self.prec
            N = self.N
            one_pi = [1, 1] + [0] * (N - 1)
            one_pi = one_pi[:N + 1]
            powers = []
            y = [1] + [0] * N
            for _l in range(self.depth + 1):
                powers.append(y)
                y = pmul(_int_power_series(y, self.u, N, mod), one_pi, N + 1, mod)
            self._phi_images = self._combine(powers)
        return self._phi_images

    def kernel(self, P, mmax):
        """K[i][m] = m-th forward difference at 0 of y -> C(x(y), i), mod p^P."""
        key = (P, mmax)
        if key in self._kernel:
            return self._kernel[key]
        for (P2, m2), K in self._kernel.items():
            if P2 >= P and m2 >= mmax:
                return [row[:mmax + 1] for row in K]
        p, D = self.ctx.p, self.depth
        vfact = sum(vp_int(i, p) for i in range(1, D + 1))
        Px = P + vfact + 4
        modx = p ** Px
        if (self.u - 1) % p:
            raise ValueError("u must be a principal unit")
        lu = _padic_log_int((self.u - 1) // p, p, Px + 2)
        lu_unit = (lu // p) % modx
        inv_lu = pow(lu_unit, -1, modx)
        xs = []
        for l in range(mmax + 1):
            lg = _padic_log_int(l, p, Px + 2)
            xs.append((lg // p) * inv_lu % modx)
        mod = p ** P
        K = []
        for i in range(D + 1):
            vals = []
            for x in xs:
                # C(x, i) = prod_{r<i} (x - r) / i!
                num = 1
                for r in range(i):
                    num = num * (x - r) % modx
                vals.append(num)
            fi = 1
            vi = 0
            for r in range(1, i + 1):
                v = vp_int(r, p)
                vi += v
                fi *= r // p ** v
            inv = pow(fi, -1, mod)
            g = [(val // p ** vi) * inv % mod for val in vals]
            row = []
            seq = g
            for _m in range(mmax + 1):
                row.append(seq[0] % mod)
                seq = [b - a for a, b in zip(seq, seq[1:])]
            K.append(row)
        self._kernel[key] = K
        return K


def mellin(f, cache):
    """Sum_i c_i X^i (1+pi) for an X-series f (tag GAMMA0)."""
    if f.N > cache.depth:
        raise ValueError("depth exceeded: series degree %d > cache depth %d" % (f.N, cache.depth))
    return _combine_images(f, cache.images, cache)


def mellin_phi(f, cache):
    """The pi-series h with M(f) = (1+pi) phi(h)."""
    if f.N > cache.depth:
        raise ValueError("depth exceeded: series degree %d > cache depth %d" % (f.N, cache.depth))
    return _combine_images(f, cache.phi_images, cache)


def _combine_images(f, images, cache):
    ctx = f.ctx
    out = SeriesOneVar.zero(ctx, cache.N, "PI", min(cache.prec, f.aprec + f.s + 2))
    out = out.with_prec(f.aprec)
    for i in range(f.N + 1):
        c = f.coefficient(i)
        if not c.is_zero():
            out = out + images[i].scalar_mul(c)
    return out.with_prec(min(f.aprec, cache.prec + f.lattice_valuation()))


def inverse_mellin(g, cache):
    """Solve sum_{i<=d} c_i [X^i(1+pi)]_r = g_r for r <= d by p-adic elimination.

    Returns (f, residual_valuation) where the residual measures the unmatched
    pi-coefficients above degree d.  Exact for images of polynomials of
    degree <= d; costs about d digits of precision.
    """
    ctx = g.ctx
    d = cache.depth
    if g.N < d:
        raise ValueError("g must be truncated at N >= depth")
    work = g.aprec
    imgs = cache.images
    A = [[imgs[i].coefficient(r).add_prec(cache.prec) for i in range(d + 1)] for r in range(d + 1)]
    b = [g.coefficient(r) for r in range(d + 1)]
    n = d + 1
    cols = list(range(n))
    for col in range(n):
        # full pivoting on the remaining block: smallest valuation
        best = None
        for r in range(col, n):
            for c in range(col, n):
                x = A[r][cols[c]]
                if x.is_zero():
                    continue
                v = x.valuation()
                if best is None or v < best[0]:
                    best = (v, r, c)
        if best is None:
            raise ArithmeticError("pivot loss: system is singular at current precision")
        v, r, c = best
        if v >= A[r][cols[c]].aprec:
            raise ArithmeticError("pivot loss: pivot valuation exceeds remaining precision")
        A[col], A[r] = A[r], A[col]
        b[col], b[r] = b[r], b[col]
        cols[col], cols[c] = cols[c], cols[col]
        piv = A[col][cols[col]]
        inv = piv.inverse()
        for rr in range(col + 1, n):
            x = A[rr][cols[col]]
            if x.is_zero():
                continue
            f = x * inv
            for cc in range(col, n):
                A[rr][cols[cc]] = A[rr][cols[cc]] - f * A[col][cols[cc]]
            b[rr] = b[rr] - f * b[col]
    sol = [None] * n
    for col in range(n - 1, -1, -1):
        acc = b[col]
        for cc in range(col + 1, n):
            acc = acc - A[col][cols[cc]] * sol[cols[cc]]
        sol[cols[col]] = acc / A[col][cols[col]]
    f = SeriesOneVar.from_scalars(ctx, sol, "GAMMA0")
    f = f.with_prec(min(f.aprec, work))
    back = mellin(f, cache)
    resid = (g - back)
    tail = [v for v in resid.coeff_valuations()[d + 1:] if v is not None]
    residual = min(tail) if tail else Fraction(resid.aprec)
    return f, residual


def inverse_mellin_phi(h, cache, extra=24):
    """X-series f of degree depth with M(f) = (1+pi) phi(h), via the integral kernel.

    Coefficients of h beyond its truncation are taken to be no larger than the
    largest observed one; the kernel decay beyond N bounds that tail.
    """
    ctx = h.ctx
    p = ctx.p
    N = h.N
    P = h.aprec + h.s + 2
    K = cache.kernel(P, N + extra)
    D = cache.depth
    m = h.aprec + h.s
    mod = p ** m
    comps = []
    for comp in h.c:
        out = []
        for i in range(D + 1):
            row = K[i]
            out.append(sum(row[j] * comp[j] for j in range(N + 1)) % mod)
        comps.append(out)
    f = SeriesOneVar(ctx, comps, h.s, h.aprec, "GAMMA0")
    vals = [v for v in h.coeff_valuations() if v is not None]
    if vals:
        vmin = min(vals)
        tail = None
        for i in range(D + 1):
            for j in range(N + 1, N + extra + 1):
                kv = K[i][j]
                t = (vp_int(kv, p) if kv else P) + vmin
                tail = t if tail is None else min(tail, t)
        if tail is not None:
            f = f.with_prec(int(tail // 1))
    return f


def dlog_table(p, u, s):
    """x(c) mod p^s with u^x(c) = 1 + p c mod p^(s+1), for c mod p^s."""
    mod = p ** (s + 1)
    table = {}
    y = 1
    for x in range(p ** s):
        table[(y - 1) // p % p ** s] = x
        y = y * u % mod
    return [table[c] for c in range(p ** s)]


def gauss_weights(ring, e0, u, prec):
    """g_b = sum_{c mod p^s} Z^(e0 x(c) - b c) for every b mod p^s (exact, stored to ``prec``)."""
    p, s = ring.ctx.p, ring.s
    order = p ** s
    xs = dlog_table(p, u, s)
    out = []
    for b in range(order):
        poly = [0] * order
        for c in range(order):
            poly[(e0 * xs[c] - b * c) % order] += 1
        comps = [ring.reduce(poly)] + [[0] * ring.d for _ in range(ring.ctx.degree - 1)]
        out.append(ring.element(comps, 0, prec))
    return out


def theta_op(h):
    """(1+pi) d/dpi, truncated at N-1."""
    d = h.derivative()
    return d + d.shift(1).truncate(d.N) if d.N >= 1 else d


def eval_series_at(h, x, vx):
    """h(x) in a cyclotomic ring, with the truncation tail in the precision."""
    ring = x.ring
    acc = ring.from_scalar(h.coefficient(h.N))
    for i in range(h.N - 1, -1, -1):
        acc = acc * x + h.coefficient(i)
    if vx is not None:
        vals = [v for v in h.coeff_valuations() if v is not None]
        vmin = min(vals) if vals else Fraction(h.aprec)
        acc = acc.with_prec(int((vmin + (h.N + 1) * vx) // 1))
    return acc


def character_value(jets, pt, ctx, u=None):
    """f(kappa) for kappa(gamma_0) = u^j zeta from the phi-side data of f.

    ``jets(b, l)`` must return (theta^l h)(Z^b - 1) in the ring of order p^s,
    where theta = (1+pi) d/dpi and M(f) = (1+pi) phi(h).  Values may be
    matrices (lists of lists) of cyclotomic elements.
    """
    u = ctx.u if u is None else u
    p = ctx.p
    s = pt.s
    j = pt.j
    ring = CycloRing(ctx, s)
    e0 = pt.zeta_index if s else 0
    weights = None
    total = None
    for b in range(p ** s):
        acc = None
        for l in range(j + 1):
            coef = comb(j, l) * p ** l
            val = jets(b, l)
            term = _scale(val, coef)
            acc = term if acc is None else _add(acc, term)
        if s:
            if weights is None:
                top = max(_flatten_aprec(acc))
                weights = gauss_weights(ring, e0, u, top + s + 4)
            acc = _mul(acc, weights[b])
        total = acc if total is None else _add(total, acc)
    if s:
        total = _scale(total, Fraction(1, p ** s))
    return total


def _flatten_aprec(v):
    if isinstance(v, list):
        return [a for x in v for a in _flatten_aprec(x)]
    return [v.aprec]


def _map(v, fn):
    if isinstance(v, list):
        return [_map(x, fn) for x in v]
    return fn(v)


def _scale(v, c):
    return _map(v, lambda x: x * c)


def _mul(v, w):
    return _map(v, lambda x: x * w)


def _add(v, w):
    if isinstance(v, list):
        return [_add(a, b) for a, b in zip(v, w)]
    return v + w
