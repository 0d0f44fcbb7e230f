"""A transformer-style front end: fit builds the package, transform decomposes."""

from __future__ import annotations

import inspect
from fractions import Fraction

from .decompose import AdmissiblePair, SignedPair, decompose_pair, recompose
from .series1 import SeriesOneVar


class NotFittedError(RuntimeError):
    pass


def check_is_fitted(est, attr="package_"):
    if getattr(est, attr, None) is None:
        raise NotFittedError("%s is not fitted; call fit() first" % type(est).__name__)


def _as_pairs(X, roots):
    out = []
    for item in X:
        if isinstance(item, AdmissiblePair):
            out.append(item)
        elif isinstance(item, (tuple, list)) and len(item) == 2 and all(isinstance(f, SeriesOneVar) for f in item):
            out.append(AdmissiblePair(item[0], item[1], roots))
        else:
            raise TypeError("expected AdmissiblePair or (F_alpha, F_beta) series tuples")
    return out


def _as_signed(X):
    out = []
    for item in X:
        if isinstance(item, SignedPair):
            out.append(item)
        elif isinstance(item, (tuple, list)) and len(item) == 2:
            out.append(SignedPair(item[0], item[1]))
        else:
            raise TypeError("expected SignedPair or (F_sharp, F_flat) tuples")
    return out


class SignedDecomposer:
    """Signed decomposition (F_alpha, F_beta) -> (F_sharp, F_flat) for one (p, k, a, v).

    ``fit`` ignores its data and builds the logarithmic matrix; ``transform``
    maps admissible pairs to signed pairs and ``inverse_transform`` goes back.
    """

    def __init__(self, p=3, k=2, a=3, v_unit=1, prec=40, npi=200, depth=64, guard=None,
                 degree=None):
        self.p = p
        self.k = k
        self.a = a
        self.v_unit = v_unit
        self.prec = prec
        self.npi = npi
        self.depth = depth
        self.guard = guard
        self.degree = degree

    @classmethod
    def _param_names(cls):
        sig = inspect.signature(cls.__init__)
        return sorted(n for n in sig.parameters if n != "self")

    def get_params(self, deep=True):
        return {n: getattr(self, n) for n in self._param_names()}

    def set_params(self, **params):
        valid = set(self._param_names())
        for name, value in params.items():
            if name not in valid:
                raise ValueError("invalid parameter %r for %s" % (name, type(self).__name__))
            setattr(self, name, value)
        self.package_ = None
        return self

    def _validate(self):
        from .padics import is_prime
        if not is_prime(self.p) or self.p == 2:
            raise ValueError("p must be an odd prime")
        if int(self.k) != self.k or self.k < 2:
            raise ValueError("k must be an integer >= 2")
        Fraction(self.a)
        if self.prec <= 0 or self.depth <= 0 or self.npi < self.depth:
            raise ValueError("need prec > 0 and npi >= depth > 0")

    def fit(self, X=None, y=None):
        from .wach import build_package
        self._validate()
        self.package_ = build_package(self.p, self.k, self.a, self.v_unit, self.prec, self.npi,
                                      self.depth, self.guard)
        self.roots_ = self.package_.roots
        self.growth_orders_ = tuple(self.roots_.valuations())
        return self

    def transform(self, X):
        check_is_fitted(self)
        return [decompose_pair(pair, self.package_, degree=self.degree)
                for pair in _as_pairs(X, self.roots_)]

    def fit_transform(self, X, y=None):
        return self.fit(X, y).transform(X)

    def inverse_transform(self, X):
        check_is_fitted(self)
        return [recompose(sp, self.package_) for sp in _as_signed(X)]

    def __repr__(self):
        args = ", ".join("%s=%r" % (n, v) for n, v in self.get_params().items())
        return "%s(%s)" % (type(self).__name__, args)
