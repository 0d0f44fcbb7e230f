"""JSON interchange and the ``logmatrix`` command line.

Every file written here is UTF-8 JSON with sorted keys; integers that can grow
large are decimal strings.  Each output embeds the job configuration and the
library version.  A scalar p^(-shift) (c0 + c1 theta) is stored as
{"digits": [c0, c1], "shift": s, "aprec": a}.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, fields
from fractions import Fraction

from . import __version__
from .decompose import AdmissiblePair, decompose_pair, recompose, synth_signed_pair
from .padics import PadicContext, PadicScalar, hecke_roots
from .series1 import SeriesOneVar
from .special_series import CharacterPoint, eval_at_character
from .twovar import (SignedQuadruple, TwoVarSeries, decompose_two_stage, identity_residual,
                     recompose_quadruple, synth_quadruple)
from .wach import (LogMatrixPackage, build_log_matrix, build_wach_data, default_guard,
                   min_truncation, verify_log_matrix)

PREC_ENV = "LOGMATRIX_PREC"


class CliError(Exception):
    def __init__(self, kind, message, code=3):
        super().__init__(message)
        self.kind, self.code = kind, code


# configuration ---------------------------------------------------------------------

@dataclass
class JobConfig:
    p: int = 3
    k: int = 2
    a: str = "0"
    v_unit: str = "1"
    prec: int = 40
    npi: int = 200
    depth: int = 64
    guard: int = -1          # -1: default guard
    seed: int = 0
    u: int = 0               # 0: u = 1 + p
    slope_convention: str = "default"
    weight_convention: str = "engine"   # "bianchi": k is a Bianchi weight, engine weight k + 2

    @property
    def k_engine(self):
        return self.k + 2 if self.weight_convention == "bianchi" else self.k

    def guard_digits(self):
        return default_guard(self.p, self.k_engine, self.depth) if self.guard < 0 else self.guard

    def validate(self):
        from .padics import is_prime, slope_floor, vp_frac
        if not is_prime(self.p) or self.p == 2:
            raise CliError("config", "p must be an odd prime")
        if self.k_engine < 2:
            raise CliError("config", "weight must be at least 2 (engine convention)")
        a = Fraction(self.a)
        floor = slope_floor(self.k_engine, self.p, self.slope_convention)
        if a != 0 and vp_frac(a, self.p) <= floor:
            raise CliError("slope floor", "slope floor: v_p(a) must exceed %d" % floor)
        if self.prec < 1 or self.npi < 1 or self.depth < 1:
            raise CliError("config", "precision and truncations must be positive")
        return self

    def to_json(self):
        return asdict(self)

    @classmethod
    def from_json(cls, d):
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})


# scalars and series ----------------------------------------------------------------

def ctx_to_json(ctx):
    out = {"p": ctx.p, "u": str(ctx.u)}
    if ctx.degree == 2:
        out["minpoly"] = [str(ctx.c0), str(ctx.c1)]
    return out


def ctx_from_json(d, prec=40):
    mp = d.get("minpoly")
    return PadicContext(int(d["p"]), prec, None if mp is None else (Fraction(mp[0]), Fraction(mp[1])),
                        int(d["u"]))


def scalar_to_json(x):
    return {"digits": [str(c) for c in x.c], "shift": x.s, "aprec": x.aprec}


def scalar_from_json(ctx, d):
    return PadicScalar(ctx, tuple(int(c) for c in d["digits"]), int(d["shift"]), int(d["aprec"]))


def series_to_json(f):
    return {"variable": f.tag, "N": f.N, "shift": f.s, "aprec": f.aprec,
            "coeffs": [[str(comp[i]) for comp in f.c] for i in range(f.N + 1)]}


def series_from_json(ctx, d):
    coeffs = d["coeffs"]
    comps = [[int(c[e]) for c in coeffs] for e in range(ctx.degree)]
    return SeriesOneVar(ctx, comps, int(d.get("shift", 0)), int(d["aprec"]), d.get("variable", "GAMMA0"))


def twovar_to_json(F):
    return {"N1": F.N1, "N2": F.N2, "shift": F.s, "aprec": F.aprec,
            "coeffs": [[[str(comp[i][j]) for comp in F.c] for j in range(F.N2 + 1)] for i in range(F.N1 + 1)]}


def twovar_from_json(ctx, d):
    co = d["coeffs"]
    comps = [[[int(cell[e]) for cell in row] for row in co] for e in range(ctx.degree)]
    return TwoVarSeries(ctx, comps, int(d["shift"]), int(d["aprec"]))


def cyclo_to_json(x):
    return {"ring_order": x.ring.order, "digits": [[str(c) for c in comp] for comp in x.c],
            "shift": x.s, "aprec": x.aprec}


def _mat(m, fn):
    return [[fn(x) for x in row] for row in m]


# packages --------------------------------------------------------------------------

def package_to_json(pkg, cfg):
    wd = pkg.wach
    meta = {k: v for k, v in pkg.meta.items() if not k.startswith("_") and k != "build_seconds"}
    return {
        "kind": "log_matrix_package",
        "version": __version__,
        "config": cfg.to_json(),
        "context": ctx_to_json(pkg.ctx),
        "k": pkg.k,
        "prec": pkg.prec,
        "roots": {"alpha": scalar_to_json(wd.roots.alpha), "beta": scalar_to_json(wd.roots.beta),
                  "valuations": [str(v) for v in wd.roots.valuations()]},
        "A_phi": _mat(wd.A_phi, scalar_to_json),
        "Q": _mat(wd.Q, scalar_to_json),
        "M": _mat(pkg.M, series_to_json),
        "QinvM": _mat(pkg.QinvM, series_to_json),
        "detQinvM": series_to_json(pkg.detQinvM),
        "H": _mat(pkg.H, series_to_json),
        "meta": meta,
    }


def _roots_for(cfg, prec, ctx=None):
    return hecke_roots(cfg.p, cfg.k_engine, Fraction(cfg.a), Fraction(cfg.v_unit), prec,
                       u=cfg.u or None, ctx=ctx)


def package_from_json(d):
    cfg = JobConfig.from_json(d["config"])
    meta = d.get("meta", {})
    W = int(meta.get("working_digits", d["prec"])) + 8
    ctx = ctx_from_json(d["context"], W)
    roots = _roots_for(cfg, W, ctx if ctx.degree == 2 else None)
    wd = build_wach_data(cfg.p, cfg.k_engine, Fraction(cfg.a), Fraction(cfg.v_unit), None,
                         int(meta.get("N", cfg.npi)), W, roots=roots,
                         slope_convention=cfg.slope_convention, u=cfg.u or None)
    E = wd.ctx
    if E.key != ctx.key:
        raise CliError("package", "stored context does not match the configuration")
    M = _mat(d["M"], lambda s: series_from_json(E, s))
    QinvM = _mat(d["QinvM"], lambda s: series_from_json(E, s))
    det = series_from_json(E, d["detQinvM"])
    H = _mat(d["H"], lambda s: series_from_json(E, s))
    return LogMatrixPackage(M, QinvM, det, H, wd, int(d["k"]), int(d["prec"]), dict(meta)), cfg


def build_from_config(cfg, ctx=None):
    cfg.validate()
    guard = cfg.guard_digits()
    W = cfg.prec + guard + 8
    try:
        roots = _roots_for(cfg, W, ctx)
        wd = build_wach_data(cfg.p, cfg.k_engine, Fraction(cfg.a), Fraction(cfg.v_unit), None,
                             cfg.npi, W, roots=roots, slope_convention=cfg.slope_convention,
                             u=cfg.u or None)
    except ValueError as e:
        kind = "slope floor" if "slope floor" in str(e) else "roots"
        raise CliError(kind, str(e))
    return build_log_matrix(wd, cfg.npi, cfg.depth, cfg.prec, guard)


# file helpers ------------------------------------------------------------------------

def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def write_json(path, obj):
    text = dumps(obj)
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _envelope(kind, cfg, payload):
    out = {"kind": kind, "version": __version__, "config": cfg.to_json() if cfg else None}
    out.update(payload)
    return out


# commands ----------------------------------------------------------------------------

def _config_from_args(args):
    env = os.environ.get(PREC_ENV)
    prec = args.prec if args.prec is not None else (int(env) if env else 40)
    return JobConfig(p=args.p, k=args.k, a=args.ap, v_unit=args.v, prec=prec,
                     npi=args.npi if args.npi is not None else min_truncation(args.p, prec),
                     depth=args.depth, guard=args.guard, seed=getattr(args, "seed", 0), u=args.u,
                     slope_convention=args.slope_convention, weight_convention=args.weight_convention)


def cmd_build_matrix(args):
    cfg = _config_from_args(args)
    ctx = None
    if args.context_from:
        ctx = ctx_from_json(read_json(args.context_from)["context"], cfg.prec)
    pkg = build_from_config(cfg, ctx)
    write_json(args.output, package_to_json(pkg, cfg))
    return 0


def cmd_verify_matrix(args):
    d = read_json(args.package)
    pkg, cfg = package_from_json(d)
    n_list = tuple(int(x) for x in args.n_list.split(",") if x)
    rep = verify_log_matrix(pkg, n_list=n_list, t_max=args.t_max)
    write_json(args.output, _envelope("verification_report", cfg, {"report": _jsonable(rep)}))
    return 0 if rep["pass"] else 1


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    return x


def cmd_synth(args):
    d = read_json(args.package)
    pkg, cfg = package_from_json(d)
    cfg.seed = args.seed
    if args.package_pbar:
        pkg_b, cfg_b = package_from_json(read_json(args.package_pbar))
        sq = synth_quadruple(args.seed, pkg, pkg_b, (args.degree, args.degree))
        L = recompose_quadruple(sq, pkg, pkg_b)
        payload = {"quadruple": _mat(sq.matrix(), twovar_to_json), "L": _mat(L, twovar_to_json),
                   "context": ctx_to_json(pkg.ctx), "config_pbar": cfg_b.to_json()}
        write_json(args.output, _envelope("synthetic_quadruple", cfg, payload))
        return 0
    sp = synth_signed_pair(args.seed, args.degree, pkg)
    pair = recompose(sp, pkg)
    payload = {"signed": {"F_sharp": series_to_json(sp.F_sharp), "F_flat": series_to_json(sp.F_flat)},
               "admissible": {"F_alpha": series_to_json(pair.F_alpha), "F_beta": series_to_json(pair.F_beta)},
               "degree": args.degree, "context": ctx_to_json(pkg.ctx)}
    write_json(args.output, _envelope("synthetic_pair", cfg, payload))
    return 0


def cmd_decompose1(args):
    pkg, cfg = package_from_json(read_json(args.package))
    d = read_json(args.input)
    ad = d["admissible"] if "admissible" in d else d
    pair = AdmissiblePair(series_from_json(pkg.ctx, ad["F_alpha"]), series_from_json(pkg.ctx, ad["F_beta"]),
                          pkg.roots)
    try:
        sp = decompose_pair(pair, pkg, degree=args.degree)
    except ArithmeticError as e:
        raise CliError("unbounded", str(e))
    payload = {"F_sharp": series_to_json(sp.F_sharp), "F_flat": series_to_json(sp.F_flat),
               "certificates": _jsonable(sp.certificates)}
    if "signed" in d:
        ref = d["signed"]
        D = sp.F_sharp.N
        ag = min(sp.F_sharp.agreement(series_from_json(pkg.ctx, ref["F_sharp"]).truncate(D)),
                 sp.F_flat.agreement(series_from_json(pkg.ctx, ref["F_flat"]).truncate(D)))
        payload["agreement_with_source"] = str(ag)
    write_json(args.output, _envelope("signed_pair", cfg, payload))
    return 0


def cmd_decompose2(args):
    pkg_p, cfg = package_from_json(read_json(args.package))
    pkg_b, cfg_b = package_from_json(read_json(args.package_pbar))
    d = read_json(args.input)
    ctx = pkg_p.ctx
    L = _mat(d["L"], lambda x: twovar_from_json(ctx, x))
    try:
        sq = decompose_two_stage(L, pkg_p, pkg_b, order=args.order, degree=args.degree)
    except ArithmeticError as e:
        raise CliError("unbounded", str(e))
    payload = {"quadruple": _mat(sq.matrix(), twovar_to_json), "certificates": _jsonable(sq.certificates),
               "identity_residual": str(identity_residual(L, sq, pkg_p, pkg_b)),
               "config_pbar": cfg_b.to_json()}
    if "quadruple" in d:
        ref = _mat(d["quadruple"], lambda x: twovar_from_json(ctx, x))
        n1, n2 = sq.L_ss.N1, sq.L_ss.N2
        ref = SignedQuadruple(*[x.truncate(n1, n2) for row in ref for x in row])
        payload["agreement_with_source"] = str(sq.agreement(ref))
    write_json(args.output, _envelope("signed_quadruple", cfg, payload))
    return 0


def cmd_eval(args):
    d = read_json(args.input)
    ctx = ctx_from_json(d["context"], int(d["series"]["aprec"]) + 8)
    f = series_from_json(ctx, d["series"])
    pt = CharacterPoint(args.j, args.n, args.zeta)
    try:
        val = eval_at_character(f, pt, exact=args.polynomial)
    except ArithmeticError as e:
        raise CliError("precision", str(e))
    payload = {"point": pt.to_json(), "value": cyclo_to_json(val), "valuation": str(val.valuation())}
    write_json(args.output, _envelope("evaluation", None, payload))
    return 0


# parser ------------------------------------------------------------------------------

def _add_job_flags(sp):
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--ap", required=True, help="a_p as an integer or fraction")
    sp.add_argument("--v", default="1", help="the unit v in the Hecke constant v p^(k-1)")
    sp.add_argument("--prec", type=int, default=None, help="p-adic digits (default $%s or 40)" % PREC_ENV)
    sp.add_argument("--npi", type=int, default=None,
                    help="pi-truncation (default: enough for verification at this p)")
    sp.add_argument("--depth", type=int, default=64)
    sp.add_argument("--guard", type=int, default=-1)
    sp.add_argument("--u", type=int, default=0)
    sp.add_argument("--slope-convention", default="default", choices=["default", "bianchi", "bianchi_alt"])
    sp.add_argument("--weight-convention", default="engine", choices=["engine", "bianchi"])


def make_parser():
    ap = argparse.ArgumentParser(prog="logmatrix", description="Logarithmic matrices and signed decompositions.")
    ap.add_argument("--version", action="version", version="logmatrix " + __version__)
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build-matrix", help="build a logarithmic-matrix package")
    _add_job_flags(b)
    b.add_argument("--context-from", default=None,
                   help="package file whose coefficient field the roots must be expressed in")
    b.add_argument("-o", "--output", default="-")
    b.set_defaults(func=cmd_build_matrix)

    v = sub.add_parser("verify-matrix", help="run the three verdicts on a package")
    v.add_argument("package")
    v.add_argument("--n-list", default="2,3")
    v.add_argument("--t-max", type=int, default=4)
    v.add_argument("-o", "--output", default="-")
    v.set_defaults(func=cmd_verify_matrix)

    s = sub.add_parser("synth", help="synthetic signed pair (or quadruple with --package-pbar)")
    s.add_argument("package")
    s.add_argument("--package-pbar", default=None)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--degree", type=int, default=30)
    s.add_argument("-o", "--output", default="-")
    s.set_defaults(func=cmd_synth)

    d1 = sub.add_parser("decompose1", help="one-variable signed decomposition")
    d1.add_argument("package")
    d1.add_argument("input")
    d1.add_argument("--degree", type=int, default=None)
    d1.add_argument("-o", "--output", default="-")
    d1.set_defaults(func=cmd_decompose1)

    d2 = sub.add_parser("decompose2", help="two-variable two-stage decomposition")
    d2.add_argument("package")
    d2.add_argument("package_pbar")
    d2.add_argument("input")
    d2.add_argument("--order", default="T1_first", choices=["T1_first", "T2_first"])
    d2.add_argument("--degree", type=int, default=None)
    d2.add_argument("-o", "--output", default="-")
    d2.set_defaults(func=cmd_decompose2)

    e = sub.add_parser("eval", help="evaluate a series at a character point")
    e.add_argument("input", help="JSON with 'context' and 'series'")
    e.add_argument("--j", type=int, default=0)
    e.add_argument("--n", type=int, default=1)
    e.add_argument("--zeta", type=int, default=1)
    e.add_argument("--polynomial", action="store_true", help="treat the series as an exact polynomial")
    e.add_argument("-o", "--output", default="-")
    e.set_defaults(func=cmd_eval)
    return ap


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        sys.stdout.write(dumps({"error": e.kind, "message": str(e), "version": __version__}))
        return e.code
    except (OSError, KeyError, ValueError, TypeError) as e:
        sys.stdout.write(dumps({"error": "input", "message": "%s: %s" % (type(e).__name__, e),
                                "version": __version__}))
        return 4


if __name__ == "__main__":
    sys.exit(main())
