"""Command-line entry point orchestrating every module.

Exit codes: 0 success, 1 a check failed, 2 usage error.  All tabular
output goes through the reporting module (CSV default, JSON mirror), and
written files get sidecar manifests.  A --config file supplies experiment
parameters; explicit flags override it.  POWERLAB_WORKERS is accepted for
the data-parallel scans (the numpy kernels are already vectorised, so it
is advisory and recorded in the manifest).
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import arcs as arcs_mod
from . import arithmetic as ak
from . import counting, exponents, singular
from . import sums as sums_mod
from .params import ConfigError, GlobalParameters, load_config
from .reporting import emit_report

__all__ = ["main", "dispatch"]


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="powerlab",
                                description="circle-method laboratory")
    p.add_argument("--config", help="key=value parameter file")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("constants", help="audit the derived constants")
    csub = c.add_subparsers(dest="action", required=True)
    v = csub.add_parser("verify")
    v.add_argument("--json", metavar="PATH", help="write the table as JSON")
    v.add_argument("--csv", metavar="PATH", help="write the table as CSV")

    k = sub.add_parser("kernel", help="integer and modular kernel")
    ksub = k.add_subparsers(dest="action", required=True)
    g = ksub.add_parser("gauss-sum")
    g.add_argument("--q", type=int, required=True)
    g.add_argument("--a", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--out", metavar="PATH")
    r = ksub.add_parser("radical")
    r.add_argument("--d", type=int, required=True)
    r.add_argument("--k", type=int, required=True)
    s = ksub.add_parser("smooth")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--count-only", action="store_true")

    a = sub.add_parser("arcs", help="Farey dissection")
    asub = a.add_subparsers(dest="action", required=True)
    ab = asub.add_parser("build")
    ab.add_argument("--n", type=int, required=True)
    ab.add_argument("--q", type=float, required=True)
    ab.add_argument("--star", action="store_true")
    ab.add_argument("--out", metavar="PATH")
    ac = asub.add_parser("classify")
    ac.add_argument("--n", type=int, required=True)
    ac.add_argument("--q", type=float, required=True)
    ac.add_argument("--alpha", type=float, required=True)

    se = sub.add_parser("sums", help="generating functions")
    ssub = se.add_subparsers(dest="action", required=True)
    ev = ssub.add_parser("eval")
    ev.add_argument("--kind", choices=["F", "f", "g"], required=True)
    ev.add_argument("--k", type=int, required=True)
    ev.add_argument("--alpha", type=float, required=True)
    ev.add_argument("--n", type=int, required=True)
    ev.add_argument("--r", type=int, help="prime-product length override")
    ev.add_argument("--R", type=int, help="smoothness bound override")
    ev.add_argument("--out", metavar="PATH")
    pv = ssub.add_parser("parseval")
    pv.add_argument("--kind", choices=["F", "f", "g"], required=True)
    pv.add_argument("--k", type=int, required=True)
    pv.add_argument("--n", type=int, required=True)
    pv.add_argument("--tol", type=float, default=1e-4)
    pv.add_argument("--Q", type=float, default=50.0, help="arc threshold")
    pv.add_argument("--moment", type=int, default=2)
    pv.add_argument("--r", type=int)
    pv.add_argument("--R", type=int)

    sr = sub.add_parser("series", help="singular series")
    sr.add_argument("--n", type=int, required=True)
    sr.add_argument("--qmax", type=int, default=400)
    sr.add_argument("--per-q", metavar="PATH", help="write per-q CSV")
    sr.add_argument("--degrees", default="full",
                    help="'full' or comma list of complete-sum degrees")

    it = sub.add_parser("integral", help="singular integral")
    it.add_argument("--n", type=int, required=True)
    it.add_argument("--B", default="auto")
    it.add_argument("--pair", action="store_true",
                    help="two-variable analogue (v2 v3 only)")

    mc = sub.add_parser("maincompare", help="exact count vs main term")
    mc.add_argument("--n-start", type=int, required=True)
    mc.add_argument("--n-count", type=int, required=True)
    mc.add_argument("--signature", default="2,3")
    mc.add_argument("--out", metavar="PATH")

    ct = sub.add_parser("count", help="representation counting")
    ctsub = ct.add_subparsers(dest="action", required=True)
    tb = ctsub.add_parser("table")
    tb.add_argument("--signature", default="2,3,4,5,6,7,8,9,10,11,12,13,14")
    tb.add_argument("--limit", type=int, required=True)
    tb.add_argument("--mode", choices=["count", "bitset"], default="count")
    tb.add_argument("--out", required=True)
    ex = ctsub.add_parser("exceptional")
    ex.add_argument("--limit", type=int, required=True)
    ex.add_argument("--signature", default="2,3,4,5,6,7,8,9,10,11,12,13,14")
    mv = ctsub.add_parser("meanvalue")
    mv.add_argument("--spec", required=True,
                    help="factors like 'f3^4 g5^2 p2^2'")
    mv.add_argument("--n", type=int, default=10 ** 6)
    mv.add_argument("--Y", type=int, help="smooth range bound override")
    mv.add_argument("--R", type=int, help="smoothness bound override")
    return p


def _params_from(ns: argparse.Namespace, **overrides) -> GlobalParameters:
    if getattr(ns, "config", None):
        base = load_config(ns.config)
        fields = {"n": base.n, "lam": base.lam, "R": base.R, "r_k": base.r_k,
                  "nu": base.nu, "A": base.A}
    else:
        fields = {"n": 10 ** 6}
    fields.update({k: v for k, v in overrides.items() if v is not None})
    return GlobalParameters(**fields)


_KIND = {"F": "weighted", "f": "smooth", "g": "prime_product"}


def _cmd_constants(ns) -> int:
    rows = exponents.check_rows_as_dicts(exponents.verify_all())
    fmt = "json" if ns.json else "csv"
    path = ns.json or ns.csv
    text = emit_report(rows, path, fmt)
    if not path:
        sys.stdout.write(text)
    ok = all(r["pass"] for r in rows)
    print(f"# {len(rows)} checks, {'all pass' if ok else 'FAILURES PRESENT'}")
    return 0 if ok else 1


def _cmd_kernel(ns) -> int:
    if ns.action == "gauss-sum":
        val = ak.complete_sum(ns.q, ns.a, ns.k)
        ratio = abs(val) / (ns.q * ak.omega_k(ns.q, ns.k))
        rows = [{"q": ns.q, "a": ns.a, "k": ns.k, "re": val.re, "im": val.im,
                 "abs": abs(val), "ratio_vs_majorant": ratio}]
        sys.stdout.write(emit_report(rows, getattr(ns, "out", None)))
        return 0
    if ns.action == "radical":
        print(ak.k_radical(ns.d, ns.k))
        return 0
    sm = ak.smooth_sieve(ns.p, ns.r)
    if ns.count_only:
        print(len(sm))
    else:
        print(" ".join(str(int(x)) for x in sm.members))
    return 0


def _cmd_arcs(ns) -> int:
    params = _params_from(ns, n=ns.n)
    system = arcs_mod.build(params, ns.q, star=getattr(ns, "star", False))
    if ns.action == "build":
        rows = [{"q": int(q), "a": int(a), "center": float(c),
                 "halfwidth": float(h)}
                for q, a, c, h in zip(system.qs, system.aas, system.centers,
                                      system.halfwidths)]
        text = emit_report(rows, ns.out)
        if not ns.out:
            sys.stdout.write(text)
        if system.overlap_warning:
            print("# warning: arcs may overlap (2Q > sqrt(n))", file=sys.stderr)
        return 0
    label = arcs_mod.classify(ns.alpha, system)
    print(f"kind={label.kind} q={label.q} a={label.a} beta={label.beta:.12g}")
    return 0


def _cmd_sums(ns) -> int:
    r_k = {k: ns.r for k in range(5, 12)} if ns.r else None
    overrides = {"n": ns.n, "R": ns.R}
    if r_k:
        overrides["r_k"] = r_k
    params = _params_from(ns, **overrides)
    spec = sums_mod.SumSpec(_KIND[ns.kind], ns.k, params)
    if ns.action == "eval":
        val = sums_mod.eval_sum(spec, ns.alpha)
        rows = [{"alpha": ns.alpha, "re": val.re, "im": val.im,
                 "abs": abs(val), "terms": val.terms, "at_zero": val.at_zero}]
        text = emit_report(rows, getattr(ns, "out", None))
        sys.stdout.write(text)
        return 0
    system = arcs_mod.build(params, ns.Q)
    res = sums_mod.parseval_quadrature(spec, system, moment=ns.moment)
    print(f"major={res.major:.12g} minor={res.minor:.12g} "
          f"total={res.total:.12g} exact={res.exact:.12g} "
          f"rel_error={res.rel_error:.3e}")
    return 0 if res.rel_error <= ns.tol else 1


def _cmd_series(ns) -> int:
    if ns.degrees == "full":
        complete, coprime = singular.COMPLETE_DEGREES, singular.COPRIME_DEGREES
    else:
        complete = tuple(int(t) for t in ns.degrees.split(","))
        coprime = ()
    part = singular.singular_series(ns.n, ns.qmax, complete, coprime)
    if ns.per_q:
        rows = [{"q": q + 1, "A": float(a)} for q, a in enumerate(part.Aq)]
        emit_report(rows, ns.per_q)
    print(f"S(n;{ns.qmax}) = {part.partial:.12g}  tail<= {part.tail_estimate:.3e}"
          f"  C= {part.measured_constant:.6g}")
    return 0 if part.partial > 0 else 1


def _cmd_integral(ns) -> int:
    params = _params_from(ns, n=ns.n)
    B = "auto" if ns.B == "auto" else float(ns.B)
    if ns.pair:
        res = singular.singular_integral(ns.n, params, B=B, weighted=(2, 3),
                                         gk=(), smooth=())
    else:
        res = singular.singular_integral(ns.n, params, B=B)
    flag = "" if res.decayed else "  # accuracy flag: integrand not decayed"
    print(f"J(n;B) = {res.value:.12g}  B = {res.B:.6g}{flag}")
    return 0


def _cmd_maincompare(ns) -> int:
    degrees = tuple(int(t) for t in ns.signature.split(","))
    rep = singular.main_term_vs_count(ns.n_start, ns.n_count, degrees=degrees)
    rows = [{"n": r["n"], "count": r["exact"], "mainterm": r["main"],
             "ratio": (r["exact"] / r["main"] if r["main"] else math.inf)}
            for r in rep.rows]
    text = emit_report(rows, ns.out)
    if not ns.out:
        sys.stdout.write(text)
    print(f"# window ratio sum(count)/sum(mainterm) = {rep.ratio:.4f} "
          f"({rep.hits()} hits)")
    return 0


def _parse_signature(text: str) -> counting.PowerSignature:
    ks = [int(t) for t in text.split(",")]
    return counting.PowerSignature(tuple(counting.SignatureTerm(k) for k in ks))


_MV_KIND = {"f": "smooth", "g": "prime_product", "p": "plain"}


def _cmd_count(ns) -> int:
    if ns.action == "table":
        sig = _parse_signature(ns.signature)
        table = counting.build_table(sig, ns.limit, mode=ns.mode)
        counting.save_table(table, ns.out)
        print(f"# wrote {ns.out} mode={ns.mode} N={ns.limit} "
              f"saturated={table.saturated_cells}")
        return 0
    if ns.action == "exceptional":
        sig = _parse_signature(ns.signature)
        table = counting.build_table(sig, ns.limit, mode="bitset")
        exc = counting.exceptional_set(table)
        print(" ".join(str(int(x)) for x in exc))
        print(f"# {exc.size} exceptional values, largest = "
              f"{int(exc.max()) if exc.size else 'none'}")
        return 0
    # meanvalue: tokens like f3^4 g5^2 p2^2; --Y/--R pin the smooth ranges
    params = _params_from(ns, n=ns.n, R=ns.R)
    factors = []
    for token in ns.spec.replace(";", " ").split():
        head, _, mom = token.partition("^")
        kind, k = head[0], int(head[1:])
        if kind not in _MV_KIND:
            raise ConfigError(f"unknown factor kind in {token!r}")
        term = counting.SignatureTerm(k, 1, _MV_KIND[kind], Y=ns.Y, R=ns.R)
        factors.append((term, int(mom or 2)))
    val = counting.mean_value(factors, params)
    print(val)
    return 0


def dispatch(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0,) else 0
    os.environ.setdefault("POWERLAB_WORKERS", "1")
    try:
        if ns.command == "constants":
            return _cmd_constants(ns)
        if ns.command == "kernel":
            return _cmd_kernel(ns)
        if ns.command == "arcs":
            return _cmd_arcs(ns)
        if ns.command == "sums":
            return _cmd_sums(ns)
        if ns.command == "series":
            return _cmd_series(ns)
        if ns.command == "integral":
            return _cmd_integral(ns)
        if ns.command == "maincompare":
            return _cmd_maincompare(ns)
        if ns.command == "count":
            return _cmd_count(ns)
        parser.error(f"unknown command {ns.command!r}")
    except (ConfigError, ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 2


def main() -> None:
    sys.exit(dispatch())
