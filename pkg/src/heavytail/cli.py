"""Command-line front end: ``heavytail <subcommand> [options]``.

Every run prints a document that embeds the tool version and the full run
configuration.  Exit status: 0 success, 1 failed verdict or violation,
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from . import cheb, certify, densities, extremal
from .gamma_moments import gamma_cumulants, moments_from_cumulants, subfactorial
from .ratpoly import format_rational

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

BODY_ALIASES = {"square": ("cube", 2), "disk": ("ball", 2), "triangle": ("simplex", 2),
                "octahedron": ("cross", 3), "tetrahedron": ("simplex", 3)}


class UsageError(Exception):
    pass


def _default_jobs() -> int:
    return os.cpu_count() or 1


def _default_seed() -> int:
    env = os.environ.get("HEAVYTAIL_SEED")
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"HEAVYTAIL_SEED must be an integer, got {env!r}")


# ---------------------------------------------------------------------------
# subcommands; each returns (result, rows, exit_code)


def cmd_certify(args):
    if args.qmax < 4 or args.qmax % 2:
        raise UsageError("--qmax must be an even integer >= 4")
    certs = certify.certify_range(args.qmax, args.jobs)
    records = [c.to_record() for c in certs]
    header = ["q", "verdict", "divisible", "odd_coeffs_zero", "nonpositive_except_i1",
              "a1_positive", "discriminant", "h_tilde_coeffs"]
    rows = [[r["q"], r["verdict"], r["divisible"], r["odd_coeffs_zero"],
             r["nonpositive_except_i1"], r["a1_positive"], r["discriminant"],
             " ".join(r["h_tilde_coeffs"])] for r in records]
    ok = all(c.passed for c in certs)
    result = {"all_pass": ok, "count": len(records), "records": records}
    return result, (header, rows), EXIT_OK if ok else EXIT_FAIL


def cmd_moments(args):
    if args.nmax < 0:
        raise UsageError("--nmax must be >= 0")
    ks = gamma_cumulants(args.nmax)
    mus = moments_from_cumulants(ks, args.nmax)
    rows, records, ok = [], [], True
    for n in range(args.nmax + 1):
        sf = subfactorial(n)
        match = mus[n] == sf
        ok &= match
        records.append({"n": n, "cumulant": format_rational(ks[n]),
                        "moment": format_rational(mus[n]), "subfactorial": str(sf),
                        "match": match})
        rows.append([n, records[-1]["cumulant"], records[-1]["moment"], sf, match])
    header = ["n", "cumulant", "moment", "subfactorial", "match"]
    return ({"all_match": ok, "records": records}, (header, rows),
            EXIT_OK if ok else EXIT_FAIL)


def cmd_gamma_density(args):
    s = args.s
    if not 0.0 <= s <= 1.0:
        raise UsageError("-s must lie in [0, 1]")
    if args.samples < 2:
        raise UsageError("--samples must be >= 2")
    d = densities.gamma_s_density(s)
    lo, hi = args.xmin, args.xmax
    if not lo < hi:
        raise UsageError("--xmin must be below --xmax")
    xs = np.linspace(lo, hi, args.samples)
    pdf, cdf = d.pdf(xs), d.cdf(xs)
    moments = []
    for p in (2, 3, 4):
        m, e = densities.gamma_s_moment(s, p, with_error=True)
        ms, es = densities.gamma_s_signed_moment(s, p, with_error=True)
        moments.append({"p": p, "abs_moment": m, "abs_error_estimate": e,
                        "signed_moment": ms, "signed_error_estimate": es})
    rows = [[f"{x:.17g}", f"{f:.17g}", f"{c:.17g}"] for x, f, c in zip(xs, pdf, cdf)]
    result = {"s": s, "breakpoint": d.breakpoint, "support": list(d.support),
              "x": xs.tolist(), "pdf": pdf.tolist(), "cdf": cdf.tolist(),
              "moments": moments}
    return result, (["x", "pdf", "cdf"], rows), EXIT_OK


def _scan_result(report: extremal.ScanReport):
    out = report.to_dict()
    if "error_estimate" in report.extra:
        out["error_estimate"] = float(report.extra["error_estimate"])
    elif report.errors is not None:
        out["error_estimate"] = float(report.errors[report.argmax_index])
    return out, report.csv_rows()


def _check_pq(args):
    if not 1.0 < args.p < args.q:
        raise UsageError("need 1 < p < q")


def cmd_ratio_scan(args):
    _check_pq(args)
    tol = args.tol if args.tol is not None else extremal.S_TOL
    rep = extremal.norm_ratio_scan(args.p, args.q, args.grid, refine=not args.no_refine,
                                   tol=tol, jobs=args.jobs)
    out, rows = _scan_result(rep)
    return out, rows, EXIT_OK


def cmd_signed_scan(args):
    _check_pq(args)
    rep = extremal.signed_ratio_scan(args.p, args.q, args.grid, jobs=args.jobs)
    out, rows = _scan_result(rep)
    return out, rows, EXIT_OK


def cmd_phi_scan(args):
    if args.phi not in extremal.PHI_CATALOG:
        raise UsageError(f"unknown phi {args.phi!r}; choose from {sorted(extremal.PHI_CATALOG)}")
    rep = extremal.phi_scan(args.phi, args.grid, jobs=args.jobs)
    out, rows = _scan_result(rep)
    return out, rows, EXIT_OK


def _resolve_body(args):
    kind, n = args.body, args.n
    if kind in BODY_ALIASES:
        kind, n_alias = BODY_ALIASES[kind]
        if args.n is not None and args.n != n_alias:
            raise UsageError(f"--body {args.body} implies -n {n_alias}")
        n = n_alias
    if kind not in densities.BODY_KINDS:
        raise UsageError(f"unknown body {args.body!r}")
    if n is None:
        raise UsageError("-n is required for this body")
    if not 2 <= n <= 6:
        raise UsageError("-n must be between 2 and 6")
    if args.mode == "exact" and n > 3:
        raise UsageError("exact mode supports n in {2, 3}")
    return densities.BodySampler(kind, n, args.seed)


def _alpha(args, fn):
    _check_pq(args)
    sampler = _resolve_body(args)
    body = sampler if args.mode == "mc" or (args.mode == "auto" and sampler.n > 3) else sampler.body
    tol = args.tol if args.tol is not None else extremal.DIRECTION_TOL
    rep = fn(body, args.p, args.q, direction_budget=args.grid, mode=args.mode,
             tol=tol, N=args.samples, seed=args.seed)
    out, rows = _scan_result(rep)
    return out, rows, EXIT_OK


def cmd_alpha(args):
    return _alpha(args, extremal.alpha_body)


def cmd_alpha_star(args):
    return _alpha(args, extremal.alpha_star_body)


CHEB_SYSTEMS = {
    "power-sgn-1": ("power-sgn", 1),
    "power-sgn-2": ("power-sgn", 2),
    "power-sgn-3": ("power-sgn", 3),
    "power-sgn-4": ("power-sgn", 4),
    "smooth-exp": None,
}


def cmd_cheb(args):
    if args.system not in CHEB_SYSTEMS:
        raise UsageError(f"unknown system {args.system!r}")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    system = CHEB_SYSTEMS[args.system] or cheb.FuncSystem.smooth(3)
    summary = cheb.cheb_trial(system, args.trials, args.seed, jobs=args.jobs)
    d = summary.to_dict()
    header = ["system", "order", "trials", "seed", "max_roots", "violations"]
    rows = [[args.system, d["order"], d["trials"], d["seed"], d["max_roots"], d["violations"]]]
    return d, (header, rows), EXIT_OK if summary.violations == 0 else EXIT_FAIL


def cmd_thm4(args):
    if args.nmax < 4 or args.nmax % 2:
        raise UsageError("--nmax must be an even integer >= 4")
    if args.grid < 1:
        raise UsageError("--grid must be >= 1")
    rep = extremal.verify_thm4(args.nmax, args.grid)
    return rep.to_dict(), rep.csv_rows(), EXIT_OK if rep.ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser and output


def _add_common(p, grid_default=None):
    p.add_argument("--seed", type=int, default=None,
                   help="random seed (default: $HEAVYTAIL_SEED or 0)")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")
    p.add_argument("--tol", type=float, default=None, help="refinement tolerance override")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="write output here instead of stdout")
    if grid_default is not None:
        p.add_argument("--grid", type=int, default=grid_default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heavytail",
                                     description="Heavy-tail extremal checks for log-concave marginals.")
    parser.add_argument("--version", action="version", version=f"heavytail {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", help="exact coefficient-sign certificates")
    p.add_argument("--qmax", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("moments", help="cumulants and moments of Gamma")
    p.add_argument("--nmax", type=int, default=10)
    _add_common(p)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("gamma-density", help="tabulate the Gamma^s density")
    p.add_argument("-s", type=float, required=True)
    p.add_argument("--samples", type=int, default=201, help="number of x points")
    p.add_argument("--xmin", type=float, default=-6.0)
    p.add_argument("--xmax", type=float, default=6.0)
    _add_common(p)
    p.set_defaults(func=cmd_gamma_density)

    for name, func, helptext in (("ratio-scan", cmd_ratio_scan, "norm ratio over Gamma^s"),
                                 ("signed-scan", cmd_signed_scan, "signed ratio over Gamma^s")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("-p", type=float, required=True)
        p.add_argument("-q", type=float, required=True)
        if name == "ratio-scan":
            p.add_argument("--no-refine", action="store_true")
        _add_common(p, extremal.DEFAULT_GRID)
        p.set_defaults(func=func)

    p = sub.add_parser("phi-scan", help="E[phi] over unit-variance Gamma^s")
    p.add_argument("--phi", default="cube", help=f"one of {', '.join(sorted(extremal.PHI_CATALOG))}")
    _add_common(p, extremal.DEFAULT_GRID)
    p.set_defaults(func=cmd_phi_scan)

    for name, func in (("alpha", cmd_alpha), ("alpha-star", cmd_alpha_star)):
        p = sub.add_parser(name, help="direction scan over a reference body")
        p.add_argument("--body", required=True,
                       help="simplex, cube, ball, cross (or square, disk, triangle, ...)")
        p.add_argument("-n", type=int, default=None)
        p.add_argument("-p", type=float, required=True)
        p.add_argument("-q", type=float, required=True)
        p.add_argument("--mode", choices=("auto", "exact", "mc"), default="auto")
        p.add_argument("--samples", type=int, default=200_000, help="Monte Carlo sample size")
        _add_common(p, None)
        p.add_argument("--grid", type=int, default=None, help="direction budget")
        p.set_defaults(func=func)

    p = sub.add_parser("cheb", help="randomised Chebyshev-system root counts")
    p.add_argument("--system", default="power-sgn-4", choices=sorted(CHEB_SYSTEMS))
    p.add_argument("--trials", type=int, default=1000)
    _add_common(p)
    p.set_defaults(func=cmd_cheb)

    p = sub.add_parser("thm4", help="strict moment bound sweep over cos/sin mixtures")
    p.add_argument("--nmax", type=int, default=20)
    _add_common(p, 97)
    p.set_defaults(func=cmd_thm4)
    return parser


def _config(args) -> dict:
    skip = {"func", "out", "format"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _clean(x):
    """Replace non-finite floats so the output is strict JSON."""
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.floating,)):
        return _clean(float(x))
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, Fraction):
        return format_rational(x)
    return x


def render(args, result, rows, code) -> str:
    config = _config(args)
    if args.format == "json":
        doc = {"tool": "heavytail", "version": __version__, "command": args.command,
               "config": config, "exit_code": code, "result": result}
        return json.dumps(_clean(doc), indent=2, sort_keys=True, allow_nan=False) + "\n"
    buf = io.StringIO()
    buf.write(f"# heavytail {__version__}\n")
    buf.write("# config: " + json.dumps(_clean(config), sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    header, body = rows
    writer.writerow(header)
    writer.writerows(body)
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        if args.seed is None:
            args.seed = _default_seed()
        if args.jobs is None:
            args.jobs = _default_jobs()
        if args.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        result, rows, code = args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"heavytail {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(args, result, rows, code)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
