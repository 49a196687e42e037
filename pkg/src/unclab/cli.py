"""Command-line interface.

Exit codes: 0 success, 2 usage error, otherwise the number of failures
(capped at 125) for ``table1`` and ``check-all``.
"""

import argparse
import math
import os
import sys

import numpy as np

from . import report
from .errors import InconsistencyError, UnclabError
from .moments import MOMENTUM_ROUTE, uncertainty
from .states import FAMILIES, FAMILY_PARAMS, ingest_tabulated, make_state, read_tabulated_csv

DEFAULT_TOL = 1e-8
KINKED_MOMENTUM_TOL = 1e-3
TOL_ENV = "UNCLAB_DEFAULT_TOL"
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (math.isfinite(value) and value > 0):
        raise argparse.ArgumentTypeError(f"must be a positive number: {text!r}")
    return value


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return value


def _float_list(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {text!r}") from None


def closed_tolerance(args):
    if getattr(args, "tol", None) is not None:
        return args.tol
    env = os.environ.get(TOL_ENV)
    if env:
        try:
            return _positive_float(env)
        except argparse.ArgumentTypeError as exc:
            raise UsageError(f"{TOL_ENV}: {exc}") from None
    return DEFAULT_TOL


def _common():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "json", "csv"), default="human")
    common.add_argument("--output", help="write the result here instead of stdout")
    common.add_argument("--threads", type=_positive_int, default=1)
    common.add_argument("--no-meta", action="store_true",
                        help="omit the metadata header (tool, version, timestamp)")
    return common


def _state_args(parser, with_selector=True):
    if with_selector:
        parser.add_argument("selector", choices=FAMILIES)
    parser.add_argument("--alpha", type=_positive_float)
    parser.add_argument("--a", type=_positive_float)
    parser.add_argument("--s", type=_positive_float)
    parser.add_argument("--lambda", dest="lam", type=_positive_float)
    parser.add_argument("--file", help="x,psi CSV for the tabulated selector")
    parser.add_argument("--kinks", type=_float_list, default=[],
                        help="comma-separated kink locations for tabulated input")


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="unclab", description=__doc__.splitlines()[0],
                                     parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", parents=[common], help="list catalog states")

    p = sub.add_parser("uncertainty", parents=[common], help="uncertainty product of one state")
    _state_args(p)
    p.add_argument("--momentum", action="store_true", help="add the momentum-space route")
    p.add_argument("--pmax", type=_positive_float)
    p.add_argument("--tol", type=_positive_float)

    p = sub.add_parser("table1", parents=[common], help="reproduce the seven tabulated rows")
    p.add_argument("--tol", type=_positive_float)
    p.add_argument("--no-momentum", action="store_true")

    p = sub.add_parser("limits", parents=[common], help="deep-well limit scan")
    p.add_argument("family", choices=("srm", "morse"))
    p.add_argument("--min", dest="lo", type=_positive_float, default=2.0)
    p.add_argument("--max", dest="hi", type=_positive_float, default=2.0 ** 20)
    p.add_argument("--points", type=_positive_int, default=20)

    p = sub.add_parser("fourier", parents=[common], help="momentum-space profile")
    _state_args(p)
    p.add_argument("--pmax", type=_positive_float)
    p.add_argument("--samples", type=_positive_int, default=201)

    p = sub.add_parser("ingest", parents=[common], help="ingest a tabulated state")
    _state_args(p, with_selector=False)

    p = sub.add_parser("check-all", parents=[common], help="run every acceptance criterion")
    p.add_argument("--tol", type=_positive_float)
    p.add_argument("--criteria", type=_float_list, help="subset, e.g. 1,5,8")
    return parser


def _params_from(args):
    given = {"alpha": args.alpha, "a": args.a, "s": args.s, "lambda": args.lam}
    return {k: v for k, v in given.items() if v is not None}


def state_from_args(args, selector=None):
    selector = selector or args.selector
    params = _params_from(args)
    if selector == "tabulated":
        if not args.file:
            raise UsageError("tabulated states need --file")
        if params:
            raise UsageError("tabulated states take no shape parameters")
        return ingest_tabulated(read_tabulated_csv(args.file), args.kinks)
    if args.file or args.kinks:
        raise UsageError("--file/--kinks only apply to the tabulated selector")
    allowed = FAMILY_PARAMS[selector]
    extra = sorted(set(params) - set(allowed))
    if extra:
        raise UsageError(f"{selector} does not take --{', --'.join(extra)}")
    return make_state(selector, params)


def _emit(args, text):
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _with_meta(args, payload, command):
    m = report.meta(command, args.no_meta)
    if m is not None:
        payload = {"meta": m, **payload}
    return payload


def cmd_list(args):
    rows = []
    for fam in FAMILIES:
        if fam == "tabulated":
            rows.append((fam, "--file, --kinks", ""))
            continue
        params = FAMILY_PARAMS[fam]
        state = make_state(fam)
        rows.append((fam, ", ".join(f"--{k} (default {v:g})"
                                    for k, v in params.items()) or "-",
                     state.closed_U))
    if args.format == "json":
        payload = {"states": [{"selector": r[0], "parameters": r[1],
                               "closed_U": r[2] if r[2] != "" else None} for r in rows]}
        _emit(args, report.dumps_json(_with_meta(args, payload, "list")) + "\n")
    elif args.format == "csv":
        _emit(args, report.csv_text(("selector", "parameters", "closed_U"),
                                    [(r[0], r[1].replace(",", ";"), r[2]) for r in rows],
                                    report.meta_comments(report.meta("list", args.no_meta))))
    else:
        lines = [f"{r[0]:<14s} {r[1]:<28s} {'' if r[2] == '' else f'U = {r[2]:.12f}'}" for r in rows]
        _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_uncertainty(args):
    tol = closed_tolerance(args)
    state = state_from_args(args)
    rep = uncertainty(state, momentum=args.momentum, p_max=args.pmax, threads=args.threads)
    record = report.uncertainty_record(rep)
    if rep.closed_U is not None:
        record["closed_pass"] = rep.closed_diff <= tol
    if args.format == "json":
        _emit(args, report.dumps_json(_with_meta(args, record, "uncertainty")) + "\n")
    elif args.format == "csv":
        rows = [(r.name, r.U, r.est_error, rep.dx, r.dp) for r in rep.routes]
        _emit(args, report.csv_text(("route", "U", "est_error", "dx", "dp"), rows,
                                    report.meta_comments(report.meta("uncertainty", args.no_meta))))
    else:
        _emit(args, report.uncertainty_text(rep))
    return 0


def cmd_table1(args):
    from . import table1

    tol = closed_tolerance(args)
    records, failures = [], 0
    for row in table1.ROWS:
        rec = {"row": row.number, "potential": row.potential, "closed_U": row.closed_U}
        try:
            rep = uncertainty(row.state(), momentum=not args.no_momentum, threads=args.threads)
        except InconsistencyError as exc:
            failures += 1
            rec.update({"pass": False, "error": str(exc)})
            records.append(rec)
            continue
        routes = []
        ok = True
        for r in rep.routes:
            limit = KINKED_MOMENTUM_TOL if (r.name == MOMENTUM_ROUTE and row.kinked) else tol
            diff = abs(r.U - row.closed_U)
            routes.append({"name": r.name, "U": r.U, "abs_diff": diff, "tol": limit,
                           "pass": diff <= limit})
            ok &= diff <= limit
        failures += not ok
        rec.update({"U": rep.U, "routes": routes, "pass": ok})
        records.append(rec)

    if args.format == "json":
        payload = {"rows": records, "all_pass": failures == 0}
        _emit(args, report.dumps_json(_with_meta(args, payload, "table1")) + "\n")
    elif args.format == "csv":
        rows = []
        for rec in records:
            for r in rec.get("routes", []):
                rows.append((rec["row"], r["name"], r["U"], rec["closed_U"], r["abs_diff"],
                             "pass" if r["pass"] else "fail"))
        _emit(args, report.csv_text(("row", "route", "U", "closed_U", "abs_diff", "status"), rows,
                                    report.meta_comments(report.meta("table1", args.no_meta))))
    else:
        lines = []
        for rec in records:
            if "error" in rec:
                lines.append(f"row {rec['row']} {rec['potential']}: FAIL {rec['error']}")
                continue
            lines.append(f"row {rec['row']} {rec['potential']:<28s} closed {rec['closed_U']:.10f}  "
                         f"{'pass' if rec['pass'] else 'FAIL'}")
            for r in rec["routes"]:
                lines.append(f"    {r['name']:<26s} {r['U']:.10f}  |diff| {r['abs_diff']:.1e}"
                             f"  tol {r['tol']:g}")
        _emit(args, "\n".join(lines) + "\n")
    return min(failures, 125)


def cmd_limits(args):
    from .asymptotics import geometric_grid, limit_scan

    if not args.lo < args.hi:
        raise UsageError("--min must be below --max")
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    scan = limit_scan(args.family, geometric_grid(args.lo, args.hi, args.points))
    if args.format == "json":
        payload = {"family": scan.family,
                   "rows": [{"parameter": g, "U": u, "U_minus_half": e} for g, u, e in scan.rows()],
                   "fitted_exponent": scan.fitted_exponent,
                   "fitted_prefactor": scan.fitted_prefactor}
        _emit(args, report.dumps_json(_with_meta(args, payload, "limits")) + "\n")
    else:
        comments = report.meta_comments(report.meta("limits", args.no_meta))
        comments += [f"family: {scan.family}", f"fitted_exponent: {scan.fitted_exponent:.17g}",
                     f"fitted_prefactor: {scan.fitted_prefactor:.17g}"]
        _emit(args, report.csv_text(("parameter", "U", "U_minus_half"), scan.rows(), comments))
    return 0


def cmd_fourier(args):
    from .fourier import momentum_profile

    state = state_from_args(args)
    if args.samples < 2:
        raise UsageError("--samples must be >= 2")
    prof = momentum_profile(state, args.pmax, args.samples, threads=args.threads)
    phi = prof.phi_values
    residual = None
    if state.closed_phi is not None:
        residual = float(np.max(np.abs(np.abs(phi) - np.abs(state.closed_phi(prof.p_grid)))))
    summary = {"state": state.family, "params": dict(state.params), "p_max": prof.p_max,
               "samples": len(prof.p_grid), "parseval_defect": prof.parseval_defect,
               "tail_bound": prof.tail_bound, "max_modulus_residual": residual}
    rows = list(zip(prof.p_grid, phi.real, phi.imag, np.abs(phi) ** 2))
    header = ("p", "re_phi", "im_phi", "abs_phi_sq")
    comments = report.meta_comments(report.meta("fourier", args.no_meta))
    comments += [f"{k}: {v}" for k, v in summary.items()]
    curve = report.csv_text(header, rows, comments)
    if args.format == "json":
        payload = dict(summary)
        payload["curve"] = {name: list(col) for name, col in zip(header, zip(*rows))}
        _emit(args, report.dumps_json(_with_meta(args, payload, "fourier")) + "\n")
    elif args.format == "csv":
        _emit(args, curve)
    else:
        if args.output:
            _emit(args, curve)
        lines = [f"{k:<22s} {v}" for k, v in summary.items()]
        sys.stdout.write("\n".join(lines) + "\n")
    return 0


def cmd_ingest(args):
    state = state_from_args(args, selector="tabulated")
    rep = uncertainty(state, threads=args.threads)
    record = report.uncertainty_record(rep)
    record["domain"] = list(state.domain)
    record["norm_factor"] = state.params["norm_factor"]
    record["kinks"] = [{"location": k.location, "jump_psi_prime": k.jump_psi_prime}
                       for k in state.kinks]
    if args.format == "json":
        _emit(args, report.dumps_json(_with_meta(args, record, "ingest")) + "\n")
    elif args.format == "csv":
        rows = [(k.location, k.jump_psi_prime) for k in state.kinks]
        comments = report.meta_comments(report.meta("ingest", args.no_meta))
        comments += [f"U: {rep.U:.17g}", f"norm_factor: {record['norm_factor']:.17g}"]
        _emit(args, report.csv_text(("kink", "jump_psi_prime"), rows, comments))
    else:
        text = report.uncertainty_text(rep)
        text += f"norm factor  {record['norm_factor']:.12g}\n"
        for k in state.kinks:
            text += f"kink         x={k.location:g}  jump psi' = {k.jump_psi_prime:.12g}\n"
        _emit(args, text)
    return 0


def cmd_check_all(args):
    from .acceptance import CRITERIA, run_all

    numbers = None
    if args.criteria:
        numbers = [int(c) for c in args.criteria]
        unknown = [n for n in numbers if n not in CRITERIA]
        if unknown:
            raise UsageError(f"unknown criteria {unknown}")
    tol = args.tol if args.tol is not None else (closed_tolerance(args)
                                                 if os.environ.get(TOL_ENV) else None)
    results = run_all(numbers, closed_tol=tol)
    failures = sum(not r.passed for r in results)
    if args.format == "json":
        payload = {"criteria": [
            {"number": r.number, "title": r.title, "pass": r.passed, "elapsed_s": r.elapsed_s,
             "budget_s": r.budget_s,
             "checks": [{"label": c[0], "pass": c[1], "detail": c[2]} for c in r.checks]}
            for r in results], "failures": failures}
        _emit(args, report.dumps_json(_with_meta(args, payload, "check-all")) + "\n")
    elif args.format == "csv":
        rows = [(r.number, c[0].replace(",", ";"), "pass" if c[1] else "fail", c[2].replace(",", ";"))
                for r in results for c in r.checks]
        _emit(args, report.csv_text(("criterion", "check", "status", "detail"), rows,
                                    report.meta_comments(report.meta("check-all", args.no_meta))))
    else:
        lines = []
        for r in results:
            lines.append(r.summary())
            for label, ok, detail in r.checks:
                lines.append(f"    {'ok  ' if ok else 'FAIL'} {label}: {detail}")
        lines.append(f"{len(results) - failures}/{len(results)} criteria passed")
        _emit(args, "\n".join(lines) + "\n")
    return min(failures, 125)


COMMANDS = {
    "list": cmd_list,
    "uncertainty": cmd_uncertainty,
    "table1": cmd_table1,
    "limits": cmd_limits,
    "fourier": cmd_fourier,
    "ingest": cmd_ingest,
    "check-all": cmd_check_all,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except InconsistencyError as exc:
        print(f"unclab: inconsistency: {exc}", file=sys.stderr)
        return 1
    except UnclabError as exc:
        print(f"unclab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"unclab: {exc}", file=sys.stderr)
        return EXIT_USAGE
