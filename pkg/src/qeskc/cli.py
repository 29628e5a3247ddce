"""Command-line entry point: ``qeskc <command> [options]``.

Exit status: 0 success, 1 a verification failed, 2 invalid configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import lcm

from . import cdsi, gfm, numeric
from .exactalg import MultiPoly, RatFunc, monomial_str


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# serialization


def fmt_float(x: float):
    if not math.isfinite(x):
        return str(x)
    return float("%.12g" % x)


def _poly_map(p: MultiPoly, scale: int) -> dict:
    return {monomial_str(m) or "1": str(int(c * scale)) for m, c in p.sorted_terms()}


def ratfunc_json(x: RatFunc) -> dict:
    """Numerator/denominator as ``{monomial: "integer"}`` with a common integer scale."""
    den = 1
    for p in (x.num, x.den):
        for c in p.terms.values():
            den = lcm(den, Fraction(c).denominator)
    return {"num": _poly_map(x.num, den), "den": _poly_map(x.den, den)}


def _dump_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _dump_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["%.12g" % v if isinstance(v, float) else v for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# parameters


def _params(args, m=None) -> numeric.ModelParams:
    m = args.m if m is None else m
    if args.kappa is None:
        raise ConfigError("--kappa is required")
    if args.L is not None and (args.d is not None or args.l is not None):
        raise ConfigError("give either --L or --d/--l, not both")
    if args.Q is not None and args.calQ is not None:
        raise ConfigError("--Q and --calQ are mutually exclusive")
    if args.L is not None:
        L = args.L
    elif args.d is not None and args.l is not None:
        if args.d < 2 or args.l < 0:
            raise ConfigError("need d >= 2 and l >= 0")
        L = args.l + (args.d - 3) / 2
    else:
        raise ConfigError("give --L or both --d and --l")
    try:
        if args.calQ is not None:
            return numeric.ModelParams.from_calq(args.kappa, L, args.calQ, m)
        if args.Q is None:
            raise ConfigError("give --Q or --calQ")
        return numeric.ModelParams(args.kappa, L, args.Q, m)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _grid(args) -> numeric.GridSpec:
    try:
        return numeric.GridSpec(args.n, args.eps)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _need_m(m, lo=1):
    if m is None or m < lo:
        raise ConfigError(f"--m must be an integer >= {lo}")


# ---------------------------------------------------------------------------
# commands; each returns (exit code, json document, csv header, csv rows)


def cmd_coeffs(args):
    _need_m(args.m)
    sol = gfm.solve_coeffs(args.m)
    doc = {"m": args.m, "a": [ratfunc_json(a) for a in sol.a]}
    rows = [(i, str(a.num), str(a.den)) for i, a in enumerate(sol.a)]
    return 0, doc, ("index", "numerator", "denominator"), rows


def cmd_potential(args):
    _need_m(args.m)
    pot = gfm.assemble_potential(gfm.solve_coeffs(args.m))
    names = [f"B{i + 1}" for i in range(len(pot.B))] + ["E0", "E1"]
    exact = list(pot.B) + [pot.E0, pot.E1]
    doc = {"m": args.m, "exact": {n: ratfunc_json(v) for n, v in zip(names, exact)}}
    numeric_vals = None
    if args.kappa is not None:
        p = _params(args)
        numeric_vals = [float(v.evaluate(p.symbol_values())) for v in exact]
        doc["numeric"] = {n: fmt_float(v) for n, v in zip(names, numeric_vals)}
        doc["params"] = _params_doc(p)
    rows = [
        (n, str(v), numeric_vals[i] if numeric_vals else "")
        for i, (n, v) in enumerate(zip(names, exact))
    ]
    return 0, doc, ("name", "exact", "numeric"), rows


def _params_doc(p):
    return {"kappa": fmt_float(p.kappa), "L": fmt_float(p.L), "Q": fmt_float(p.Q), "calQ": fmt_float(p.calQ), "m": p.m}


def _verify_one(m: int) -> dict:
    sol = gfm.solve_coeffs(m)
    rep = gfm.verify_identities(sol)
    out = {name: str(res) for name, res in rep.residuals.items()}
    out["redundant"] = str(gfm.redundant_residual(m, sol.a))
    return out


def _threads() -> int:
    raw = os.environ.get("QESKC_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"QESKC_THREADS must be an integer, got {raw!r}") from exc
    if n < 1:
        raise ConfigError("QESKC_THREADS must be >= 1")
    return n


def cmd_verify(args):
    if args.m_min < 1 or args.m_max < args.m_min:
        raise ConfigError("need 1 <= --m-min <= --m-max")
    ms = list(range(args.m_min, args.m_max + 1))
    workers = min(_threads(), len(ms))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_verify_one, ms))
    else:
        results = [_verify_one(m) for m in ms]
    table = {str(m): r for m, r in zip(ms, results)}
    ok = all(v == "0" for r in results for v in r.values())
    doc = {"residuals": table, "status": "all residuals zero" if ok else "nonzero residuals"}
    rows = [(m, name, v) for m, r in zip(ms, results) for name, v in sorted(r.items())]
    return (0 if ok else 1), doc, ("m", "check", "residual"), rows


def cmd_conjecture(args):
    if args.m_min < 2 or args.m_max < args.m_min:
        raise ConfigError("need 2 <= --m-min <= --m-max")
    reports = {}
    rows = []
    ok = True
    for m in range(args.m_min, args.m_max + 1):
        rep = gfm.check_conjecture(m)
        ok = ok and rep.passed
        reports[str(m)] = {
            "passed": rep.passed,
            "clauses": rep.clauses,
            "b": [str(b) for b in rep.b],
            "c": {str(kk): [str(x) for x in v] for kk, v in rep.c.items()},
            "a0_factors": [{"shift": str(c), "power": mult} for c, mult in rep.a0_factors],
        }
        rows += [(m, name, passed) for name, passed in sorted(rep.clauses.items())]
    doc = {"reports": reports, "status": "all clauses hold" if ok else "clause failure"}
    return (0 if ok else 1), doc, ("m", "clause", "passed"), rows


def cmd_cdsi_check(args):
    table = {}
    rows = []
    ok = True
    for m in (1, 2, 3):
        rep = cdsi.crosscheck_gfm(m)
        ok = ok and rep.ok
        table[str(m)] = rep.components
        rows += [(m, name, v) for name, v in sorted(rep.components.items())]
    doc = {"crosscheck": table, "status": "routes agree" if ok else "routes disagree"}
    return (0 if ok else 1), doc, ("m", "component", "agrees"), rows


def cmd_eigensolve(args):
    if args.m is None or args.m < 0:
        raise ConfigError("--m must be a non-negative integer")
    p = _params(args)
    g = _grid(args)
    model = numeric.build_model(p)
    if p.m == 0:
        exact = [numeric.kc_spectrum(p, i) for i in range(args.states)]
    else:
        if args.states > 2:
            raise ConfigError("only two closed-form levels exist for m >= 1")
        exact = [model.E0, model.E1][: args.states]
    try:
        ev = numeric.eigensolve_fd(model.V, p, g, args.states)
    except numeric.NonFiniteV as exc:
        raise ConfigError(str(exc)) from exc
    rows = []
    ok = True
    for i, (e, x) in enumerate(zip(exact, ev)):
        rel = abs(x - e) / abs(e) if e else abs(x - e)
        ok = ok and rel < args.tol
        rows.append((i, e, float(x), rel))
    doc = {
        "params": _params_doc(p),
        "grid": {"n": g.n, "eps": fmt_float(g.eps)},
        "rows": [{"state": i, "exact": fmt_float(e), "numeric": fmt_float(x), "rel_err": fmt_float(r)} for i, e, x, r in rows],
        "tol": fmt_float(args.tol),
        "status": "within tolerance" if ok else "tolerance exceeded",
    }
    return (0 if ok else 1), doc, ("state", "exact", "numeric", "rel_err"), rows


def plot_tables(p: numeric.ModelParams, eps: float, samples: int = 1000):
    """(potential rows, wavefunction rows) on ``samples`` uniform r points inset by eps."""
    model = numeric.build_model(p)
    kc = numeric.ModelParams(p.kappa, p.L, p.Q, 0)
    import numpy as np

    rmax = p.r_max
    r = np.linspace(eps * rmax, (1 - eps) * rmax, samples)
    v_ext = model.V(r)
    v_kc = numeric.potential_values(kc, [], r)
    psi0 = numeric.eval_wavefunction(model.psi0, p, r)
    psi1 = numeric.eval_wavefunction(model.psi1, p, r)
    pot = [(float(a), float(b), float(c)) for a, b, c in zip(r, v_ext, v_kc)]
    wav = [(float(a), float(b), float(c)) for a, b, c in zip(r, psi0, psi1)]
    return pot, wav


def cmd_plotdata(args):
    _need_m(args.m)
    p = _params(args)
    if not 0 < args.eps < 0.1:
        raise ConfigError("inset must satisfy 0 < eps < 0.1")
    pot, wav = plot_tables(p, args.eps)
    pot_csv = _dump_csv(("r", "V_extended", "V_KC"), pot)
    wav_csv = _dump_csv(("r", "psi0", "psi1"), wav)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "potential.csv"), "w") as fh:
            fh.write(pot_csv)
        with open(os.path.join(args.out, "wavefunctions.csv"), "w") as fh:
            fh.write(wav_csv)
        return 0, None, None, None
    sys.stdout.write(pot_csv + "\n" + wav_csv)
    return 0, None, None, None


COMMANDS = {
    "coeffs": cmd_coeffs,
    "potential": cmd_potential,
    "verify": cmd_verify,
    "conjecture": cmd_conjecture,
    "cdsi-check": cmd_cdsi_check,
    "eigensolve": cmd_eigensolve,
    "plotdata": cmd_plotdata,
}


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _add_model_args(sp, m_default=None, unit_defaults=False):
    one = 1.0 if unit_defaults else None
    sp.add_argument("--m", type=int, default=m_default)
    sp.add_argument("--kappa", type=float, default=one)
    sp.add_argument("--L", type=float)
    sp.add_argument("--d", type=int)
    sp.add_argument("--l", type=int)
    sp.add_argument("--Q", type=float, default=None)
    sp.add_argument("--calQ", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qeskc", description="Extended Kepler-Coulomb potentials on the sphere: exact tables and checks.")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--out", help="write the report here instead of stdout (a directory for plotdata)")
    # same options accepted after the subcommand; SUPPRESS keeps the top-level value otherwise
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    sp = sub.add_parser("coeffs", help="exact a-vector")
    sp.add_argument("--m", type=int, required=True)

    sp = sub.add_parser("potential", help="B table and energies")
    _add_model_args(sp)

    sp = sub.add_parser("verify", help="symbolic residual suite")
    sp.add_argument("--m-min", type=int, default=1)
    sp.add_argument("--m-max", type=int, default=7)

    sp = sub.add_parser("conjecture", help="structure of the coefficient solutions")
    sp.add_argument("--m-min", type=int, default=2)
    sp.add_argument("--m-max", type=int, default=7)

    sub.add_parser("cdsi-check", help="compare both construction routes for m = 1..3")

    sp = sub.add_parser("eigensolve", help="finite-difference levels against closed forms")
    _add_model_args(sp, m_default=1)
    sp.add_argument("--n", type=int, default=4000)
    sp.add_argument("--eps", type=float, default=1e-4)
    sp.add_argument("--states", type=int, default=2)
    sp.add_argument("--tol", type=float, default=1e-3)

    sp = sub.add_parser("plotdata", help="CSV curves for the potential and the two states")
    _add_model_args(sp, m_default=1, unit_defaults=True)
    sp.add_argument("--eps", type=float, default=1e-3)
    return ap


def _fill_defaults(args):
    # plotdata defaults to kappa = L = Q = 1 unless the user picked d/l or calQ
    if args.command != "plotdata":
        return
    if args.L is None and args.d is None and args.l is None:
        args.L = 1.0
    if args.Q is None and args.calQ is None:
        args.Q = 1.0


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _fill_defaults(args)
        if args.command == "eigensolve" and args.states < 1:
            raise ConfigError("--states must be >= 1")
        code, doc, header, rows = COMMANDS[args.command](args)
    except ConfigError as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "exit": 2}, sort_keys=True) + "\n")
        return 2
    if doc is None:
        return code
    text = _dump_csv(header, rows) if args.format == "csv" else _dump_json(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code == 1:
        sys.stderr.write(json.dumps({"error": "verification failed", "exit": 1}, sort_keys=True) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
