"""Command line interface: ``lommelbound eval | table | bound-probe | selftest``.

Exit status: 0 success, 1 unparseable input, 2 domain or precondition
error, 3 numerical failure (non-converged quadrature, failed self test).
"""

from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import os
import re
import sys

from . import lommel
from .coefficients import OrderPair, coeff_integral_check_a, lommel_a
from .errors import ConvergenceError, DomainError, LommelError
from .hyper import certified_eval_hyper
from .lommel import TruncationScheme
from .related import RelatedQuery, related_tail
from .tables import TABLES, format_sci, table_rows
from .terminant import TAG_ORDER, terminant_bound_candidates, terminant_eval, terminant_sup_bound

FUNCTIONS = {
    "lommel-s": None,
    "lommel-s-prime": None,
    "anger": "AngerJ",
    "weber": "WeberE",
    "anger-weber-a": "AngerWeberA",
    "scorer-hi": "ScorerHi",
    "scorer-gi": "ScorerGi",
    "struve-h": "StruveH",
    "struve-l": "StruveL",
}
EVAL_FIELDS = ("function", "block", "approx_re", "approx_im", "abs_bound", "function_abs_bound",
               "first_omitted", "bound_tag", "N", "M")
TABLE_FIELDS = ("table", "arg", "N", "remainder", "bound", "ok")
PROBE_FIELDS = ("tag", "value", "winner")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def parse_complex(text):
    """'re' or 're,im'."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"cannot parse complex number {text!r} (expected re or re,im)")


_PI_RE = re.compile(r"^([+-]?\d*\.?\d*)\*?pi(?:/(\d*\.?\d+))?$")


def parse_angle(text):
    """Radians by default; suffix 'd' for degrees, 'r' for radians; 'pi' allowed
    as in 3pi/8 or -pi/2."""
    t = text.strip().lower()
    unit = 1.0
    if t.endswith("d"):
        unit, t = math.pi / 180, t[:-1]
    elif t.endswith("r"):
        t = t[:-1]
    m = _PI_RE.match(t)
    if m:
        c = m.group(1)
        coef = -1.0 if c == "-" else 1.0 if c in ("", "+") else float(c)
        val = coef * math.pi / (float(m.group(2)) if m.group(2) else 1.0)
        return val * unit
    try:
        return float(t) * unit
    except ValueError:
        raise UsageError(f"cannot parse angle {text!r}") from None


def parse_z(text):
    """'modulus@arg' with arg as in :func:`parse_angle`."""
    if "@" not in text:
        raise UsageError(f"cannot parse z {text!r} (expected modulus@arg)")
    mod, arg = text.split("@", 1)
    try:
        r = float(mod)
    except ValueError:
        raise UsageError(f"cannot parse modulus {mod!r}") from None
    return cmath.rect(r, parse_angle(arg))


def quad_tol():
    v = os.environ.get("LOMMEL_QUAD_TOL")
    if not v:
        return None
    try:
        return float(v)
    except ValueError:
        raise UsageError(f"LOMMEL_QUAD_TOL={v!r} is not a number") from None


# --- output ------------------------------------------------------------------


def _emit(records, fields, fmt, out, human):
    out = sys.stdout if out is None else out
    if fmt == "json":
        data = records[0] if len(records) == 1 else records
        out.write(json.dumps(data) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in records:
            w.writerow(r)
        out.write(buf.getvalue())
    else:
        out.write(human(records))


def _cv_record(name, block, cv, scale, inputs):
    rec = {
        "function": name,
        "block": block,
        "approx_re": cv.approx.real,
        "approx_im": cv.approx.imag,
        "abs_bound": cv.normalized_bound,
        "function_abs_bound": None if scale is None else cv.normalized_bound * scale,
        "first_omitted": cv.first_omitted,
        "bound_tag": cv.bound_tag,
        "N": cv.scheme.N,
        "M": cv.scheme.M,
    }
    rec.update(inputs)
    return rec


def _human_eval(records):
    lines = []
    for r in records:
        head = r["function"] + (f" [{r['block']}]" if r["block"] else "")
        lines.append(f"{head}: N={r['N']}" + (f" M={r['M']}" if r["M"] is not None else ""))
        lines.append(f"  approx          {complex(r['approx_re'], r['approx_im'])!r}")
        lines.append(f"  remainder bound {r['abs_bound']:.6e}  ({r['bound_tag']})")
        if r["function_abs_bound"] is not None:
            lines.append(f"  value bound     {r['function_abs_bound']:.6e}")
        lines.append(f"  first omitted   {r['first_omitted']:.6e}")
    return "\n".join(lines) + "\n"


# --- commands ----------------------------------------------------------------


def cmd_eval(args, out=None):
    fn = args.fn
    z = parse_z(args.z)
    mu = parse_complex(args.mu) if args.mu is not None else None
    nu = parse_complex(args.nu) if args.nu is not None else None
    inputs = {"z_re": z.real, "z_im": z.imag}
    if mu is not None:
        inputs.update(mu_re=mu.real, mu_im=mu.imag)
    if nu is not None:
        inputs.update(nu_re=nu.real, nu_im=nu.imag)
    records = []
    if FUNCTIONS[fn] is None:
        if mu is None or nu is None:
            raise UsageError(f"{fn} needs --mu and --nu")
        which = "S" if fn == "lommel-s" else "S'"
        pair = OrderPair(mu, nu)
        if args.mode == "hyper":
            cv = certified_eval_hyper(z, pair, args.n, args.m, which)
        elif args.lam is not None:
            if which != "S":
                raise UsageError("--lam applies to lommel-s only")
            N = args.n if args.n is not None else lommel.auto_N(abs(z), pair)
            b = lommel.remainder_bound_real(z, pair, N, lam=args.lam)
            approx = lommel.partial_sum_S(z, pair, N)
            sc = abs(cmath.exp((pair.mu - 1) * cmath.log(z)))
            cv = lommel.CertifiedValue(approx, b * sc, lommel.first_omitted(z, pair, N),
                                       "real-terminant", TruncationScheme(N, None, args.lam), b)
        else:
            ev = lommel.certified_eval_S if which == "S" else lommel.certified_eval_S_prime
            cv = ev(z, pair, args.n)
        scale = cv.abs_bound / cv.normalized_bound if cv.normalized_bound else abs(
            cmath.exp((pair.mu - (1 if which == "S" else 2)) * cmath.log(z)))
        records.append(_cv_record(fn, None, cv, scale, inputs))
    else:
        if args.mode == "hyper":
            raise UsageError("--mode hyper applies to lommel-s and lommel-s-prime only")
        fam = FUNCTIONS[fn]
        if nu is None and not fam.startswith("Scorer"):
            raise UsageError(f"{fn} needs --nu")
        sch = TruncationScheme(args.n, args.m) if (args.n is not None or args.m is not None) else None
        q = RelatedQuery(fam, z, None if fam.startswith("Scorer") else nu, sch,
                         args.derivative, args.branch)
        if fam in ("AngerJ", "WeberE", "AngerWeberA"):
            F, G = related_tail(q)
            records.append(_cv_record(fn, "F", F, None, inputs))
            records.append(_cv_record(fn, "G", G, None, inputs))
        else:
            records.append(_cv_record(fn, None, related_tail(q), None, inputs))
    _emit(records, EVAL_FIELDS, args.format, out, _human_eval)
    return 0


def _human_table(tid):
    def render(records):
        pair = TABLES[tid]
        lines = [f"|z| = 20, mu = {pair.mu}, nu = {pair.nu}",
                 f"{'arg z':>6} | {'|R_5|':>12} {'bound':>12} | {'|R_10|':>12} {'bound':>12}"]
        by_arg = {}
        for r in records:
            by_arg.setdefault(r["arg"], []).append(r)
        for arg, rs in by_arg.items():
            cells = []
            for r in sorted(rs, key=lambda r: r["N"]):
                cells += [format_sci(r["remainder"]), format_sci(r["bound"])]
            lines.append(f"{arg:>6} | {cells[0]:>12} {cells[1]:>12} | {cells[2]:>12} {cells[3]:>12}")
        return "\n".join(lines) + "\n"
    return render


def cmd_table(args, out=None):
    rows = table_rows(args.id, quad_tol())
    records = [{"table": args.id, "arg": r.arg_label, "N": r.N, "remainder": r.remainder,
                "bound": r.bound, "ok": r.ok} for r in rows]
    if args.format == "csv":
        for rec in records:
            rec["remainder"] = format_sci(rec["remainder"])
            rec["bound"] = format_sci(rec["bound"])
    _emit(records, TABLE_FIELDS, args.format, out, _human_table(args.id))
    return 0 if all(r.ok for r in rows) else 3


def cmd_bound_probe(args, out=None):
    p = parse_complex(args.p)
    theta = parse_angle(args.theta)
    cands = terminant_bound_candidates(p, theta)
    win = terminant_sup_bound(p, theta)
    records = [{"tag": t, "value": cands[t], "winner": t == win.proposition_used}
               for t in TAG_ORDER if t in cands]

    def human(recs):
        lines = [f"p = {p}, arg w = {theta!r}"]
        for r in recs:
            lines.append(f"  {r['tag']:<10} {r['value']:.6e}" + ("  <- min" if r["winner"] else ""))
        return "\n".join(lines) + "\n"

    _emit(records, PROBE_FIELDS, args.format, out, human)
    return 0


def _selftest_checks(tol):
    """(name, passed, detail) for a handful of fast invariants."""
    checks = []
    v = terminant_eval(1.0, 1.0)
    checks.append(("terminant Pi_1(1)", abs(v - 0.6214496242358134) < 1e-12, f"{v.real:.16g}"))
    a = coeff_integral_check_a(2, 0.5, 1 / 3, 0.5)
    e = lommel_a(2, -0.5, 1 / 3)
    checks.append(("coefficient integral", abs(a - e) <= 1e-9 * abs(e), f"{a.real:.12g}"))
    pair = TABLES[1]
    r = abs(lommel.oracle_remainder_S(20.0, pair, 5, rel_tol=tol))
    b = lommel.remainder_bound_combined_real(20.0, pair, 5)
    checks.append(("table 1 first row", format_sci(r) == "0.47440e-5" and format_sci(b) == "0.65562e-5",
                   f"{format_sci(r)} {format_sci(b)}"))
    th = lommel.sign_magnitude_theta(10.0, OrderPair(0.3, 0.2), 4, rel_tol=tol)
    checks.append(("sign-magnitude ratio", 0 < th < 1, f"{th:.6f}"))
    return checks


def cmd_selftest(args, out=None):
    checks = _selftest_checks(quad_tol())
    records = [{"check": n, "passed": bool(ok), "detail": d} for n, ok, d in checks]

    def human(recs):
        return "".join(f"{'PASS' if r['passed'] else 'FAIL'}  {r['check']}: {r['detail']}\n"
                       for r in recs)

    _emit(records, ("check", "passed", "detail"), args.format, out, human)
    return 0 if all(ok for _, ok, _ in checks) else 3


def build_parser():
    p = _Parser(prog="lommelbound", description="Certified asymptotics of Lommel-type functions.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    fmt = dict(choices=("json", "csv", "human"), default="human")

    e = sub.add_parser("eval", help="truncated expansion with an error bound")
    e.add_argument("--fn", choices=tuple(FUNCTIONS), required=True)
    e.add_argument("--mu", help="re or re,im")
    e.add_argument("--nu", help="re or re,im")
    e.add_argument("--z", required=True, help="modulus@arg, arg in radians or with suffix d")
    e.add_argument("--n", type=int, help="truncation index N")
    e.add_argument("--m", type=int, help="second index M (re-expansion or G-block)")
    e.add_argument("--lam", type=float, help="fix lambda in the real-parameter bound")
    e.add_argument("--mode", choices=("plain", "hyper"), default="plain")
    e.add_argument("--derivative", action="store_true")
    e.add_argument("--branch", type=int, choices=(1, -1), default=1)
    e.add_argument("--format", **fmt)
    e.set_defaults(func=cmd_eval)

    t = sub.add_parser("table", help="reproduce a remainder/bound table")
    t.add_argument("--id", type=int, choices=(1, 2, 3), required=True)
    t.add_argument("--format", **fmt)
    t.set_defaults(func=cmd_table)

    b = sub.add_parser("bound-probe", help="list the terminant bounds at (p, arg w)")
    b.add_argument("--p", required=True, help="re or re,im")
    b.add_argument("--theta", required=True, help="arg w, e.g. 0.5, 3pi/8, 90d")
    b.add_argument("--format", **fmt)
    b.set_defaults(func=cmd_bound_probe)

    s = sub.add_parser("selftest", help="run quick internal consistency checks")
    s.add_argument("--format", **fmt)
    s.set_defaults(func=cmd_selftest)
    return p


def _fail(code, kind, message):
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        return _fail(1, "usage", str(exc))
    except DomainError as exc:
        return _fail(2, type(exc).__name__, str(exc))
    except ConvergenceError as exc:
        return _fail(3, type(exc).__name__, str(exc))
    except LommelError as exc:
        return _fail(3, type(exc).__name__, str(exc))
    except ValueError as exc:
        return _fail(2, "ValueError", str(exc))


if __name__ == "__main__":
    sys.exit(main())
