"""Command line front end.

    qmode expand --series E4 --order 5
    qmode extremal --weight 12 --depth 1 --order 10 --format text
    qmode balanced --weight 12 --depth 2 --exponents 2,1,0
    qmode solve --operator op.json [--exponent L]
    qmode mde-from-exponents --weight 6 --depth 1 --exponents 1,0
    qmode check denominators --depth 1 --max-weight 60 --order 30

Output is a JSON envelope on stdout.  Domain errors exit with status 1 and a
JSON error document on stderr; usage errors exit with status 2.  The default
truncation order is 50, or the value of QMODE_ORDER; --order wins over both.
"""

import argparse
import json
import os
import re
import sys

from .balanced import ExponentTuple, balanced_report, mde_from_exponents
from .errors import QModeError, SchemaError
from .extremal import check_kaneko_koike, extremal_form
from .forms import delta, eisenstein
from .mde import MDEOperator, frobenius_fundamental, frobenius_leading, indicial_polynomial
from .schemas import SCHEMA_VERSION, load_operator_text, validate_envelope

DEFAULT_ORDER = 50


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError("%s: error: %s" % (self.prog, message))


def default_order(environ=None):
    environ = os.environ if environ is None else environ
    raw = environ.get("QMODE_ORDER")
    if raw is None:
        return DEFAULT_ORDER
    try:
        n = int(raw)
    except ValueError:
        raise UsageError("QMODE_ORDER must be a positive integer, got %r" % raw)
    if n <= 0:
        raise UsageError("QMODE_ORDER must be a positive integer, got %r" % raw)
    return n


def _positive(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a positive integer, got %r" % text)
    if n <= 0:
        raise argparse.ArgumentTypeError("expected a positive integer, got %r" % text)
    return n


def _nonnegative(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer, got %r" % text)
    if n < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer, got %r" % text)
    return n


def _exponents(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated integers, got %r" % text)


def _series_name(text):
    if text == "Delta" or re.fullmatch(r"E([1-9][0-9]*)", text) and int(text[1:]) % 2 == 0:
        return text
    raise argparse.ArgumentTypeError("series must be Delta or E<even k>, got %r" % text)


def build_parser():
    p = _Parser(prog="qmode", description="Exact computations with quasimodular forms.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("expand", help="q-expansion of an Eisenstein series or Delta")
    e.add_argument("--series", required=True, type=_series_name)
    e.add_argument("--order", type=_positive)
    e.add_argument("--format", choices=("json", "text"), default="json")

    x = sub.add_parser("extremal", help="normalized extremal quasimodular form")
    x.add_argument("--weight", required=True, type=_nonnegative)
    x.add_argument("--depth", required=True, type=int, choices=(1, 2, 3, 4))
    x.add_argument("--order", type=_positive)
    x.add_argument("--format", choices=("json", "text"), default="json")

    b = sub.add_parser("balanced", help="balanced quasimodular form with given exponents")
    b.add_argument("--weight", required=True, type=_nonnegative)
    b.add_argument("--depth", required=True, type=_nonnegative)
    b.add_argument("--exponents", required=True, type=_exponents)
    b.add_argument("--order", type=_positive)
    b.add_argument("--format", choices=("json", "text"), default="json")

    s = sub.add_parser("solve", help="Frobenius solutions of an operator read from a JSON file")
    s.add_argument("--operator", required=True)
    s.add_argument("--exponent", type=_nonnegative,
                   help="only the solution q^L(1 + ...) for this indicial root")
    s.add_argument("--order", type=_positive)

    m = sub.add_parser("mde-from-exponents", help="normalized operator with prescribed indicial roots")
    m.add_argument("--weight", required=True, type=_nonnegative)
    m.add_argument("--depth", required=True, type=_nonnegative)
    m.add_argument("--exponents", required=True, type=_exponents)

    c = sub.add_parser("check", help="verification reports")
    csub = c.add_subparsers(dest="check", required=True, parser_class=_Parser)
    d = csub.add_parser("denominators", help="denominator primes of extremal forms")
    d.add_argument("--depth", required=True, type=int, choices=(1, 2, 3, 4))
    d.add_argument("--max-weight", required=True, type=_nonnegative)
    d.add_argument("--order", type=_positive)
    return p


def _envelope(name, args, payload, truncation, exact=True, note=None):
    exactness = {"exact": exact, "truncation": truncation}
    if note:
        exactness["note"] = note
    return {
        "schema_version": SCHEMA_VERSION,
        "command": {"name": name, "args": args},
        "payload": payload,
        "exactness": exactness,
    }


def _cmd_expand(ns, order):
    if ns.series == "Delta":
        form = delta(order)
    else:
        form = eisenstein(int(ns.series[1:]) // 2, order)
    series = form.expand(order)
    payload = {"series": ns.series, "weight": form.weight, "expansion": series.to_json()}
    return payload, series.to_text(), order, None


def _cmd_extremal(ns, order):
    f = extremal_form(ns.weight, ns.depth)
    payload = f.to_json(order)
    note = "coefficients of q^n for n < %d; the E2/E4/E6 polynomial is exact" % order
    return payload, f.expand(order).to_text(), order, note


def _cmd_balanced(ns, order):
    t = ExponentTuple(ns.weight, ns.depth, ns.exponents)
    n = max(order, t.lambdas[0] + 1)
    rep = balanced_report(t, n)
    payload = {"form": rep.form.to_json(n), "report": rep.to_json()}
    text = "%r\n%s" % (rep.form, rep.form.expand(n).to_text())
    return payload, text, n, "the E2/E4/E6 polynomial is exact"


def _cmd_solve(ns, order):
    try:
        with open(ns.operator, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SchemaError("cannot read operator file: %s" % exc, field="operator")
    K = MDEOperator.from_json(load_operator_text(text, ns.operator))
    p = indicial_polynomial(K)
    payload = {"operator": K.to_json(), "indicial_polynomial": p.to_json()}
    if ns.exponent is not None:
        sol = frobenius_leading(K, ns.exponent, order)
        payload["solution"] = sol.to_json()
        return payload, sol.to_text(), sol.truncation, None
    fs = frobenius_fundamental(K, order)
    payload["exponents"] = list(fs.exponents)
    payload["fundamental_system"] = fs.to_json()
    return payload, "\n".join(repr(s) for s in fs), fs.solutions[0].truncation, None


def _cmd_mde(ns, order):
    t = ExponentTuple(ns.weight, ns.depth, ns.exponents)
    K = mde_from_exponents(t)
    return K.to_json(), repr(K), None, "operator coefficients are exact"


def _cmd_check(ns, order):
    rep = check_kaneko_koike(ns.depth, ns.max_weight, order)
    return rep, json.dumps(rep), order, "denominators of the first %d coefficients from the valuation" % order


COMMANDS = {
    "expand": _cmd_expand,
    "extremal": _cmd_extremal,
    "balanced": _cmd_balanced,
    "solve": _cmd_solve,
    "mde-from-exponents": _cmd_mde,
    "check": _cmd_check,
}


def run(argv=None, stdout=None, stderr=None, environ=None):
    """Execute one command; returns the exit status."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        order = ns.order if getattr(ns, "order", None) is not None else default_order(environ)
    except UsageError as exc:
        stderr.write(str(exc) + "\n")
        return 2
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 2
    args = {k: (list(v) if isinstance(v, tuple) else v) for k, v in sorted(vars(ns).items()) if k != "command"}
    if "order" in args:
        args["order"] = order
    try:
        payload, text, truncation, note = COMMANDS[ns.command](ns, order)
    except UsageError as exc:
        stderr.write(str(exc) + "\n")
        return 2
    except QModeError as exc:
        stderr.write(json.dumps(exc.to_json()) + "\n")
        return 1
    except ValueError as exc:
        stderr.write(json.dumps({"error": "invalid_value", "message": str(exc)}) + "\n")
        return 1
    if getattr(ns, "format", "json") == "text":
        stdout.write(text + "\n")
        return 0
    doc = _envelope(ns.command, args, payload, truncation, note=note)
    validate_envelope(doc)
    stdout.write(json.dumps(doc, indent=1) + "\n")
    return 0


def main():
    sys.exit(run())
