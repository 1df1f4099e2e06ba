"""Command line entry point ``fmanifold``.

Every subcommand prints one JSON report on stdout; diagnostics go to stderr.
Exit codes: 0 success, 1 check failure, 2 usage error, 3 input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .algebra import AlgebraError, ToleranceAmbiguity, decompose, is_frobenius
from .chart import (
    ChartError,
    EulerCandidate,
    euler_check,
    fiber_algebra,
    integrability_check,
    solve_euler_weights,
    validate,
)
from .construct import BuildError, catalog, catalog_list
from .document import ChartDocument, DocumentError, load_chart
from .metrics import MetricError, frobenius_report, nabla_identity_check, nabla_mult_check
from .poly import PolyParseError
from .report import SCHEMA_VERSION
from .spectrum import (
    SpectrumError,
    caustic_poly,
    determinant_identity,
    discriminant_slice,
    ll_map,
    log_tangency_check,
    reconstruct_multiplication,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_chart_source(p):
    p.add_argument("chart", nargs="?", help="chart document (JSON)")
    p.add_argument("--catalog", metavar="NAME", help="use a catalog entry instead of a file")
    p.add_argument("--param", action="append", default=[], metavar="K=V", help="catalog parameter")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="fmanifold", description="Construct and verify F-manifold charts.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--format", choices=("json", "text"), default="json",
                    help="report format on stdout (default json)")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    p = sub.add_parser("verify", help="axioms, integrability and Euler field checks")
    _add_chart_source(p)

    p = sub.add_parser("ll", help="Lyashko-Looijenga map, discriminant and bifurcation polynomial")
    _add_chart_source(p)
    p.add_argument("--composed", action="store_true", help="report the bifurcation polynomial unexpanded")

    p = sub.add_parser("caustic", help="polynomial cutting out the caustic")
    _add_chart_source(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--method", choices=("field", "trace"), default="field")

    for name, help_ in (
        ("decompose", "eigenspace decomposition of the tangent algebra at a point"),
        ("frobenius-test", "is the tangent algebra at a point Frobenius"),
        ("reconstruct", "rebuild the multiplication at a point from the discriminant and the unit"),
    ):
        p = sub.add_parser(name, help=help_)
        _add_chart_source(p)
        p.add_argument("--point", required=True, help="comma-separated coordinates")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=1e-8)

    p = sub.add_parser("logcheck", help="E * d/dt_i are logarithmic along the discriminant")
    _add_chart_source(p)

    p = sub.add_parser("metric-check", help="invariance, potentiality and Frobenius conditions of the metric")
    _add_chart_source(p)

    p = sub.add_parser("catalog", help="list catalog entries or build one")
    p.add_argument("name", help="'list' or an entry name")
    p.add_argument("--param", action="append", default=[], metavar="K=V")
    p.add_argument("--dump", action="store_true", help="print the chart document")

    p = sub.add_parser("slice", help="discriminant values on a 2D grid, written as CSV")
    _add_chart_source(p)
    p.add_argument("--vars", required=True, help="two 1-based coordinate indices, e.g. 1,2")
    p.add_argument("--grid", type=int, required=True)
    p.add_argument("--out", required=True, help="CSV path or '-' for stdout")
    p.add_argument("--lo", type=float, default=-1.0)
    p.add_argument("--hi", type=float, default=1.0)
    p.add_argument("--base", help="values of the other coordinates (comma-separated, full length)")
    return ap


# ---------------------------------------------------------------------------
# helpers

def _params(items) -> dict:
    out = {}
    for item in items:
        if "=" not in item:
            raise UsageError(f"--param expects K=V, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _document(args) -> ChartDocument:
    if args.catalog and args.chart:
        raise UsageError("give a chart file or --catalog, not both")
    if args.catalog:
        entry = catalog(args.catalog, **_params(args.param))
        return ChartDocument(entry.chart, entry.euler)
    if args.param:
        raise UsageError("--param only applies with --catalog")
    if not args.chart:
        raise UsageError("a chart file or --catalog is required")
    return load_chart(args.chart)


def _number(text: str):
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        return complex(text.replace("i", "j").replace("I", "j"))
    except ValueError:
        raise InputError(f"not a number: {text!r}") from None


def _point(text: str, n: int) -> list:
    vals = [_number(s) for s in text.split(",") if s.strip()]
    if len(vals) != n:
        raise InputError(f"point has {len(vals)} coordinates, expected {n}")
    return [complex(v) if isinstance(v, complex) else float(v) for v in vals]


def _euler(doc: ChartDocument, required: bool = True):
    if doc.euler is not None:
        return doc.euler, "document"
    E = solve_euler_weights(doc.chart)
    if E is None and required:
        raise InputError("no Euler field in the document and none of diagonal form exists")
    return E, "solved"


def _enc(z) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def _report(command: str, passed: bool, **body) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "command": command, "passed": bool(passed)}
    out.update(body)
    return out


# ---------------------------------------------------------------------------
# subcommands

def cmd_verify(args):
    doc = _document(args)
    C = doc.chart
    checks = {"validate": validate(C)}
    if checks["validate"].passed:
        checks["integrability"] = integrability_check(C)
    if doc.euler is not None:
        checks["euler"] = euler_check(C, doc.euler.field, doc.euler.weight)
    passed = all(r.passed for r in checks.values())
    return _report("verify", passed, chart=C.name or None, dimension=C.n,
                   checks={k: r.to_dict() for k, r in checks.items()})


def cmd_ll(args):
    doc = _document(args)
    C = doc.chart
    E, source = _euler(doc)
    L = ll_map(C, E)
    det_ok = determinant_identity(C, L)
    return _report("ll", det_ok, euler={"source": source, "components": E.field.strings()},
                   determinant_identity=det_ok, **L.to_dict(expand_bifurcation=not args.composed))


def cmd_caustic(args):
    doc = _document(args)
    try:
        K = caustic_poly(doc.chart, seed=args.seed, method=args.method)
    except SpectrumError as exc:
        return _report("caustic", False, seed=args.seed, method=args.method, error=str(exc))
    return _report("caustic", True, seed=args.seed, method=args.method, caustic=str(K))


def cmd_decompose(args):
    doc = _document(args)
    p = _point(args.point, doc.chart.n)
    try:
        dec = decompose(fiber_algebra(doc.chart, p), tol=args.tol, seed=args.seed)
    except ToleranceAmbiguity as exc:
        return _report("decompose", False, point=[_enc(z) for z in p], error=str(exc))
    return _report("decompose", True, point=[_enc(z) for z in p], **dec.to_dict())


def cmd_frobenius_test(args):
    doc = _document(args)
    p = _point(args.point, doc.chart.n)
    try:
        res = is_frobenius(fiber_algebra(doc.chart, p), tol=args.tol, seed=args.seed)
    except ToleranceAmbiguity as exc:
        return _report("frobenius-test", False, point=[_enc(z) for z in p], error=str(exc))
    return _report("frobenius-test", res["frobenius"], point=[_enc(z) for z in p], **res)


def cmd_reconstruct(args):
    doc = _document(args)
    C = doc.chart
    p = _point(args.point, C.n)
    E, _ = _euler(doc)
    L = ll_map(C, E)
    unit = C.unit_index if C.unit_index is not None else C.unit.evaluate(p)
    try:
        rec = reconstruct_multiplication(L.discriminant, unit, p, tol=args.tol)
    except SpectrumError as exc:
        return _report("reconstruct", False, point=[_enc(z) for z in p], error=str(exc))
    ref = fiber_algebra(C, p)
    err = float(np.max(np.abs(rec.structure - ref.structure)))
    scale = max(1.0, float(np.max(np.abs(ref.structure))))
    passed = err <= 1e-7 * scale
    return _report("reconstruct", passed, point=[_enc(z) for z in p], max_abs_error=err,
                   reconstructed=rec.to_dict())


def cmd_logcheck(args):
    doc = _document(args)
    E, source = _euler(doc)
    rep = log_tangency_check(doc.chart, E)
    return _report("logcheck", rep.passed, euler_source=source, check=rep.to_dict())


def cmd_metric_check(args):
    doc = _document(args)
    if doc.metric is None:
        raise InputError("the chart document has no metric")
    C, g = doc.chart, doc.metric
    res = frobenius_report(C, g, doc.euler)
    extra = {"nabla_identity": nabla_identity_check(C, g), "nabla_mult": nabla_mult_check(C, g)}
    res["checks"].update({k: r.to_dict() for k, r in extra.items()})
    passed = all(v["passed"] for v in res["checks"].values()) and doc.euler is not None
    return _report("metric-check", passed, **res)


def cmd_catalog(args):
    if args.name == "list":
        if args.param or args.dump:
            raise UsageError("catalog list takes no options")
        return _report("catalog", True, entries=catalog_list())
    entry = catalog(args.name, **_params(args.param))
    doc = ChartDocument(entry.chart, entry.euler)
    if args.dump:
        return doc.to_dict()
    return _report("catalog", True, name=args.name, params=entry.params, document=doc.to_dict())


def cmd_slice(args):
    doc = _document(args)
    C = doc.chart
    try:
        i, j = (int(s) - 1 for s in args.vars.split(","))
    except ValueError:
        raise UsageError(f"--vars expects two indices like 1,2, got {args.vars!r}") from None
    base = None
    if args.base:
        base = [float(v.real) for v in map(complex, _point(args.base, C.n))]
    E, _ = _euler(doc)
    L = ll_map(C, E)
    try:
        rows = discriminant_slice(L, i, j, args.grid, base, args.lo, args.hi)
    except SpectrumError as exc:
        raise UsageError(str(exc)) from None
    header = [C.coords[i], C.coords[j], "value"]
    if args.out == "-":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return None
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return _report("slice", True, out=args.out, rows=len(rows), columns=header)


COMMANDS = {
    "verify": cmd_verify,
    "ll": cmd_ll,
    "caustic": cmd_caustic,
    "decompose": cmd_decompose,
    "frobenius-test": cmd_frobenius_test,
    "reconstruct": cmd_reconstruct,
    "logcheck": cmd_logcheck,
    "metric-check": cmd_metric_check,
    "catalog": cmd_catalog,
    "slice": cmd_slice,
}

_INPUT_ERRORS = (InputError, DocumentError, BuildError, PolyParseError, ChartError, MetricError, AlgebraError, OSError)


def run(argv=None) -> tuple[int, dict | None]:
    """Execute one command; returns (exit code, report)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("a command is required; see --help")
        report = COMMANDS[args.command](args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE, None
    except _INPUT_ERRORS as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT, None
    if report is None:
        return EXIT_OK, None
    code = EXIT_OK if report.get("passed", True) else EXIT_FAIL
    return code, report


def render_text(report: dict) -> str:
    """Indented key: value listing of a report."""
    lines = []

    def walk(obj, indent):
        pad = "  " * indent
        if isinstance(obj, dict):
            for k, v in obj.items():
                if isinstance(v, (dict, list)) and v:
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k}: {v}")
        elif isinstance(obj, list):
            for v in obj:
                if isinstance(v, (dict, list)) and v:
                    lines.append(f"{pad}-")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}- {v}")

    walk(report, 0)
    return "\n".join(lines) + "\n"


def _wants_text(argv) -> bool:
    argv = list(sys.argv[1:] if argv is None else argv)
    for k, a in enumerate(argv):
        if a == "--format=text" or (a == "--format" and argv[k + 1:k + 2] == ["text"]):
            return True
    return False


def main(argv=None) -> int:
    code, report = run(argv)
    if report is not None:
        if _wants_text(argv):
            sys.stdout.write(render_text(report))
        else:
            sys.stdout.write(json.dumps(report, indent=2, ensure_ascii=False) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
