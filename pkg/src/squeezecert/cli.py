"""Command-line front end.

Subcommands: ``coeffs`` (series coefficient table), ``constant``
(best-constant enclosure), ``certify`` (full two-sided squeeze with both
certificates), ``error`` (largest-error report), ``scan`` (grid of
interval ends), ``verify`` (re-check serialized certificates), and
``report`` (scan written to CSV plus rendered figures).

Every document goes to standard output as JSON with schema_version "1"
(or as bare CSV when ``--format csv`` is selected); diagnostics go to
standard error.  Exact rationals serialize as canonical "p/q" strings and
every enclosure carries a directed decimal pair: ``dec_lo`` rounded
toward -inf and ``dec_hi`` rounded toward +inf, so a reader without a
rational parser still never sees a value stated on the wrong side.

Exit status: 0 on success, 1 on parse/domain errors, 2 on certification
failures (including a verification that finds a bad certificate).

Environment: SQUEEZE_DEPTH_CAP bounds the series depth and
SQUEEZE_BISECT_CAP the sign-escalation count; both have safe defaults.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from .certify import (
    KIND_POSITIVITY,
    KIND_UNIQUE_ZERO,
    Certificate,
    Witness,
    verify_certificate,
)
from .coefficients import coeff_prefix, family_from_tag
from .errors import (
    CertificationError,
    ConvergenceError,
    DomainError,
    ParseError,
    ResourceCapError,
    SqueezeCertError,
)
from .intervals import Enclosure, Sign, parse_rational, to_decimal
from .squeeze import (
    DEFAULT_CONSTANT_WIDTH,
    DEFAULT_ERROR_TOL,
    ErrorReport,
    ScanRow,
    SqueezeResult,
    certify_squeeze,
    max_error,
    scan,
)

SCHEMA_VERSION = "1"
DEC_DIGITS = 10

_PROG = "squeezecert"


# ---------------------------------------------------------------------------
# serialization


def rational_str(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def enclosure_payload(enc: Enclosure) -> dict[str, str]:
    return {
        "lo": rational_str(enc.lo),
        "hi": rational_str(enc.hi),
        "dec_lo": to_decimal(enc.lo, "floor", DEC_DIGITS),
        "dec_hi": to_decimal(enc.hi, "ceil", DEC_DIGITS),
    }


def _witness_payload(w: Witness) -> dict[str, Any]:
    return {
        "point": rational_str(w.point),
        "derivative_order": w.derivative_order,
        "sign": w.sign.value,
        "enclosure": enclosure_payload(w.enclosure),
    }


def certificate_payload(cert: Certificate) -> dict[str, Any]:
    return {
        "kind": cert.kind,
        "family": cert.family.tag,
        "theta": rational_str(cert.theta),
        "m": cert.m,
        "witnesses": [_witness_payload(w) for w in cert.witnesses],
        "zero_bracket": (
            enclosure_payload(cert.zero_bracket) if cert.zero_bracket else None
        ),
        "min_bracket": (
            enclosure_payload(cert.min_bracket) if cert.min_bracket else None
        ),
        "depth_used": cert.depth_used,
        "domain_end": enclosure_payload(cert.domain_end),
    }


def _squeeze_payload(result: SqueezeResult) -> dict[str, Any]:
    return {
        "family": result.family.tag,
        "x0": rational_str(result.x0),
        "best_constant": enclosure_payload(result.best_constant),
        "upper_constant": rational_str(result.upper_constant),
        "certified_interval_end": rational_str(result.certified_interval_end),
        "lower_cert": certificate_payload(result.lower_cert),
        "upper_cert": certificate_payload(result.upper_cert),
    }


def _error_payload(report: ErrorReport) -> dict[str, Any]:
    return {
        "family": report.family.tag,
        "x0": rational_str(report.x0),
        "theta": rational_str(report.theta),
        "t0": enclosure_payload(report.t0),
        "delta": enclosure_payload(report.delta),
    }


def _scan_row_payload(row: ScanRow) -> dict[str, Any]:
    return {
        "x0": rational_str(row.x0),
        "best_constant": enclosure_payload(row.best_constant) if row.best_constant else None,
        "t0": enclosure_payload(row.t0) if row.t0 else None,
        "delta": enclosure_payload(row.delta) if row.delta else None,
        "error": row.error,
    }


# ---------------------------------------------------------------------------
# certificate deserialization (for `verify`)


def _parse_rational_field(obj: Any, label: str) -> Fraction:
    if not isinstance(obj, str):
        raise ParseError(f"{label}: expected rational text, got {obj!r}")
    return parse_rational(obj)


def parse_enclosure(obj: Any, label: str = "enclosure") -> Enclosure:
    if not isinstance(obj, dict):
        raise ParseError(f"{label}: expected an object, got {obj!r}")
    try:
        return Enclosure(
            _parse_rational_field(obj["lo"], f"{label}.lo"),
            _parse_rational_field(obj["hi"], f"{label}.hi"),
        )
    except KeyError as exc:
        raise ParseError(f"{label}: missing endpoint {exc}") from None
    except ValueError as exc:
        raise ParseError(f"{label}: {exc}") from None


_SIGNS = {s.value: s for s in Sign}


def _parse_witness(obj: Any) -> Witness:
    if not isinstance(obj, dict):
        raise ParseError(f"witness: expected an object, got {obj!r}")
    sign_text = obj.get("sign")
    if sign_text not in _SIGNS:
        raise ParseError(f"witness: unknown sign {sign_text!r}")
    order = obj.get("derivative_order")
    if not isinstance(order, int):
        raise ParseError(f"witness: bad derivative order {order!r}")
    return Witness(
        point=_parse_rational_field(obj.get("point"), "witness.point"),
        derivative_order=order,
        sign=_SIGNS[sign_text],
        enclosure=parse_enclosure(obj.get("enclosure"), "witness.enclosure"),
    )


def parse_certificate(obj: Any) -> Certificate:
    if not isinstance(obj, dict):
        raise ParseError("certificate: expected an object")
    kind = obj.get("kind")
    if kind not in (KIND_POSITIVITY, KIND_UNIQUE_ZERO):
        raise ParseError(f"certificate: unknown kind {kind!r}")
    m = obj.get("m")
    depth = obj.get("depth_used")
    if not isinstance(m, int) or not isinstance(depth, int):
        raise ParseError("certificate: m and depth_used must be integers")
    witnesses = obj.get("witnesses", [])
    if not isinstance(witnesses, list):
        raise ParseError("certificate: witnesses must be a list")
    zero_bracket = obj.get("zero_bracket")
    min_bracket = obj.get("min_bracket")
    return Certificate(
        kind=kind,
        family=family_from_tag(obj.get("family")),
        theta=_parse_rational_field(obj.get("theta"), "certificate.theta"),
        m=m,
        witnesses=tuple(_parse_witness(w) for w in witnesses),
        zero_bracket=(
            parse_enclosure(zero_bracket, "zero_bracket") if zero_bracket else None
        ),
        min_bracket=(
            parse_enclosure(min_bracket, "min_bracket") if min_bracket else None
        ),
        depth_used=depth,
        domain_end=parse_enclosure(obj.get("domain_end"), "domain_end"),
    )


def _collect_certificate_objects(obj: Any) -> list[dict]:
    """Find certificate-shaped objects anywhere in a JSON document."""
    found: list[dict] = []
    if isinstance(obj, dict):
        if obj.get("kind") in (KIND_POSITIVITY, KIND_UNIQUE_ZERO) and "theta" in obj:
            found.append(obj)
        else:
            for value in obj.values():
                found.extend(_collect_certificate_objects(value))
    elif isinstance(obj, list):
        for value in obj:
            found.extend(_collect_certificate_objects(value))
    return found


# ---------------------------------------------------------------------------
# CSV rendering


def _csv_quote(text: str) -> str:
    return '"' + text.replace('"', '""') + '"'


def _enclosure_csv_fields(enc: Optional[Enclosure]) -> list[str]:
    if enc is None:
        return ["", "", "", ""]
    return [
        _csv_quote(rational_str(enc.lo)),
        _csv_quote(rational_str(enc.hi)),
        to_decimal(enc.lo, "floor", DEC_DIGITS),
        to_decimal(enc.hi, "ceil", DEC_DIGITS),
    ]


_SCAN_CSV_HEADER = (
    "x0,best_constant_lo,best_constant_hi,best_constant_dec_lo,best_constant_dec_hi,"
    "t0_lo,t0_hi,t0_dec_lo,t0_dec_hi,delta_lo,delta_hi,delta_dec_lo,delta_dec_hi,error"
)


def scan_csv(rows: list[ScanRow]) -> str:
    lines = [_SCAN_CSV_HEADER]
    for row in rows:
        fields = [_csv_quote(rational_str(row.x0))]
        fields += _enclosure_csv_fields(row.best_constant)
        fields += _enclosure_csv_fields(row.t0)
        fields += _enclosure_csv_fields(row.delta)
        fields.append(_csv_quote(row.error) if row.error else "")
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"


def coeffs_csv(rows: list[dict[str, Any]]) -> str:
    lines = ["k,coefficient,decimal"]
    for row in rows:
        lines.append(
            f"{row['k']},{_csv_quote(row['coefficient'])},{row['decimal']}"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# command handlers


class _Outcome:
    __slots__ = ("inputs", "results", "raw_text", "exit_code")

    def __init__(self, inputs, results, raw_text=None, exit_code=0):
        self.inputs = inputs
        self.results = results
        self.raw_text = raw_text
        self.exit_code = exit_code


def _cmd_coeffs(args) -> _Outcome:
    family = family_from_tag(args.family)
    if args.upto < 1:
        raise ParseError("--upto must be >= 1")
    values = coeff_prefix(family, args.upto)
    rows = [
        {
            "k": k,
            "coefficient": rational_str(value),
            "decimal": to_decimal(value, "floor", DEC_DIGITS),
        }
        for k, value in enumerate(values, start=1)
    ]
    inputs = {"family": family.tag, "upto": args.upto, "format": args.format}
    if args.format == "csv":
        return _Outcome(inputs, None, raw_text=coeffs_csv(rows))
    return _Outcome(inputs, {"rows": rows})


def _cmd_constant(args) -> _Outcome:
    family = family_from_tag(args.family)
    x0 = parse_rational(args.x0)
    width = parse_rational(args.width)
    from .squeeze import best_constant

    enc = best_constant(family, x0, width)
    inputs = {
        "family": family.tag,
        "x0": rational_str(x0),
        "width": rational_str(width),
    }
    return _Outcome(inputs, {"best_constant": enclosure_payload(enc)})


def _cmd_certify(args) -> _Outcome:
    family = family_from_tag(args.family)
    x0 = parse_rational(args.x0)
    width = parse_rational(args.width)
    result = certify_squeeze(family, x0, width)
    inputs = {
        "family": family.tag,
        "x0": rational_str(x0),
        "width": rational_str(width),
    }
    return _Outcome(inputs, _squeeze_payload(result))


def _cmd_error(args) -> _Outcome:
    family = family_from_tag(args.family)
    x0 = parse_rational(args.x0)
    tol = parse_rational(args.tol)
    report = max_error(family, x0, tol)
    inputs = {
        "family": family.tag,
        "x0": rational_str(x0),
        "tol": rational_str(tol),
    }
    return _Outcome(inputs, _error_payload(report))


def _scan_from_args(args):
    family = family_from_tag(args.family)
    start = parse_rational(args.start)
    stop = parse_rational(args.stop)
    width = parse_rational(args.width)
    tol = parse_rational(args.tol)
    if args.steps < 1:
        raise ParseError("--steps must be >= 1")
    rows = scan(family, start, stop, args.steps, width=width, tol=tol)
    inputs = {
        "family": family.tag,
        "from": rational_str(start),
        "to": rational_str(stop),
        "steps": args.steps,
        "width": rational_str(width),
        "tol": rational_str(tol),
    }
    return family, rows, inputs


def _cmd_scan(args) -> _Outcome:
    _, rows, inputs = _scan_from_args(args)
    inputs["format"] = args.format
    if args.format == "csv":
        return _Outcome(inputs, None, raw_text=scan_csv(rows))
    return _Outcome(inputs, {"rows": [_scan_row_payload(r) for r in rows]})


def _cmd_report(args) -> _Outcome:
    family, rows, inputs = _scan_from_args(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"scan_{family.tag}.csv"
    csv_path.write_text(scan_csv(rows), encoding="utf-8")
    written = [str(csv_path)]

    from . import plotting  # deferred: matplotlib import is slow

    ok_rows = [r for r in rows if r.error is None]
    figures = []
    if ok_rows:
        constant_fig = out_dir / f"best_constant_{family.tag}.png"
        error_fig = out_dir / f"max_error_{family.tag}.png"
        plotting.render_constant_figure(rows, family, str(constant_fig))
        plotting.render_error_figure(rows, family, str(error_fig))
        figures = [str(constant_fig), str(error_fig)]
    inputs["out"] = str(out_dir)
    results = {
        "csv": str(csv_path),
        "figures": figures,
        "rows": len(rows),
        "rows_with_errors": len(rows) - len(ok_rows),
    }
    return _Outcome(inputs, results)


def _cmd_verify(args) -> _Outcome:
    if args.infile == "-":
        text = sys.stdin.read()
        source = "<stdin>"
    else:
        try:
            text = Path(args.infile).read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"cannot read {args.infile!r}: {exc}") from None
        source = args.infile
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: not valid JSON ({exc})") from None
    cert_objects = _collect_certificate_objects(document)
    if not cert_objects:
        raise ParseError(f"{source}: no certificates found")
    verdicts = []
    all_ok = True
    for obj in cert_objects:
        cert = parse_certificate(obj)
        outcome = verify_certificate(cert)
        all_ok = all_ok and outcome.ok
        verdicts.append(
            {
                "kind": cert.kind,
                "family": cert.family.tag,
                "theta": rational_str(cert.theta),
                "ok": outcome.ok,
                "failures": list(outcome.failures),
            }
        )
    inputs = {"in": source}
    results = {"certificates": verdicts, "all_ok": all_ok}
    return _Outcome(inputs, results, exit_code=0 if all_ok else 2)


# ---------------------------------------------------------------------------
# parser and entry point


class _UsageError(ParseError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep exit-code control in run()
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog=_PROG, description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_family(p):
        p.add_argument("--family", required=True, choices=["logcos", "logtan"],
                       help="series family: logcos for cos x, logtan for x/tan x")

    p = sub.add_parser("coeffs", help="exact series coefficients")
    add_family(p)
    p.add_argument("--upto", required=True, type=int, metavar="N")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(handler=_cmd_coeffs)

    p = sub.add_parser("constant", help="best-constant enclosure for (0, x0)")
    add_family(p)
    p.add_argument("--x0", required=True, help="interval end (decimal or p/q)")
    p.add_argument("--width", required=True, help="target enclosure width")
    p.set_defaults(handler=_cmd_constant)

    p = sub.add_parser("certify", help="two-sided squeeze certificates on (0, x0)")
    add_family(p)
    p.add_argument("--x0", required=True)
    p.add_argument("--width", default=str(DEFAULT_CONSTANT_WIDTH))
    p.set_defaults(handler=_cmd_certify)

    p = sub.add_parser("error", help="largest-error report on (0, x0)")
    add_family(p)
    p.add_argument("--x0", required=True)
    p.add_argument("--tol", default=str(DEFAULT_ERROR_TOL))
    p.set_defaults(handler=_cmd_error)

    def add_grid(p):
        add_family(p)
        p.add_argument("--from", dest="start", required=True)
        p.add_argument("--to", dest="stop", required=True)
        p.add_argument("--steps", required=True, type=int)
        p.add_argument("--width", default=str(DEFAULT_CONSTANT_WIDTH))
        p.add_argument("--tol", default=str(DEFAULT_ERROR_TOL))

    p = sub.add_parser("scan", help="best constant and error over a grid")
    add_grid(p)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(handler=_cmd_scan)

    p = sub.add_parser("report", help="scan to CSV plus rendered figures")
    add_grid(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(handler=_cmd_report)

    p = sub.add_parser("verify", help="re-check serialized certificates")
    p.add_argument("--in", dest="infile", required=True,
                   help="JSON file with certificates, or - for stdin")
    p.set_defaults(handler=_cmd_verify)

    return parser


def _document(command, inputs, results, status="ok", error_reason=None):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "results": results,
        "status": status,
    }
    if error_reason is not None:
        doc["error_reason"] = error_reason
    return doc


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def _raw_inputs(args) -> dict:
    skip = {"command", "handler"}
    return {
        key: value
        for key, value in sorted(vars(args).items())
        if key not in skip and value is not None
    }


def run(argv: list[str]) -> int:
    """Execute one CLI invocation; returns the process exit status."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        _emit(_document("(usage)", {}, None, status="error", error_reason=str(exc)))
        return 1

    try:
        outcome = args.handler(args)
    except (ParseError, DomainError, ResourceCapError, ValueError) as exc:
        _emit(
            _document(
                args.command, _raw_inputs(args), None,
                status="error", error_reason=str(exc),
            )
        )
        print(f"{_PROG}: {exc}", file=sys.stderr)
        return 1
    except (CertificationError, ConvergenceError) as exc:
        _emit(
            _document(
                args.command, _raw_inputs(args), None,
                status="error", error_reason=str(exc),
            )
        )
        print(f"{_PROG}: {exc}", file=sys.stderr)
        return 2

    if outcome.raw_text is not None:
        sys.stdout.write(outcome.raw_text)
        return outcome.exit_code
    _emit(_document(args.command, outcome.inputs, outcome.results))
    return outcome.exit_code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
