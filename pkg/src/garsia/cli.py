"""Command-line front end.

Exit codes: 0 success, 2 bad input, 3 certificate incomplete (pending
cells), 4 verification failure, 5 resource limit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .algebraic import AlgebraicReal, Extent, sturm_isolate
from .certify import (
    DEFAULT_PRECISION,
    Certificate,
    global_certify,
    verify_certificate,
    window_certificate,
)
from .entropy import AlgebraicField, ResourceLimitError, entropy_csv, entropy_ratio, multiplicity_tables
from .fields import DEFAULT_K_MAX, classify
from .overlap import max_overlap, overlap_at
from .poly import IntPolynomial
from .rational import DomainError, RationalInterval, format_rational, parse_rational
from .transitions import format_point, isolate_transitions

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PENDING = 3
EXIT_VERIFY = 4
EXIT_RESOURCE = 5


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    args: argparse.Namespace


def _progress(quiet: bool):
    if quiet:
        return None
    start = time.monotonic()

    def report(msg: str) -> None:
        print(f"[{time.monotonic() - start:8.1f}s] {msg}", file=sys.stderr, flush=True)

    return report


def parse_coeffs(text: str) -> IntPolynomial:
    """Comma-separated integer coefficients, highest degree first."""
    try:
        coeffs = [int(c) for c in text.replace(" ", "").split(",") if c]
    except ValueError as exc:
        raise UsageError(f"bad polynomial coefficients {text!r}") from exc
    p = IntPolynomial.from_high(coeffs)
    if p.degree < 1:
        raise UsageError(f"polynomial {text!r} must be nonconstant")
    return p


def parse_beta(text: str, isolation: Optional[Sequence[str]] = None):
    """``p/q`` (exact rational) or ``minpoly:c_d,...,c_0`` with an optional isolation interval."""
    text = text.strip()
    if text.startswith("minpoly:"):
        p = parse_coeffs(text[len("minpoly:"):])
        window = RationalInterval(1, 2)
        if isolation:
            window = RationalInterval(parse_rational(isolation[0]), parse_rational(isolation[1]))
        roots = sturm_isolate(p, window)
        if len(roots) != 1:
            raise UsageError(f"{p} has {len(roots)} roots strictly inside {window}; give an isolating interval")
        return p, roots[0]
    try:
        b = parse_rational(text, allow_decimal=False)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return None, b


def _window(args) -> RationalInterval:
    try:
        lo, hi = (parse_rational(v) for v in args.window)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not 1 < lo < hi <= 2:
        raise UsageError(f"window must satisfy 1 < lo < hi <= 2, got {args.window}")
    return RationalInterval(lo, hi)


def _target(args) -> Fraction:
    try:
        t = parse_rational(args.target)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not 0 < t < 1:
        raise UsageError("target must lie in (0, 1)")
    return t


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_certificate(cert: Certificate, args) -> int:
    text = cert.to_csv() if args.format == "csv" else cert.dumps()
    _emit(text, args.output)
    pend = cert.pending()
    print(
        f"{len(cert.cells)} cells, {len(pend)} pending; status {'complete' if not pend else 'pending'}",
        file=sys.stderr,
    )
    return EXIT_OK if not pend else EXIT_PENDING


def _workers(args) -> int:
    if args.workers is not None:
        return args.workers
    env = os.environ.get("GARSIA_WORKERS")
    return int(env) if env else 1


# commands ---------------------------------------------------------------------


def cmd_certify(args) -> int:
    target = _target(args)
    if args.n_max < 1:
        raise UsageError("--n-max must be >= 1")
    cert = global_certify(
        target,
        args.n_max,
        precision_bits=args.precision_bits,
        prune=not args.no_prune,
        workers=_workers(args),
        progress=_progress(args.quiet),
    )
    return _emit_certificate(cert, args)


def cmd_window_certify(args) -> int:
    target = _target(args)
    w = _window(args)
    if args.n < 1 or args.n_min < 1 or args.n_min > args.n:
        raise UsageError("need 1 <= --n-min <= --n")
    window = Extent.from_interval(w, args.closed, args.closed)
    cert = window_certificate(
        window,
        target,
        args.n,
        n_min=args.n if args.fixed else args.n_min,
        precision_bits=args.precision_bits,
        prune=not args.no_prune,
        workers=_workers(args),
        progress=_progress(args.quiet),
    )
    return _emit_certificate(cert, args)


def cmd_mn(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    poly, beta = parse_beta(args.beta, args.isolation)
    if poly is None:
        if not 1 < beta < 2:
            raise UsageError("beta must lie in (1, 2)")
        m, x = max_overlap(args.n, beta)
        print(f"m = {m}")
        print(f"witness_x = {format_rational(x)}")
    else:
        m = overlap_at(args.n, beta)
        print(f"m = {m}")
    return EXIT_OK


def cmd_transitions(args) -> int:
    w = _window(args)
    ts = isolate_transitions(args.n, w, prune=not args.no_prune)
    if args.json:
        _emit(ts.dumps() + "\n", args.output)
    else:
        lines = [f"{len(ts.points)} transition points for n = {args.n} in ({w.lo}, {w.hi})"]
        lines += [format_point(p) for p in ts.points]
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_entropy(args) -> int:
    poly, beta = parse_beta(args.beta, args.isolation)
    if poly is None:
        poly = IntPolynomial((-beta.numerator, beta.denominator))
        root = AlgebraicReal.from_rational(beta)
    else:
        root = beta
    field_ = AlgebraicField(poly, root)
    progress = _progress(args.quiet)
    tables = []
    for t in multiplicity_tables(field_, args.n, args.precision_bits, max_keys=args.max_keys):
        r = entropy_ratio(t, field_, args.precision_bits)
        tables.append(t)
        if progress:
            progress(f"n={t.n}: #D_n={t.distinct}, ratio in [{float(r.lo):.10f}, {float(r.hi):.10f}]")
    _emit(entropy_csv(tables), args.output)
    return EXIT_OK


def cmd_classify(args) -> int:
    poly = parse_coeffs(args.minpoly)
    window = RationalInterval(1, 2)
    if args.isolation:
        window = RationalInterval(parse_rational(args.isolation[0]), parse_rational(args.isolation[1]))
    roots = sturm_isolate(poly, window)
    if len(roots) != 1:
        raise UsageError(f"{poly} has {len(roots)} roots strictly inside {window}")
    report = classify(AlgebraicField(poly, roots[0]), args.k_max)
    _emit(json.dumps(report.to_json(), indent=1, sort_keys=True) + "\n", args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        with open(args.certificate, encoding="utf-8") as fh:
            cert = Certificate.loads(fh.read())
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"cannot read certificate: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    verdict = verify_certificate(cert, _progress(args.quiet))
    print(verdict.summary())
    if not verdict.valid:
        return EXIT_VERIFY
    return EXIT_OK if verdict.complete else EXIT_PENDING


# parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="garsia", description="Certified bounds on Garsia's entropy H_beta.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, cert=False):
        p.add_argument("-q", "--quiet", action="store_true", help="no progress on stderr")
        p.add_argument("-o", "--output", help="write to this file instead of stdout")
        p.add_argument("--precision-bits", type=int, default=DEFAULT_PRECISION)
        if cert:
            p.add_argument("--format", choices=["certificate-json", "csv"], default="certificate-json")
            p.add_argument("--workers", type=int, default=None, help="worker processes (default 1, or $GARSIA_WORKERS)")
            p.add_argument("--no-prune", action="store_true", help="disable prefix pruning")

    p = sub.add_parser("certify", help="certificate for H_beta >= target on (1, 2)")
    p.add_argument("--target", required=True)
    p.add_argument("--n-max", type=int, required=True)
    common(p, cert=True)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("window-certify", help="certificate on one window, escalating n up to --n")
    p.add_argument("--n", type=int, required=True, help="largest word length")
    p.add_argument("--n-min", type=int, default=1, help="first word length of the escalation")
    p.add_argument("--fixed", action="store_true", help="use word length --n only, no escalation")
    p.add_argument("--window", nargs=2, required=True, metavar=("LO", "HI"))
    p.add_argument("--closed", action="store_true", help="include the window end points")
    p.add_argument("--target", required=True)
    common(p, cert=True)
    p.set_defaults(func=cmd_window_certify)

    p = sub.add_parser("mn", help="m_n(beta) at a rational or algebraic beta")
    p.add_argument("--beta", required=True, help="p/q or minpoly:c_d,...,c_0")
    p.add_argument("--isolation", nargs=2, metavar=("LO", "HI"))
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_mn)

    p = sub.add_parser("transitions", help="candidate transition points of m_n in a window")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--window", nargs=2, required=True, metavar=("LO", "HI"))
    p.add_argument("--json", action="store_true")
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_transitions)

    p = sub.add_parser("entropy", help="exact H_n(beta) / (n log beta) upper bounds")
    p.add_argument("--beta", required=True, help="p/q or minpoly:c_d,...,c_0")
    p.add_argument("--isolation", nargs=2, metavar=("LO", "HI"))
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--max-keys", type=int, default=50_000_000)
    common(p)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("classify", help="field-degree and Pisot criteria for dim = 1")
    p.add_argument("--minpoly", required=True, help="c_d,...,c_0")
    p.add_argument("--isolation", nargs=2, metavar=("LO", "HI"))
    p.add_argument("--k-max", type=int, default=DEFAULT_K_MAX)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="audit a certificate file")
    p.add_argument("certificate")
    p.add_argument("-q", "--quiet", action="store_true")
    p.set_defaults(func=cmd_verify)
    return ap


def run(config: RunConfig) -> int:
    try:
        return config.args.func(config.args)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceLimitError, MemoryError) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return run(RunConfig(args.command, args))


if __name__ == "__main__":
    sys.exit(main())
