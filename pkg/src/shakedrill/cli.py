"""Command-line interface: simulate, spectrum, serve, and validate subcommands.

Exit codes: 0 success, 1 usage error, 2 bundle/parse error, 3 out-of-bounds
site. Diagnostics go to stderr as single lines.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .gm_field import OutOfBoundsError, SitePoint
from .scenario import ScenarioError, load_bundle, report_to_text, run_drill
from .service import ServiceConfig, serve
from .timeseries import SeriesError, parse_accel, response_spectrum

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BUNDLE = 2
EXIT_OUT_OF_BOUNDS = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the drill CLI reserves 2 for bundle errors."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _build_parser() -> _Parser:
    parser = _Parser(prog="shakedrill", description="Scenario earthquake drill engine")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    simulate = sub.add_parser("simulate", help="run one drill and write the report")
    simulate.add_argument("--lat", type=float, required=True)
    simulate.add_argument("--lon", type=float, required=True)
    simulate.add_argument("--room", choices=["residence", "hospital"], required=True)
    simulate.add_argument("--seed", type=int, required=True)
    simulate.add_argument("--bundle", required=True, help="path to the bundle manifest")
    simulate.add_argument("--out", help="report path (default: stdout)")
    simulate.add_argument(
        "--envelope-window",
        type=float,
        default=1.0,
        help="moving-RMS window for the intensity envelope, seconds (default 1.0)",
    )

    spectrum = sub.add_parser("spectrum", help="response spectrum of a record, CSV out")
    spectrum.add_argument("--input", required=True, help="acceleration record file")
    spectrum.add_argument("--periods", required=True, help="comma-separated periods in s")
    spectrum.add_argument("--damping", type=float, required=True)
    spectrum.add_argument("--out", required=True, help="CSV output path")

    server = sub.add_parser("serve", help="serve the HTTP API for one bundle")
    server.add_argument("--bundle", required=True)
    server.add_argument("--port", type=int, required=True)
    server.add_argument("--cors", action="store_true")
    server.add_argument("--host", default="127.0.0.1")

    validate = sub.add_parser("validate", help="exit 0 iff the bundle satisfies all invariants")
    validate.add_argument("--bundle", required=True)

    return parser


def _cmd_simulate(args: argparse.Namespace) -> int:
    try:
        bundle = load_bundle(args.bundle)
    except ValueError as exc:
        return _fail(EXIT_BUNDLE, str(exc))
    try:
        site = SitePoint(args.lon, args.lat)
    except ValueError as exc:
        return _fail(EXIT_OUT_OF_BOUNDS, f"site out of bounds: {exc}")
    try:
        report = run_drill(bundle, site, args.room, args.seed, envelope_window=args.envelope_window)
    except OutOfBoundsError as exc:
        return _fail(EXIT_OUT_OF_BOUNDS, str(exc))
    except ScenarioError as exc:
        return _fail(EXIT_BUNDLE, str(exc))
    text = report_to_text(report)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_spectrum(args: argparse.Namespace) -> int:
    try:
        periods = [float(p) for p in args.periods.split(",") if p]
    except ValueError as exc:
        return _fail(EXIT_USAGE, f"bad periods list: {exc}")
    if not periods or any(p <= 0 for p in periods):
        return _fail(EXIT_USAGE, f"periods must be positive, got {args.periods!r}")
    if any(b <= a for a, b in zip(periods, periods[1:])):
        return _fail(EXIT_USAGE, f"periods must be strictly increasing, got {args.periods!r}")
    if not 0.0 < args.damping < 1.0:
        return _fail(EXIT_USAGE, f"damping must be in (0, 1), got {args.damping}")
    record_path = Path(args.input)
    if not record_path.is_file():
        return _fail(EXIT_BUNDLE, f"record not found: {record_path}")
    try:
        record = parse_accel(record_path.read_text())
    except SeriesError as exc:
        return _fail(EXIT_BUNDLE, f"{record_path}: {exc}")
    psa = response_spectrum(record, periods, args.damping)
    lines = ["period_s,psa_g"]
    lines.extend(f"{period!r},{value!r}" for period, value in zip(periods, psa))
    Path(args.out).write_text("\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    try:
        config = ServiceConfig(
            port=args.port, bundle_path=args.bundle, cors_allowed=args.cors, host=args.host
        )
    except ValueError as exc:
        return _fail(EXIT_USAGE, str(exc))
    try:
        serve(config)
    except ValueError as exc:
        return _fail(EXIT_BUNDLE, str(exc))
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        bundle = load_bundle(args.bundle)
    except ValueError as exc:
        return _fail(EXIT_BUNDLE, str(exc))
    print(
        f"bundle OK: scenario {bundle.field.scenario_name!r}, "
        f"{bundle.field.ncols}x{bundle.field.nrows} grid, "
        f"{len(bundle.library)} components, {len(bundle.rooms)} rooms"
    )
    for note in bundle.warnings:
        print(f"warning: {note}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "simulate": _cmd_simulate,
        "spectrum": _cmd_spectrum,
        "serve": _cmd_serve,
        "validate": _cmd_validate,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
