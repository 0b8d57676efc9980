"""Command-line interface.

Exit codes: 0 success, 1 config or argument error, 2 validation failure,
3 numeric diagnostic.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys

import numpy as np

from .cavity import CavityError
from .config import load_config
from .experiments import SweepAxis, SweepSpec, geometry_estimate, sweep, tolerance_table
from .metrics import NumericDiagnosticError, evaluate
from .protocols import ChainConfig, ConfigError, ObjectState, run_chain
from .tables import OutputTable, write_atomic
from .validation import format_report, run_validation

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3

logger = logging.getLogger("zenocat")


class ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad arguments; 2 is reserved for validation failures here
    def error(self, message):
        raise ArgumentError(message)


def _grid(args):
    if args.count < 1:
        raise ConfigError("count", f"must be >= 1, got {args.count}")
    if args.count > 1 and not args.max > args.min:
        raise ConfigError("max", f"must exceed --min ({args.min}) when --count > 1")
    if args.log:
        if args.min <= 0:
            raise ConfigError("min", "must be > 0 for a log grid")
        return np.geomspace(args.min, args.max, args.count) if args.count > 1 else np.array([args.min])
    return np.linspace(args.min, args.max, args.count) if args.count > 1 else np.array([args.min])


def cmd_simulate(args):
    cfg = load_config(args.config)
    trace = cfg.trace or args.trace is not None
    outcome = cfg.estimator().fit().simulate(cfg.alpha, trace=trace)
    report = evaluate(outcome, cfg.alpha)
    for name, value in (("F", report.fidelity), ("F_ef", report.effective_fidelity),
                        ("C_a", report.cattiness), ("alpha_ef_sq", report.alpha_ef_sq),
                        ("v_max", report.v_max)):
        print(f"{name} = {value:.12f}")
    if args.trace is not None:
        table = OutputTable(["cycle", "branch", "zone", "re", "im"], [list(r) for r in outcome.trace_rows()])
        write_atomic(args.trace, table.to_csv())
    return EXIT_OK


def cmd_sweep(args):
    cfg = load_config(args.config)
    spec = SweepSpec(SweepAxis(args.axis), tuple(_grid(args)), cfg.run_config(),
                     include_single_reflection=args.single, mode=cfg.mode)
    table = sweep(spec)
    write_atomic(args.out, table.to_csv())
    print(f"wrote {len(table.rows)} rows to {args.out}")
    return EXIT_OK


def read_rows(path):
    """``(alpha_sq, m_cycles, threshold)`` triples from a CSV file with a header."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            expected = ["alpha_sq", "m_cycles", "threshold"]
            if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != expected:
                raise ConfigError("rows", f"header must be {','.join(expected)}")
            triples = []
            for lineno, row in enumerate(reader, start=2):
                try:
                    alpha_sq = float(row["alpha_sq"])
                    m_raw = float(row["m_cycles"])
                    threshold = float(row["threshold"])
                except (TypeError, ValueError):
                    raise ConfigError("rows", f"line {lineno}: non-numeric value") from None
                if not (math.isfinite(alpha_sq) and alpha_sq > 0):
                    raise ConfigError("rows", f"line {lineno}: alpha_sq must be > 0")
                if m_raw != int(m_raw) or m_raw < 1:
                    raise ConfigError("rows", f"line {lineno}: m_cycles must be an integer >= 1")
                if not (math.isfinite(threshold) and threshold > 0):
                    raise ConfigError("rows", f"line {lineno}: threshold must be > 0")
                triples.append((alpha_sq, int(m_raw), threshold))
    except OSError as exc:
        raise ConfigError("rows", f"cannot read {path}: {exc.strerror}") from exc
    if not triples:
        raise ConfigError("rows", "no data rows")
    return triples


def cmd_table(args):
    triples = read_rows(args.rows)
    cavity, mode = None, "multi"
    if args.config is not None:
        cfg = load_config(args.config)
        cavity, mode = cfg.cavity, cfg.mode
    table = tolerance_table(triples, args.metric, cavity=cavity, mode=mode)
    write_atomic(args.out, table.to_csv())
    print(f"wrote {len(table.rows)} rows to {args.out}")
    return EXIT_OK


def cmd_chain(args):
    if args.alpha_sq <= 0:
        raise ConfigError("alpha_sq", "must be > 0")
    theta = args.theta if args.theta is not None else math.pi / (2 * args.stages)
    config = ChainConfig(math.sqrt(args.alpha_sq), args.stages, theta, ObjectState[args.object.upper()])
    final, losses = run_chain(config)
    print(f"zone0 = {final.a0.real:.12f} {final.a0.imag:+.12f}j  (|.|^2 = {abs(final.a0) ** 2:.12f})")
    print(f"zone1 = {final.a1.real:.12f} {final.a1.imag:+.12f}j  (|.|^2 = {abs(final.a1) ** 2:.12f})")
    print(f"absorbed = {sum(abs(x) ** 2 for x in losses):.12f}")
    return EXIT_OK


def cmd_geometry(args):
    est = geometry_estimate(args.tp * 1e-6, args.ts * 1e-6, args.m_cycles)
    print(f"l_min = {est.l_min:.6f} m")
    print(f"total_flight = {est.total_flight:.6f} m")
    return EXIT_OK


def cmd_validate(args):
    passed, results = run_validation()
    sys.stdout.write(format_report(results))
    return EXIT_OK if passed else EXIT_VALIDATION


def build_parser():
    parser = _Parser(prog="zenocat", description="Zeno-blockade cat-state interferometer simulator.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="run one configuration and print its metrics")
    p.add_argument("--config", required=True)
    p.add_argument("--trace", help="write the per-cycle amplitude trace to this CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="sweep one parameter and write a CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--axis", required=True, choices=[a.value for a in SweepAxis])
    p.add_argument("--min", type=float, required=True)
    p.add_argument("--max", type=float, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--log", action="store_true", help="geometric grid")
    p.add_argument("--single", action="store_true", help="add single-reflection columns")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("table", help="loss tolerance for each (alpha_sq, m_cycles, threshold) row")
    p.add_argument("--metric", required=True, choices=["fef", "cattiness"])
    p.add_argument("--rows", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--config", help="take cavity rates and engine mode from this config")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("chain", help="chain Mach-Zehnder interferometer")
    p.add_argument("--alpha-sq", type=float, default=1.0)
    p.add_argument("--stages", type=int, required=True)
    p.add_argument("--theta", type=float, help="beam splitter angle (default pi/(2*stages))")
    p.add_argument("--object", choices=["pass", "block", "phase"], default="block")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("geometry", help="arm length and flight distance")
    p.add_argument("--tp", type=float, required=True, help="pulse length in microseconds")
    p.add_argument("--ts", type=float, default=0.0, help="switching time in microseconds")
    p.add_argument("--m-cycles", type=int, default=1)
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("validate", help="run the self-validation suite")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (CavityError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericDiagnosticError, FloatingPointError, OverflowError) as exc:
        print(f"numeric diagnostic: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
