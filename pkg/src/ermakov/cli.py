"""Command-line scenario runner.

    ermakov run    --config scenario.json [--out series.csv]
    ermakov verify --config scenario.json [--report report.json]
    ermakov sweep  --config scenario.json --param nu --values 2,3.7 [--out table.csv]

Exit status: 0 success, 1 verification failure, 2 config or runtime error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import bogoliubov, mode_solver, operator_algebra, profiles
from .scenario import ConfigError, format_csv, load_config, run, sweep, verify, SWEEP_COLUMNS

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_ERROR = 2

_RUNTIME_ERRORS = (
    ConfigError,
    profiles.ProfileError,
    mode_solver.InitializationError,
    mode_solver.DivergenceError,
    bogoliubov.UnitarityError,
    operator_algebra.WronskianError,
    OSError,
)


def _write(path, text):
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _out_path(arg, cfg, key, flag):
    path = arg or cfg.output.get(key)
    if not path:
        raise ConfigError(f"output.{key}: no output path (pass {flag} or set output.{key})")
    return path


def _parse_values(text):
    if text.strip() == "":
        return []
    try:
        return [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"values: {exc}") from exc


def cmd_run(args):
    cfg = load_config(args.config)
    path = _out_path(args.out, cfg, "csv", "--out")
    result = run(cfg)
    _write(path, format_csv(result.columns, result.rows))
    s = result.summary
    print(
        f"{s['samples']} samples to t={s['t_final']:g}: |beta|^2={s['beta2_final']:.10g} "
        f"r={s['r_final']:.10g} max wronskian residual={s['max_wronskian_residual']:.3e}"
    )
    return EXIT_OK


def cmd_verify(args):
    cfg = load_config(args.config)
    report = verify(cfg)
    path = args.report or cfg.output.get("report")
    if path:
        _write(path, json.dumps(report.to_dict(), indent=2) + "\n")
    print("\n".join(report.lines()))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_sweep(args):
    cfg = load_config(args.config)
    values = _parse_values(args.values)
    table = sweep(cfg, args.param, values, workers=args.workers)
    text = format_csv(SWEEP_COLUMNS, table)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ermakov", description="Invariant-operator analysis of time-dependent oscillators")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="integrate a scenario and write the CSV time series")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="check invariants (and the Fock oracle if enabled)")
    p.add_argument("--config", required=True)
    p.add_argument("--report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="scan one numeric profile parameter")
    p.add_argument("--config", required=True)
    p.add_argument("--param", required=True)
    p.add_argument("--values", required=True, help="comma-separated list")
    p.add_argument("--out")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _RUNTIME_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
