"""CLI entry point: irsnoma simulate, analytic, validate, preset-list, lint, init."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING, Any

from irsnoma._types import (
    ExperimentSpec,
    IrsNomaError,
    Scheme,
    SystemConfig,
    ValidationRow,
)

if TYPE_CHECKING:
    from irsnoma.simulator import Simulator

logger = logging.getLogger("irsnoma.cli")

Z_LIMIT = 4.0

_INT_KEYS = ("M", "K", "N", "P", "Q")
_FLOAT_KEYS = ("alpha1_sq", "alpha2_sq", "rate_bpcu")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="irsnoma",
        description="IRS-assisted NOMA link simulation and outage analytics",
    )
    sub = parser.add_subparsers(dest="command")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "-v", "--verbose", action="store_true", help="Log progress at DEBUG level"
    )

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--config", help="Path to experiment YAML file")
    source.add_argument("--preset", help="Built-in experiment (see preset-list)")

    run = argparse.ArgumentParser(add_help=False)
    run.add_argument("--seed", type=int, help="Master seed (unsigned 64-bit)")
    run.add_argument("--trials", type=int, help="Monte Carlo trials per point")
    run.add_argument(
        "--snr-db", metavar="START:STOP:STEP",
        help="Transmit SNR grid in dB, inclusive (use --snr-db=-10:0:2 for negative starts)",
    )
    run.add_argument(
        "--scheme", action="append", choices=[s.value for s in Scheme],
        help="Reflection scheme (repeatable)",
    )
    run.add_argument("--out", help="Write CSV to file (default: stdout)")
    run.add_argument(
        "--workers", type=int, default=None,
        help="Worker threads (default: $IRSNOMA_THREADS or 1)",
    )
    run.add_argument("--log", metavar="PATH", help="Append JSONL run records to PATH")

    # irsnoma simulate
    sub.add_parser(
        "simulate", parents=[common, source, run],
        help="Monte Carlo outage sweep to CSV",
    )

    # irsnoma analytic
    sub.add_parser(
        "analytic", parents=[common, source, run],
        help="Closed-form on-off outage over the SNR grid to CSV",
    )

    # irsnoma validate
    validate_parser = sub.add_parser(
        "validate", parents=[common, source, run],
        help="Compare on-off Monte Carlo against the closed forms",
    )
    validate_parser.add_argument(
        "--format", choices=["text", "json", "html"], default="text",
        help="Report format",
    )
    validate_parser.add_argument(
        "--output", help="Write report to file (default: stdout)"
    )
    validate_parser.add_argument(
        "--analytic-set", action="append", default=[], metavar="KEY=VALUE",
        help="Override a system parameter on the closed-form side only",
    )

    # irsnoma preset-list
    sub.add_parser("preset-list", parents=[common], help="List built-in experiments")

    # irsnoma lint
    lint_parser = sub.add_parser(
        "lint", parents=[common, source], help="Static analysis of an experiment"
    )
    lint_parser.add_argument(
        "--for-validation", action="store_true",
        help="Also check that closed forms exist to validate against",
    )

    # irsnoma init
    init_parser = sub.add_parser(
        "init", parents=[common], help="Write a starter experiment.yaml from a preset"
    )
    init_parser.add_argument("--preset", default="fig2a", help="Preset to start from")
    init_parser.add_argument(
        "--path", default="experiment.yaml", help="Destination file"
    )

    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        return 2

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    commands = {
        "simulate": _cmd_simulate,
        "analytic": _cmd_analytic,
        "validate": _cmd_validate,
        "preset-list": _cmd_preset_list,
        "lint": _cmd_lint,
        "init": _cmd_init,
    }
    try:
        return commands[args.command](args)
    except IrsNomaError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2


# ---------------------------------------------------------------------------
# Experiment loading
# ---------------------------------------------------------------------------


def _overrides(args: argparse.Namespace) -> tuple[dict[str, Any], dict[str, str]]:
    overrides: dict[str, Any] = {}
    flags: dict[str, str] = {}
    for key, attr, flag in [
        ("seed", "seed", "--seed"),
        ("trials", "trials", "--trials"),
        ("snr_db", "snr_db", "--snr-db"),
        ("schemes", "scheme", "--scheme"),
        ("out", "out", "--out"),
    ]:
        value = getattr(args, attr, None)
        if value is not None:
            overrides[key] = value
            flags[key] = flag
    return overrides, flags


def _load_experiment(args: argparse.Namespace) -> ExperimentSpec | None:
    """Load the experiment named by --config or --preset; None after printing an error."""
    from irsnoma.loader import load_preset, load_spec

    if bool(args.config) == bool(args.preset):
        print("Error: give exactly one of --config or --preset", file=sys.stderr)
        return None

    overrides, flags = _overrides(args)
    if args.config:
        config_path = Path(args.config)
        if not config_path.exists():
            print(f"Error: config file not found: {config_path}", file=sys.stderr)
            return None
        return load_spec(config_path, overrides=overrides, flags=flags)
    return load_preset(args.preset, overrides=overrides, flags=flags)


def _report_lint(spec: ExperimentSpec, *, validating: bool = False) -> bool:
    """Log lint findings; True when none of them is an error."""
    from irsnoma.lint import lint_spec

    ok = True
    for w in lint_spec(spec, validating=validating):
        if w.severity == "error":
            print(f"Error: {w.code} [{w.key}]: {w.message}", file=sys.stderr)
            ok = False
        else:
            logger.warning("%s [%s]: %s", w.code, w.key, w.message)
    return ok


def _simulator(args: argparse.Namespace, spec: ExperimentSpec) -> Simulator:
    from irsnoma.runlog import RunLogger
    from irsnoma.simulator import Simulator

    return Simulator(
        workers=args.workers,
        served_beam=spec.served_beam,
        run_logger=RunLogger(args.log) if args.log else None,
    )


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _cmd_simulate(args: argparse.Namespace) -> int:
    from irsnoma.report import simulation_csv, write_simulation_csv

    spec = _load_experiment(args)
    if spec is None:
        return 2
    if not _report_lint(spec):
        return 2

    simulator = _simulator(args, spec)
    grid = spec.snr_db.values()
    sweeps = [
        simulator.sweep(template, spec.schemes, grid, spec.trials, spec.seed)
        for template in spec.variants()
    ]
    if spec.out:
        write_simulation_csv(spec.out, sweeps)
        print(f"CSV written to {spec.out}", file=sys.stderr)
    else:
        sys.stdout.write(simulation_csv(sweeps))
    return 0


def _cmd_analytic(args: argparse.Namespace) -> int:
    from irsnoma.report import analytic_csv, write_analytic_csv

    spec = _load_experiment(args)
    if spec is None:
        return 2

    templates, grid = spec.variants(), spec.snr_db.values()
    if spec.out:
        write_analytic_csv(spec.out, templates, grid)
        print(f"CSV written to {spec.out}", file=sys.stderr)
    else:
        sys.stdout.write(analytic_csv(templates, grid))
    return 0


def _parse_analytic_set(items: list[str]) -> dict[str, Any]:
    overrides: dict[str, Any] = {}
    for item in items:
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep:
            raise ValueError(f"--analytic-set expects KEY=VALUE, got {item!r}")
        if key not in (*_INT_KEYS, *_FLOAT_KEYS):
            raise ValueError(
                f"--analytic-set: unknown key '{key}'. Valid: {[*_INT_KEYS, *_FLOAT_KEYS]}"
            )
        try:
            if key in _INT_KEYS:
                overrides[key] = int(raw)
            else:
                overrides[key] = float(Fraction(raw.strip()))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"--analytic-set {key}: cannot parse {raw!r}") from None
    return overrides


def _analytic_template(template: SystemConfig, overrides: dict[str, Any]) -> SystemConfig:
    """The closed-form side of a validation, with ``--analytic-set`` applied."""
    if not overrides:
        return template
    values = dict(overrides)
    if ("N" in values or "Q" in values) and "P" not in values:
        values["P"] = values.get("N", template.N) // values.get("Q", template.Q)
    if "alpha1_sq" in values and "alpha2_sq" not in values:
        values["alpha2_sq"] = 1.0 - values["alpha1_sq"]
    elif "alpha2_sq" in values and "alpha1_sq" not in values:
        values["alpha1_sq"] = 1.0 - values["alpha2_sq"]
    return replace(template, **values)


def _cmd_validate(args: argparse.Namespace) -> int:
    from irsnoma import report
    from irsnoma.analytics import analytic_outage
    from irsnoma.loader import emit_spec

    spec = _load_experiment(args)
    if spec is None:
        return 2
    try:
        analytic_overrides = _parse_analytic_set(args.analytic_set)
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2
    _report_lint(spec, validating=True)

    simulator = _simulator(args, spec)
    grid = spec.snr_db.values()
    rows: list[ValidationRow] = []
    for template in spec.variants():
        reference = _analytic_template(template, analytic_overrides)
        if analytic_outage(reference) is None:
            logger.warning(
                "no closed form for K=%d N=%d Q=%d; skipped",
                reference.K, reference.N, reference.Q,
            )
            continue
        result = simulator.sweep(template, (Scheme.ONOFF,), grid, spec.trials, spec.seed)
        for point in result.points:
            estimate = point.estimates[Scheme.ONOFF]
            expected = analytic_outage(reference.with_snr_db(point.rho_db))
            z = estimate.z_score(expected)
            rows.append(
                ValidationRow(
                    N=template.N,
                    Q=template.Q,
                    rho_db=point.rho_db,
                    trials=estimate.trials,
                    failures=estimate.failures,
                    outage_mc=estimate.p_hat,
                    outage_analytic=expected,
                    z=z,
                    passed=abs(z) <= Z_LIMIT,
                )
            )

    if not rows:
        print("Error: no curve of this experiment has a closed form", file=sys.stderr)
        return 2

    spec_content = emit_spec(spec)
    if args.format == "json":
        output = report.generate_json(rows, Z_LIMIT, spec_content)
    elif args.format == "html":
        output = report.generate_html(rows, Z_LIMIT, spec_content)
    else:
        output = report.generate_text(rows, Z_LIMIT, spec_content)

    if args.output:
        report.write_text(args.output, output)
        print(f"Report written to {args.output}", file=sys.stderr)
    else:
        print(output)

    return 0 if all(r.passed for r in rows) else 1


def _cmd_preset_list(args: argparse.Namespace) -> int:
    from irsnoma.loader import PRESETS, preset_names

    for name in preset_names():
        description, _ = PRESETS[name]
        print(f"  {name:<6} {description}")
    return 0


def _cmd_lint(args: argparse.Namespace) -> int:
    from irsnoma.lint import lint_spec

    spec = _load_experiment(args)
    if spec is None:
        return 2

    warnings = lint_spec(spec, validating=args.for_validation)

    if not warnings:
        print("No issues found.")
        return 0

    errors = [w for w in warnings if w.severity == "error"]
    warns = [w for w in warnings if w.severity == "warning"]

    for w in warnings:
        prefix = "ERROR" if w.severity == "error" else "WARN"
        key_ctx = f" [{w.key}]" if w.key else ""
        print(f"  {prefix} {w.code}{key_ctx}: {w.message}")

    print(f"\n{len(errors)} error(s), {len(warns)} warning(s)")
    return 1 if errors else 0


def _cmd_init(args: argparse.Namespace) -> int:
    from irsnoma.loader import emit_spec, load_preset

    path = Path(args.path)
    if path.exists():
        print(f"  skip  {path} (already exists)", file=sys.stderr)
        return 0

    path.write_text(emit_spec(load_preset(args.preset)), encoding="utf-8")
    print(f"  wrote {path}")
    print(f"\nRun: irsnoma lint --config {path}")
    print(f"     irsnoma simulate --config {path} --out results.csv")
    return 0


if __name__ == "__main__":
    sys.exit(main())
