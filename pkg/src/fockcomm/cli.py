"""Command-line experiment runner.

Subcommands: gyni, gyni-sweep, bell-sweep, theorem, prepare-check, validate,
plot-data.  Experiments are driven by a TOML configuration; any key can be
overridden with --set section.key=value (or directly --section.key=value).

Exit codes: 0 success, 1 configuration error, 2 validation failure,
3 numerical diagnostic in strict mode.
"""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, load_config
from .fock import FockError
from .plotdata import PlotDataError, emit_plot_data
from .runner import run
from .validation import SUITES, run_suites

RUN_KINDS = ("gyni", "gyni-sweep", "bell-sweep", "theorem", "prepare-check")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fockcomm",
        description="Simulate two-way communication and Bell tests with non-classical light.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for kind in RUN_KINDS:
        p = sub.add_parser(kind, help=f"run a {kind} experiment from a TOML config")
        p.add_argument("--config", required=True, help="path to the TOML configuration")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a configuration key (repeatable)")
        p.add_argument("--strict", action="store_true",
                       help="exit 3 when any probability leaves [-1e-9, 1+1e-9]")
        p.add_argument("--jobs", type=int, default=None, help="worker processes for sweeps")
        p.add_argument("--csv", default=None, help="output CSV path (overrides config)")
        p.add_argument("--manifest", default=None, help="manifest path (overrides config)")

    v = sub.add_parser("validate", help="run the library's validation suites")
    v.add_argument("--only", default=None,
                   help=f"comma-separated suite names (known: {', '.join(SUITES)})")
    v.add_argument("--seed", type=int, default=1,
                   help="seed for sampled checks (default 1, the frozen validation run)")

    d = sub.add_parser("plot-data", help="emit gnuplot-ready grid files from a result CSV")
    d.add_argument("--csv", required=True, help="CSV produced by a run")
    d.add_argument("--figure", required=True, help="figure id (e.g. fig2, fig1b, fig-ch31)")
    d.add_argument("--out", default=".", help="output directory")
    return parser


def _collect_overrides(args, extras) -> list:
    overrides = list(args.set)
    for item in extras:
        if not item.startswith("--") or "=" not in item:
            raise ConfigError(f"unrecognized argument {item!r}")
        overrides.append(item[2:])
    overrides.append(f"experiment.kind={args.command}")
    if args.strict:
        overrides.append("run.strict=true")
    if args.jobs is not None:
        overrides.append(f"run.jobs={args.jobs}")
    if args.csv is not None:
        overrides.append(f"output.csv={args.csv}")
    if args.manifest is not None:
        overrides.append(f"output.manifest={args.manifest}")
    return overrides


def main(argv=None) -> int:
    parser = _build_parser()
    args, extras = parser.parse_known_args(argv)

    if args.command == "validate":
        if extras:
            print(f"error: unrecognized arguments: {' '.join(extras)}", file=sys.stderr)
            return 1
        only = [s.strip() for s in args.only.split(",")] if args.only else None
        try:
            results = run_suites(only=only, seed=args.seed)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        width = max(len(f"{r.suite}: {r.name}") for r in results)
        failed = 0
        for r in results:
            label = f"{r.suite}: {r.name}"
            print(f"{label:<{width}}  [{r.status.upper():>5}]  {r.observed}")
            failed += r.status == "fail"
        print(f"{len(results)} checks, {failed} failed")
        return 2 if failed else 0

    if args.command == "plot-data":
        if extras:
            print(f"error: unrecognized arguments: {' '.join(extras)}", file=sys.stderr)
            return 1
        try:
            out = emit_plot_data(args.csv, args.figure, args.out)
        except (PlotDataError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print(f"wrote {out['grid']} and {out['sidecar']} ({out['points']} points)")
        return 0

    try:
        overrides = _collect_overrides(args, extras)
        config = load_config(args.config, overrides)
        outcome = run(config)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FockError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {outcome.csv_path} ({len(outcome.rows)} rows) and {outcome.manifest_path}")
    if outcome.status == 3:
        print("error: numerical diagnostics exceeded tolerance in strict mode", file=sys.stderr)
    return outcome.status


if __name__ == "__main__":
    sys.exit(main())
