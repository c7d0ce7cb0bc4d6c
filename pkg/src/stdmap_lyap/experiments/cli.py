"""Command line entry point: ``stdmap-lyap {sweep,validate,recur,green,plot}``.

Exit codes: 0 success, 1 validation failure, 2 configuration error.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time

from . import io
from .config import ConfigError, ExperimentConfig, parse_config_text
from .plotting import plot_csv
from .runs import run_green, run_recurrence, run_sweep
from .validate import format_report, run_validate

# flag -> config key; flags override the config file
FLAG_KEYS = {
    "seed": "seed", "out": "out", "lam": "lambda", "emin": "emin", "emax": "emax",
    "egrid": "egrid", "N": "N", "samples": "samples", "epsilon": "epsilon",
}


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", metavar="PATH", help="key=value config file")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override any config key (repeatable)")
    p.add_argument("--seed", type=int, metavar="U64")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--lambda", dest="lam", type=float, metavar="F")
    p.add_argument("--emin", type=float, metavar="F")
    p.add_argument("--emax", type=float, metavar="F")
    p.add_argument("--egrid", type=int, metavar="N")
    p.add_argument("--N", type=int, metavar="INT")
    p.add_argument("--samples", type=int, metavar="INT")
    p.add_argument("--epsilon", type=float, metavar="F")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stdmap-lyap", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="mean Lyapunov exponent on an energy grid")
    _common(p)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--plot", action="store_true", help="also write an SVG next to the CSV")

    p = sub.add_parser("validate", help="run the oracle suite")
    p.add_argument("--seed", type=int, default=0, metavar="U64")
    p.add_argument("--out", metavar="PATH", help="optional CSV report")
    p.add_argument("--quick", action="store_true", help="short orbits, same tolerances")

    p = sub.add_parser("recur", help="near returns and omega-limit defects")
    _common(p)

    p = sub.add_parser("green", help="reflectionless defect of a potential window")
    _common(p)
    p.add_argument("--boundary", choices=["transparent", "dirichlet"], default="transparent")
    p.add_argument("--plot", action="store_true")

    p = sub.add_parser("plot", help="render a sweep or green CSV as SVG")
    p.add_argument("csv")
    p.add_argument("--out", metavar="PATH", required=True)
    return parser


def load_config(args) -> ExperimentConfig:
    pairs = parse_config_text(open(args.config).read()) if args.config else {}
    for item in args.set:
        if "=" not in item:
            raise ConfigError("--set", f"expected KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        pairs[key.strip()] = value.strip()
    for attr, key in FLAG_KEYS.items():
        value = getattr(args, attr, None)
        if value is not None:
            pairs[key] = value
    return ExperimentConfig.from_pairs(pairs)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    started = time.perf_counter()

    if args.command == "validate":
        results = run_validate(quick=args.quick, seed=args.seed)
        print(format_report(results))
        if args.out:
            rows = [(r.name, r.observed, r.tolerance, int(r.passed)) for r in results]
            io.write_csv(args.out, io.VALIDATE_COLUMNS, rows,
                         [f"seed={args.seed}", f"quick={args.quick}"])
        return 0 if all(r.passed for r in results) else 1

    if args.command == "plot":
        try:
            print(plot_csv(args.csv, args.out))
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        return 0

    try:
        cfg = load_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        if args.command == "sweep":
            paths = run_sweep(cfg, workers=args.workers, plot=args.plot)
        elif args.command == "recur":
            paths = run_recurrence(cfg)
        else:
            paths = run_green(cfg, boundary=args.boundary, plot=args.plot)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    io.write_manifest(args.command, cfg.echo(), paths, started)
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
