"""Command-line entry point.

    scaledgauge <subcommand> --config <path> [--out <dir>] [--seed <n>]
                [--workers <n>]

Subcommands run one experiment each; ``all`` runs every experiment.
Exit status: 0 all checks passed, 1 a check failed, 2 configuration
error, 3 internal error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import time
import traceback
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .config import ExperimentConfig, config_from_file
from .errors import ConfigError
from .experiments import EXPERIMENT_ORDER, EXPERIMENTS
from .reports import write_report

SUBCOMMANDS = EXPERIMENT_ORDER + ("all",)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scaledgauge",
        description="Verification experiments for scaled number structures "
                    "and the real scale gauge field.",
    )
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", required=True, help="JSON configuration file")
    parser.add_argument("--out", default=None, help="output directory "
                        "(default: output_dir from the configuration)")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the configuration seed")
    parser.add_argument("--workers", type=int, default=None,
                        help="override the worker count for 'all'")
    return parser


def _run_one(name: str, cfg: ExperimentConfig):
    started = time.perf_counter()
    report, tables = EXPERIMENTS[name](cfg)
    report.duration_s = time.perf_counter() - started
    return report, tables


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_file(args.config)
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("seed must be non-negative")
            cfg = dataclasses.replace(cfg, seed=args.seed)
        if args.workers is not None:
            if args.workers < 1:
                raise ConfigError("workers must be >= 1")
            cfg = dataclasses.replace(cfg, workers=args.workers)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    out_dir = Path(args.out) if args.out else Path(cfg.output_dir)
    names = list(EXPERIMENT_ORDER) if args.subcommand == "all" else [args.subcommand]

    try:
        if len(names) > 1 and cfg.workers > 1:
            with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
                futures = [pool.submit(_run_one, n, cfg) for n in names]
                results = [f.result() for f in futures]
        else:
            results = [_run_one(n, cfg) for n in names]
        all_passed = True
        for report, tables in results:
            write_report(out_dir, report, tables)
            status = "PASS" if report.passed else "FAIL"
            print(f"{report.experiment:<24} {status}  "
                  f"({len(report.checks)} checks, {report.duration_s:.2f}s)")
            if not report.passed:
                all_passed = False
                for check in report.checks:
                    if not check.passed:
                        print(f"  failed: {check.name} observed={check.observed!r} "
                              f"({check.relation} "
                              f"{check.tolerance if check.relation == 'max<=' else check.expected!r})")
        return 0 if all_passed else 1
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 3


if __name__ == "__main__":
    sys.exit(main())
