"""Command-line entry point.

Usage::

    twostage COMMAND [--config FILE] [--data FILE] [--out DIR] [--seed N]
                     [--period N | --period-auto] [--h N] [--H N] [--workers N]

Commands: compare, augment, sweep, synth, train, predict, eval.  Flags
override values from the config file; relative data paths also resolve
against $TWOSTAGE_DATA_DIR.  Exit status is 0 only when every declared
output file was written.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .experiments import (
    DATA_DIR_ENV,
    ExperimentConfig,
    cmd_augment,
    cmd_compare,
    cmd_eval,
    cmd_predict,
    cmd_sweep,
    cmd_synth,
    cmd_train,
    config_from_yaml,
)

COMMANDS = {
    "compare": (cmd_compare, "Train and evaluate all five models at one horizon"),
    "augment": (cmd_augment, "Baseline vs. two-stage augmentation per horizon"),
    "sweep": (cmd_sweep, "Sweep the future-context length of the two-stage model"),
    "synth": (cmd_synth, "Generate a seeded synthetic dataset"),
    "train": (cmd_train, "Train and save one model pair per series"),
    "predict": (cmd_predict, "Forecast past each series' end with saved models"),
    "eval": (cmd_eval, "Evaluate saved model pairs on the evaluation half"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twostage",
        description="Two-stage multi-horizon forecasting for seasonal time series.",
        epilog=f"Relative --data paths also resolve against ${DATA_DIR_ENV}.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (_, help_text) in COMMANDS.items():
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", help="YAML config file (sections of key: value)")
        cmd.add_argument("--data", help="CSV data file, one series per row")
        cmd.add_argument("--out", help="output directory (default: out)")
        cmd.add_argument("--seed", type=int, help="master seed")
        cmd.add_argument("--period", type=int, help="seasonal period override")
        cmd.add_argument(
            "--period-auto",
            action="store_true",
            default=None,
            help="detect the period by autocorrelation",
        )
        cmd.add_argument("--h", type=int, dest="horizon", help="forecast horizon")
        cmd.add_argument(
            "--H", type=int, dest="future", help="future-context length for stage 1"
        )
        cmd.add_argument("--workers", type=int, help="worker processes (0 = all cores)")
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    config = config_from_yaml(args.config) if args.config else ExperimentConfig()
    overrides = {
        "data_path": args.data,
        "out_dir": args.out,
        "master_seed": args.seed,
        "period": args.period,
        "period_auto": args.period_auto,
        "horizon": args.horizon,
        "future": args.future,
        "workers": args.workers,
    }
    return replace(config, **{k: v for k, v in overrides.items() if v is not None})


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    runner, _ = COMMANDS[args.command]
    try:
        config = config_from_args(args)
        written = runner(config)
        missing = [str(path) for path in written.values() if not path.exists()]
        if missing:
            raise OSError(f"declared outputs were not written: {', '.join(missing)}")
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return 130
    except Exception as exc:
        print(f"twostage {args.command}: error: {exc}", file=sys.stderr)
        return 1
    for name, path in written.items():
        print(f"{name}: {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
