"""Command line entry point: ``staggered-nystrom <verb> [--config FILE] [overrides]``.

Exit status is 0 on success, 1 for configuration errors and 2 when a solve
fails (the completed rows are still written).
"""

from __future__ import annotations

import argparse
import sys
import warnings

from .experiments import (
    EXPERIMENTS,
    ConfigError,
    NumericalFailure,
    RunConfig,
    default_config,
    parse_number,
    run,
    to_csv,
    write_result,
)


def _n_list(text: str):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"--N expects integers, got {text!r}") from exc


def _number(text: str) -> float:
    try:
        return parse_number(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="staggered-nystrom", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="experiment", required=True)
    for verb in EXPERIMENTS:
        p = sub.add_parser(verb)
        p.add_argument("--config", help="JSON run configuration (defaults to the two-ellipse setup)")
        p.add_argument("--eps", type=_number, help="grid offset, decimal or fraction like 1/6")
        p.add_argument(
            "--N", type=_n_list,
            help="comma separated N list; for sweep-eps a single N",
        )
        p.add_argument("--k", type=_number, help="wavenumber")
        p.add_argument("--out", help="CSV output path (a .json sidecar is written next to it)")
    return parser


def load_config(args) -> RunConfig:
    config = RunConfig.load(args.config) if args.config else default_config()
    changes = {"experiment": args.experiment, "eps": args.eps, "k": args.k, "out": args.out}
    if args.N is not None:
        if args.experiment == "sweep-eps":
            if len(args.N) != 1:
                raise ConfigError("sweep-eps takes a single N")
            sweep = config.to_dict()["sweep"]
            sweep["N"] = args.N[0]
            changes["sweep"] = sweep
        else:
            changes["N_list"] = args.N
    return config.with_(**changes)


def emit(result, config: RunConfig) -> None:
    if config.out:
        path = write_result(result, config, config.out)
        print(f"wrote {path}", file=sys.stderr)
    else:
        sys.stdout.write(to_csv(result))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    with warnings.catch_warnings():
        warnings.simplefilter("always")
        warnings.showwarning = lambda msg, cat, *a, **k: print(f"warning: {msg}", file=sys.stderr)
        try:
            result = run(config)
        except ConfigError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 1
        except NumericalFailure as exc:
            print(f"numerical failure: {exc}", file=sys.stderr)
            if exc.partial is not None:
                emit(exc.partial, config)
            return 2
    emit(result, config)
    return 0


if __name__ == "__main__":
    sys.exit(main())
