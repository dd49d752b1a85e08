"""Command-line entry point: ``fogflow run``, ``fogflow describe``, ``fogflow oracle``.

Exit codes: 0 success, 2 configuration or argument errors, 3 workflow, pool or
file errors (missing inputs, unwritable output), 4 internal invariant violations.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Any, Optional, Sequence

from .dax import DaxParseError, read_dax
from .high_level import (
    ExperimentConfig,
    describe,
    format_oracle,
    read_inputs,
    run_experiment,
    run_oracle,
)
from .infra import PoolError, default_testbed, parse_counts, read_pool_table
from .objective import Weights
from .optimizers.common import ConfigError
from .simulation import MappingError, ScheduleInvariantError
from .workflow import WorkflowValidationError

__all__ = ["main", "build_parser"]

logger = logging.getLogger(__name__)

EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_INVARIANT = 4

# Flag destination -> config key.
_RUN_FLAGS = {
    "workflow": "workflow",
    "algorithms": "algorithms",
    "repeats": "repeats",
    "seed": "seed",
    "pop": "pop",
    "iters": "iters",
    "weights": "weights",
    "pool": "pool",
    "pool_table": "pool_table",
    "out": "out",
    "jobs": "jobs",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fogflow", description="Cloud-fog workflow scheduling experiments.")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging"
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run optimizers for several seeds and write CSV results")
    run.add_argument("--config", help="flat YAML experiment configuration")
    run.add_argument("--workflow", help="Pegasus DAX file")
    run.add_argument("--algorithms", help="comma list of pso,ga,de,gapso")
    run.add_argument("--repeats", type=int)
    run.add_argument("--seed", type=int, help="base seed; repeat r uses seed + r")
    run.add_argument("--pop", type=int, help="population size")
    run.add_argument("--iters", type=int, help="iterations per run")
    run.add_argument("--weights", help="w1,w2,w3 for makespan, cost, energy")
    run.add_argument("--pool", help="resource counts end,fog,cloud")
    run.add_argument("--pool-table", dest="pool_table", help="CSV resource table")
    run.add_argument("--out", help="output directory")
    run.add_argument("--jobs", type=int, help="parallel worker processes")
    run.add_argument(
        "--wall-time",
        dest="wall_time",
        action="store_true",
        default=None,
        help="record wall-clock time per run (runs.csv is then not reproducible)",
    )

    desc = sub.add_parser("describe", help="summarize a DAX workflow")
    desc.add_argument("workflow", help="Pegasus DAX file")

    oracle = sub.add_parser("oracle", help="brute-force optimum of a small instance")
    oracle.add_argument("--workflow", required=True, help="Pegasus DAX file")
    oracle.add_argument("--pool", default="1,1,1", help="resource counts end,fog,cloud")
    oracle.add_argument("--pool-table", dest="pool_table", help="CSV resource table")
    oracle.add_argument("--weights", help="w1,w2,w3 for makespan, cost, energy")
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _run(args: argparse.Namespace) -> int:
    mapping: dict[str, Any] = read_inputs(args.config) if args.config else {}
    for dest, key in _RUN_FLAGS.items():
        value = getattr(args, dest)
        if value is not None:
            mapping[key] = value
    if args.wall_time:
        mapping["wall_time"] = True
    config = ExperimentConfig.from_mapping(mapping)
    report = run_experiment(config)
    print(f"wrote {len(report.records)} runs to {config.output_dir}")
    return 0


def _oracle(args: argparse.Namespace) -> int:
    try:
        weights = Weights.parse(args.weights) if args.weights else Weights()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    workflow = read_dax(args.workflow)
    if args.pool_table:
        pool = read_pool_table(args.pool_table)
    else:
        pool = default_testbed(*parse_counts(args.pool))
    print(format_oracle(run_oracle(workflow, pool, weights)))
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    try:
        if args.command == "run":
            return _run(args)
        if args.command == "describe":
            print(describe(args.workflow))
            return 0
        return _oracle(args)
    except ConfigError as exc:
        print(f"fogflow: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (
        DaxParseError,
        WorkflowValidationError,
        PoolError,
        MappingError,
        FileNotFoundError,
    ) as exc:
        print(f"fogflow: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"fogflow: file error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ScheduleInvariantError as exc:
        logger.exception("internal invariant violated")
        print(f"fogflow: internal error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
