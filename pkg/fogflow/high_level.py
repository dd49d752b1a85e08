"""Experiment harness: configuration, repeated seeded runs and CSV output.

A run of ``run_experiment`` executes every requested algorithm ``repeats``
times with seeds ``seed + r`` (the same seed set for every algorithm) and
writes, under the output directory:

- ``runs.csv``: one row per run;
- ``summary.csv``: per-algorithm mean and sample standard deviation;
- ``convergence/<algorithm>_seed<seed>.csv``: best fitness per iteration;
- ``mappings.csv``: the best mapping of each run in 1-based form.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
import csv
from dataclasses import dataclass, field
import logging
from os import PathLike
from pathlib import Path
import time
from typing import Any, Callable, Optional, Union

import numpy as np
from ruamel.yaml import YAML
from ruamel.yaml.error import YAMLError

from . import constant
from .dax import read_dax
from .infra import ResourcePool, default_testbed, parse_counts, read_pool_table, PoolError
from .objective import Problem, Weights
from .optimizers import ALGORITHMS, run
from .optimizers.common import (
    ConfigError,
    DESettings,
    GASettings,
    Individual,
    OptimizerConfig,
    PSOSettings,
    RunResult,
)
from .optimizers.oracle import brute_force
from .workflow import LayeredSpec, Workflow, depth, generate_layered

__all__ = [
    "CONFIG_KEYS",
    "RUNS_HEADER",
    "SUMMARY_HEADER",
    "CONVERGENCE_HEADER",
    "MAPPINGS_HEADER",
    "ExperimentConfig",
    "ExperimentReport",
    "RunRecord",
    "read_inputs",
    "build_problem",
    "load_workflow",
    "load_pool",
    "run_experiment",
    "summarize",
    "save_csv",
    "describe",
    "run_oracle",
    "format_oracle",
]

logger = logging.getLogger(__name__)

yaml = YAML(typ="safe")

PathType = Union[str, "PathLike[str]"]

CONFIG_KEYS = (
    "workflow",
    "layers",
    "length_range",
    "edge_size_range",
    "density",
    "layered_seed",
    "algorithms",
    "repeats",
    "seed",
    "pop",
    "iters",
    "weights",
    "pool",
    "pool_table",
    "out",
    "omega",
    "c1",
    "c2",
    "crossover_rate",
    "mutation_rate",
    "tournament_size",
    "elite_count",
    "de_cr",
    "de_f",
    "jobs",
    "wall_time",
)
_PATH_KEYS = ("workflow", "pool_table", "out")

RUNS_HEADER = ("algorithm", "seed", "makespan_s", "cost_usd", "energy_j", "fitness", "wall_time_ms")
SUMMARY_HEADER = (
    "algorithm",
    "runs",
    "makespan_s_mean",
    "makespan_s_std",
    "cost_usd_mean",
    "cost_usd_std",
    "energy_j_mean",
    "energy_j_std",
    "fitness_mean",
    "fitness_std",
)
CONVERGENCE_HEADER = (
    "iteration",
    "best_fitness",
    "best_makespan_s",
    "best_cost_usd",
    "best_energy_j",
)
MAPPINGS_HEADER = ("algorithm", "seed", "mapping")


def _fmt(value: float) -> str:
    return format(float(value), constant.float_format)


def read_inputs(filename: PathType) -> dict[str, Any]:
    """Read a flat YAML experiment configuration.

    Relative ``workflow``, ``pool_table`` and ``out`` paths are resolved
    against the directory holding *filename*.
    """

    path = Path(filename)
    try:
        with path.open("r", encoding="utf-8") as yamlfile:
            inputs = yaml.load(yamlfile)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except YAMLError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    if inputs is None:
        inputs = {}
    if not isinstance(inputs, dict):
        raise ConfigError(f"config {path} must be a key-value mapping")
    inputs = dict(inputs)
    for key in _PATH_KEYS:
        value = inputs.get(key)
        if value is not None and not Path(str(value)).is_absolute():
            inputs[key] = str(path.parent / str(value))
    return inputs


def _split(value: Any) -> list[Any]:
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    if isinstance(value, Iterable):
        return list(value)
    return [value]


def _convert(mapping: dict[str, Any], key: str, convert: Callable[[Any], Any], default: Any) -> Any:
    if mapping.get(key) is None:
        return default
    try:
        return convert(mapping[key])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid value for {key}: {mapping[key]!r} ({exc})") from exc


def _pair(value: Any) -> tuple[float, float]:
    items = _split(value)
    if len(items) != 2:
        raise ValueError("expected two values")
    return float(items[0]), float(items[1])


def _flag(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected a boolean")


def _counts(value: Any) -> tuple[int, int, int]:
    try:
        return parse_counts(value if isinstance(value, str) else _split(value))
    except PoolError as exc:
        raise ValueError(str(exc)) from exc


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment settings.

    Exactly one workflow source is given: a DAX path or a layered spec. The
    pool is either per-layer counts or an explicit resource table.
    """

    workflow: Optional[Path] = None
    layered: Optional[LayeredSpec] = None
    layered_seed: int = 0
    pool_counts: tuple[int, int, int] = constant.pool_counts
    pool_table: Optional[Path] = None
    algorithms: tuple[str, ...] = tuple(ALGORITHMS)
    weights: Weights = field(default_factory=Weights)
    population: int = constant.population
    iterations: int = constant.iterations
    repeats: int = constant.repeats
    base_seed: int = 0
    output_dir: Path = Path("results")
    pso: PSOSettings = field(default_factory=PSOSettings)
    ga: GASettings = field(default_factory=GASettings)
    de: DESettings = field(default_factory=DESettings)
    jobs: int = 1
    wall_time: bool = False

    def __post_init__(self) -> None:
        if (self.workflow is None) == (self.layered is None):
            raise ConfigError("config needs exactly one of workflow or layers")
        if int(self.repeats) < 1:
            raise ConfigError("repeats must be at least 1")
        if int(self.jobs) < 1:
            raise ConfigError("jobs must be at least 1")
        for key in ("base_seed", "layered_seed"):
            if int(getattr(self, key)) < 0:
                raise ConfigError(f"{key} must be non-negative, got {getattr(self, key)}")
            object.__setattr__(self, key, int(getattr(self, key)))
        algorithms = tuple(name.strip().lower() for name in self.algorithms)
        if not algorithms:
            raise ConfigError("at least one algorithm is required")
        unknown = [name for name in algorithms if name not in ALGORITHMS]
        if unknown:
            raise ConfigError(
                f"unknown algorithm(s) {', '.join(unknown)}; expected {', '.join(ALGORITHMS)}"
            )
        object.__setattr__(self, "algorithms", algorithms)
        object.__setattr__(self, "repeats", int(self.repeats))
        object.__setattr__(self, "jobs", int(self.jobs))
        object.__setattr__(self, "output_dir", Path(self.output_dir))
        for key in ("workflow", "pool_table"):
            value = getattr(self, key)
            if value is not None:
                object.__setattr__(self, key, Path(value))
        # Validates population, iterations and operator settings together.
        self.optimizer_config(self.base_seed)

    def optimizer_config(self, seed: Optional[int]) -> OptimizerConfig:
        return OptimizerConfig(
            population=self.population,
            iterations=self.iterations,
            pso=self.pso,
            ga=self.ga,
            de=self.de,
            seed=seed,
        )

    @property
    def seeds(self) -> tuple[int, ...]:
        return tuple(self.base_seed + r for r in range(self.repeats))

    @classmethod
    def from_mapping(cls, mapping: dict[str, Any]) -> "ExperimentConfig":
        """Build a config from flat keys (see :data:`CONFIG_KEYS`)."""

        unknown = sorted(set(mapping) - set(CONFIG_KEYS))
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")

        layered = None
        if mapping.get("layers") is not None:
            layers = _convert(mapping, "layers", lambda v: tuple(int(x) for x in _split(v)), ())
            defaults = LayeredSpec((1,))
            try:
                layered = LayeredSpec(
                    layers,
                    _convert(mapping, "length_range", _pair, defaults.length_range),
                    _convert(mapping, "edge_size_range", _pair, defaults.edge_size_range),
                    _convert(mapping, "density", float, defaults.inter_layer_density),
                )
            except ValueError as exc:
                raise ConfigError(f"invalid layered workflow: {exc}") from exc

        try:
            weights = _convert(mapping, "weights", Weights.parse, None) or Weights()
            pso = PSOSettings(
                _convert(mapping, "omega", float, constant.omega),
                _convert(mapping, "c1", float, constant.c1),
                _convert(mapping, "c2", float, constant.c2),
            )
            ga = GASettings(
                _convert(mapping, "crossover_rate", float, constant.crossover_rate),
                _convert(mapping, "mutation_rate", float, constant.mutation_rate),
                _convert(mapping, "tournament_size", int, constant.tournament_size),
                _convert(mapping, "elite_count", int, constant.elite_count),
            )
            de = DESettings(
                _convert(mapping, "de_cr", float, constant.de_cr),
                _convert(mapping, "de_f", float, constant.de_f),
            )
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

        workflow = mapping.get("workflow")
        pool_table = mapping.get("pool_table")
        return cls(
            workflow=Path(str(workflow)) if workflow is not None else None,
            layered=layered,
            layered_seed=_convert(mapping, "layered_seed", int, 0),
            pool_counts=_convert(mapping, "pool", _counts, constant.pool_counts),
            pool_table=Path(str(pool_table)) if pool_table is not None else None,
            algorithms=tuple(
                _convert(mapping, "algorithms", lambda v: [str(x) for x in _split(v)], ALGORITHMS)
            ),
            weights=weights,
            population=_convert(mapping, "pop", int, constant.population),
            iterations=_convert(mapping, "iters", int, constant.iterations),
            repeats=_convert(mapping, "repeats", int, constant.repeats),
            base_seed=_convert(mapping, "seed", int, 0),
            output_dir=Path(str(mapping.get("out") or "results")),
            pso=pso,
            ga=ga,
            de=de,
            jobs=_convert(mapping, "jobs", int, 1),
            wall_time=_convert(mapping, "wall_time", _flag, False),
        )


def load_workflow(config: ExperimentConfig) -> Workflow:
    if config.workflow is not None:
        if not config.workflow.is_file():
            raise FileNotFoundError(f"workflow file {config.workflow} does not exist")
        return read_dax(config.workflow)
    assert config.layered is not None
    return generate_layered(config.layered, seed=config.layered_seed)


def load_pool(config: ExperimentConfig) -> ResourcePool:
    if config.pool_table is not None:
        if not config.pool_table.is_file():
            raise FileNotFoundError(f"pool table {config.pool_table} does not exist")
        return read_pool_table(config.pool_table)
    return default_testbed(*config.pool_counts)


def build_problem(config: ExperimentConfig) -> Problem:
    return Problem(load_workflow(config), load_pool(config), config.weights)


@dataclass(frozen=True)
class RunRecord:
    """One row of ``runs.csv``.

    ``fitness`` is scored against the bounds frozen on the run's initial
    population without clamping, so a best mapping that beats the initial
    minimum of a metric can have negative fitness.
    """

    algorithm: str
    seed: int
    makespan_s: float
    cost_usd: float
    energy_j: float
    fitness: float
    wall_time_ms: float = 0.0

    def row(self) -> list[str]:
        return [
            self.algorithm,
            str(self.seed),
            _fmt(self.makespan_s),
            _fmt(self.cost_usd),
            _fmt(self.energy_j),
            _fmt(self.fitness),
            _fmt(self.wall_time_ms),
        ]


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    records: tuple[RunRecord, ...]
    results: tuple[RunResult, ...]

    def summary(self) -> list[dict[str, Any]]:
        return summarize(self.records, self.config.algorithms)


def _run_one(
    task: tuple[str, Problem, OptimizerConfig, bool],
) -> tuple[RunRecord, RunResult]:
    algorithm, problem, optimizer_config, wall_time = task
    started = time.perf_counter()
    result = run(algorithm, problem, optimizer_config)
    elapsed_ms = (time.perf_counter() - started) * 1000.0 if wall_time else 0.0
    best = result.best
    record = RunRecord(
        algorithm,
        int(optimizer_config.seed or 0),
        best.raw.makespan,
        best.raw.total_cost,
        best.raw.total_energy,
        best.fitness,
        elapsed_ms,
    )
    return record, result


def summarize(records: Sequence[RunRecord], algorithms: Sequence[str]) -> list[dict[str, Any]]:
    """Per-algorithm mean and sample standard deviation (0 for a single run)."""

    rows = []
    for algorithm in algorithms:
        chosen = [r for r in records if r.algorithm == algorithm]
        if not chosen:
            continue
        row: dict[str, Any] = {"algorithm": algorithm, "runs": len(chosen)}
        for name in ("makespan_s", "cost_usd", "energy_j", "fitness"):
            values = np.array([getattr(r, name) for r in chosen], dtype=float)
            row[f"{name}_mean"] = float(np.mean(values))
            row[f"{name}_std"] = float(np.std(values, ddof=1)) if len(values) > 1 else 0.0
        rows.append(row)
    return rows


def _writer(handle: Any) -> Any:
    return csv.writer(handle, lineterminator="\n")


def save_csv(report: ExperimentReport, output_dir: Optional[PathType] = None) -> Path:
    """Write runs, summary, convergence and mapping CSV files; returns the directory."""

    out = Path(output_dir) if output_dir is not None else report.config.output_dir
    convergence_dir = out / "convergence"
    convergence_dir.mkdir(parents=True, exist_ok=True)

    with (out / "runs.csv").open("w", newline="", encoding="utf-8") as handle:
        writer = _writer(handle)
        writer.writerow(RUNS_HEADER)
        for record in report.records:
            writer.writerow(record.row())

    with (out / "summary.csv").open("w", newline="", encoding="utf-8") as handle:
        writer = _writer(handle)
        writer.writerow(SUMMARY_HEADER)
        for row in report.summary():
            writer.writerow(
                [row["algorithm"], row["runs"]]
                + [_fmt(row[key]) for key in SUMMARY_HEADER[2:]]
            )

    for record, result in zip(report.records, report.results):
        path = convergence_dir / f"{record.algorithm}_seed{record.seed}.csv"
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = _writer(handle)
            writer.writerow(CONVERGENCE_HEADER)
            for k, (fitness, metrics) in enumerate(zip(result.convergence, result.best_metrics)):
                writer.writerow(
                    [k, _fmt(fitness)] + [_fmt(value) for value in metrics.as_tuple()]
                )

    with (out / "mappings.csv").open("w", newline="", encoding="utf-8") as handle:
        writer = _writer(handle)
        writer.writerow(MAPPINGS_HEADER)
        for record, result in zip(report.records, report.results):
            external = result.best.genome.to_external()
            writer.writerow([record.algorithm, record.seed, " ".join(str(v) for v in external)])
    return out


def run_experiment(config: ExperimentConfig, write: bool = True) -> ExperimentReport:
    """Run every (algorithm, seed) pair of *config* and optionally write its CSV files."""

    problem = build_problem(config)
    logger.info(
        "experiment on %s: %d tasks, %d resources, algorithms %s, %d repeats",
        problem.workflow.name,
        problem.n,
        problem.m,
        ",".join(config.algorithms),
        config.repeats,
    )
    tasks = [
        (algorithm, problem, config.optimizer_config(seed), config.wall_time)
        for algorithm in config.algorithms
        for seed in config.seeds
    ]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as executor:
            outcomes = list(executor.map(_run_one, tasks))
    else:
        outcomes = [_run_one(task) for task in tasks]

    report = ExperimentReport(
        config,
        tuple(record for record, _ in outcomes),
        tuple(result for _, result in outcomes),
    )
    if write:
        out = save_csv(report)
        logger.info("wrote %d runs to %s", len(report.records), out)
    return report


def describe(source: Union[Workflow, PathType]) -> str:
    """One-line summary: task and edge counts, depth, total MI and total Mb."""

    workflow = source if isinstance(source, Workflow) else read_dax(source)
    return (
        f"tasks: {workflow.n}, edges: {len(workflow.edges)}, depth: {depth(workflow)}, "
        f"total_mi: {_fmt(workflow.total_length)}, total_mb: {_fmt(workflow.total_data)}"
    )


def run_oracle(
    workflow: Workflow,
    pool: ResourcePool,
    weights: Optional[Weights] = None,
    cap: int = constant.brute_force_cap,
) -> Individual:
    """Brute-force optimum of a small instance with bounds over all mappings."""

    return brute_force(Problem(workflow, pool, weights), cap=cap)


def format_oracle(best: Individual) -> str:
    return "\n".join(
        [
            "mapping: " + " ".join(str(v) for v in best.genome.to_external()),
            f"makespan_s: {_fmt(best.raw.makespan)}",
            f"cost_usd: {_fmt(best.raw.total_cost)}",
            f"energy_j: {_fmt(best.raw.total_energy)}",
            f"fitness: {_fmt(best.fitness)}",
        ]
    )
