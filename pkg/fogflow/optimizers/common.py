"""Shared types and helpers of the population-based searches.

Genomes are integer arrays of resource ids, one row per individual. Real-valued
updates (PSO positions, DE mutants) are projected back onto ``0..m-1`` by
rounding half up and clamping.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import logging
import math
from typing import Any, Optional

import numpy as np

from .. import constant
from ..objective import NormalizationBounds, Problem, calibrate_bounds
from ..simulation import Mapping, Metrics

__all__ = [
    "ConfigError",
    "PSOSettings",
    "GASettings",
    "DESettings",
    "OptimizerConfig",
    "Individual",
    "Particle",
    "Population",
    "RunResult",
    "BestTracker",
    "project",
    "init_population",
    "evaluate_population",
    "initialize",
]

logger = logging.getLogger(__name__)


class ConfigError(ValueError):
    """Raised for invalid optimizer or experiment settings."""


def _check_rate(value: Any, name: str) -> float:
    rate = float(value)
    if not 0.0 <= rate <= 1.0:
        raise ConfigError(f"{name} must lie in [0, 1], got {rate}")
    return rate


def _check_finite(value: Any, name: str) -> float:
    number = float(value)
    if not math.isfinite(number):
        raise ConfigError(f"{name} must be finite")
    return number


@dataclass(frozen=True)
class PSOSettings:
    omega: float = constant.omega
    c1: float = constant.c1
    c2: float = constant.c2

    def __post_init__(self) -> None:
        for key in ("omega", "c1", "c2"):
            object.__setattr__(self, key, _check_finite(getattr(self, key), key))


@dataclass(frozen=True)
class GASettings:
    crossover_rate: float = constant.crossover_rate
    mutation_rate: float = constant.mutation_rate
    tournament_size: int = constant.tournament_size
    elite_count: int = constant.elite_count

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "crossover_rate", _check_rate(self.crossover_rate, "crossover_rate")
        )
        object.__setattr__(self, "mutation_rate", _check_rate(self.mutation_rate, "mutation_rate"))
        if int(self.tournament_size) < 1:
            raise ConfigError("tournament_size must be at least 1")
        if int(self.elite_count) < 0:
            raise ConfigError("elite_count must be non-negative")
        object.__setattr__(self, "tournament_size", int(self.tournament_size))
        object.__setattr__(self, "elite_count", int(self.elite_count))


@dataclass(frozen=True)
class DESettings:
    cr: float = constant.de_cr
    f: float = constant.de_f

    def __post_init__(self) -> None:
        object.__setattr__(self, "cr", _check_rate(self.cr, "de_cr"))
        f = _check_finite(self.f, "de_f")
        if f <= 0:
            raise ConfigError("de_f must be positive")
        object.__setattr__(self, "f", f)


@dataclass(frozen=True)
class OptimizerConfig:
    """Population size, iteration count, operator settings and RNG seed."""

    population: int = constant.population
    iterations: int = constant.iterations
    pso: PSOSettings = field(default_factory=PSOSettings)
    ga: GASettings = field(default_factory=GASettings)
    de: DESettings = field(default_factory=DESettings)
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        population = int(self.population)
        iterations = int(self.iterations)
        if population < 2:
            raise ConfigError(f"population must be at least 2, got {population}")
        if iterations < 1:
            raise ConfigError(f"iterations must be at least 1, got {iterations}")
        if self.ga.tournament_size > population:
            raise ConfigError("tournament_size cannot exceed the population size")
        if self.ga.elite_count >= population:
            raise ConfigError("elite_count must be smaller than the population size")
        object.__setattr__(self, "population", population)
        object.__setattr__(self, "iterations", iterations)
        if self.seed is not None:
            if int(self.seed) < 0:
                raise ConfigError(f"seed must be non-negative, got {self.seed}")
            object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class Individual:
    genome: Mapping
    raw: Metrics
    fitness: float


@dataclass(frozen=True, eq=False)
class Particle:
    """One PSO particle; ``velocity`` lives in real space."""

    individual: Individual
    velocity: np.ndarray
    pbest_genome: Mapping
    pbest_fitness: float


@dataclass
class Population:
    """Evaluated genomes ``(P, n)`` with raw metrics ``(P, 3)`` and fitness ``(P,)``."""

    genomes: np.ndarray
    raw: np.ndarray
    fitness: np.ndarray

    def __len__(self) -> int:
        return len(self.genomes)

    def best_index(self) -> int:
        """Index of the lowest fitness; the first one on ties."""

        return int(np.argmin(self.fitness))

    def individual(self, index: int) -> Individual:
        return Individual(
            Mapping(tuple(self.genomes[index])),
            Metrics.from_array(self.raw[index]),
            float(self.fitness[index]),
        )

    def take(self, indices: np.ndarray) -> "Population":
        return Population(self.genomes[indices], self.raw[indices], self.fitness[indices])

    @staticmethod
    def concat(first: "Population", second: "Population") -> "Population":
        return Population(
            np.concatenate([first.genomes, second.genomes]),
            np.concatenate([first.raw, second.raw]),
            np.concatenate([first.fitness, second.fitness]),
        )


@dataclass(frozen=True)
class RunResult:
    """Outcome of one optimizer run.

    ``convergence[k]`` is the best fitness found up to iteration ``k``, with
    ``k = 0`` the initial population; ``best_metrics[k]`` are the raw metrics
    of that best individual.
    """

    algorithm: str
    best: Individual
    convergence: tuple[float, ...]
    evaluations: int
    bounds: NormalizationBounds
    best_metrics: tuple[Metrics, ...] = ()
    seed: Optional[int] = None

    @property
    def iterations(self) -> int:
        return len(self.convergence) - 1


def project(values: np.ndarray, m: int) -> np.ndarray:
    """Round half up and clamp real genes to resource ids ``0..m-1``."""

    rounded = np.floor(np.asarray(values, dtype=float) + 0.5)
    return np.clip(rounded, 0, m - 1).astype(np.int64)


def init_population(n: int, m: int, population: int, seed: Any = None) -> np.ndarray:
    """``population`` genomes of length ``n``, each gene uniform over ``0..m-1``.

    *seed* may be an integer, ``None`` or an existing ``numpy.random.Generator``
    (which is consumed in place).
    """

    if n < 1 or m < 1 or population < 1:
        raise ConfigError("n, m and population must all be at least 1")
    rng = np.random.default_rng(seed)
    return rng.integers(0, m, size=(population, n), dtype=np.int64)


def evaluate_population(
    problem: Problem, genomes: np.ndarray, bounds: NormalizationBounds
) -> Population:
    raw = problem.evaluate_raw(genomes)
    return Population(np.asarray(genomes, dtype=np.int64), raw, problem.fitness(raw, bounds))


def initialize(
    problem: Problem, config: OptimizerConfig
) -> tuple[np.random.Generator, Population, NormalizationBounds]:
    """Seed the RNG, draw and evaluate the initial population, and freeze the bounds."""

    rng = np.random.default_rng(config.seed)
    genomes = init_population(problem.n, problem.m, config.population, rng)
    raw = problem.evaluate_raw(genomes)
    bounds = calibrate_bounds(raw)
    logger.debug(
        "initial population of %d calibrated bounds %s", config.population, bounds
    )
    return rng, Population(genomes, raw, problem.fitness(raw, bounds)), bounds


class BestTracker:
    """Running best individual and the convergence record of a run."""

    def __init__(self, population: Population):
        self.evaluations = len(population)
        index = population.best_index()
        self.genome = population.genomes[index].copy()
        self.raw = population.raw[index].copy()
        self.fitness = float(population.fitness[index])
        self.convergence = [self.fitness]
        self.history = [Metrics.from_array(self.raw)]

    def observe(self, population: Population, evaluations: int) -> None:
        """Record one iteration; the best only changes on strict improvement."""

        self.evaluations += evaluations
        index = population.best_index()
        if population.fitness[index] < self.fitness:
            self.genome = population.genomes[index].copy()
            self.raw = population.raw[index].copy()
            self.fitness = float(population.fitness[index])
        self.convergence.append(self.fitness)
        self.history.append(Metrics.from_array(self.raw))

    def result(
        self, algorithm: str, bounds: NormalizationBounds, seed: Optional[int] = None
    ) -> RunResult:
        best = Individual(Mapping(tuple(self.genome)), Metrics.from_array(self.raw), self.fitness)
        logger.info(
            "%s seed=%s finished: fitness=%.6g after %d evaluations",
            algorithm,
            seed,
            self.fitness,
            self.evaluations,
        )
        return RunResult(
            algorithm,
            best,
            tuple(self.convergence),
            self.evaluations,
            bounds,
            tuple(self.history),
            seed,
        )
