"""Elitist genetic algorithm over integer mappings.

Each generation fills an offspring pool with the ``elite_count`` best parents
followed by children of tournament-selected pairs (single-point crossover,
per-gene uniform mutation). Parents and offspring are then merged and the best
``P`` survive; on equal fitness parents rank before offspring.
"""

from __future__ import annotations

import logging

import numpy as np

from ..objective import NormalizationBounds, Problem
from .common import (
    BestTracker,
    GASettings,
    OptimizerConfig,
    Population,
    RunResult,
    evaluate_population,
    initialize,
)

__all__ = [
    "tournament_select",
    "single_point_crossover",
    "mutate",
    "ga_generation",
    "run_ga",
]

logger = logging.getLogger(__name__)


def tournament_select(fitness: np.ndarray, size: int, rng: np.random.Generator) -> int:
    """Index of the fittest of *size* distinct random contestants."""

    contestants = rng.choice(len(fitness), size=size, replace=False)
    return int(contestants[np.argmin(fitness[contestants])])


def single_point_crossover(
    first: np.ndarray, second: np.ndarray, point: int
) -> tuple[np.ndarray, np.ndarray]:
    """Swap the tails of two genomes from *point* on."""

    child_a = np.concatenate([first[:point], second[point:]])
    child_b = np.concatenate([second[:point], first[point:]])
    return child_a, child_b


def mutate(genome: np.ndarray, rate: float, m: int, rng: np.random.Generator) -> np.ndarray:
    """Redraw each gene uniformly over ``0..m-1`` with probability *rate*."""

    mask = rng.random(genome.shape) < rate
    redraw = rng.integers(0, m, size=genome.shape, dtype=np.int64)
    return np.where(mask, redraw, genome)


def _breed(
    population: Population, settings: GASettings, m: int, rng: np.random.Generator
) -> np.ndarray:
    size, n = population.genomes.shape
    needed = size - settings.elite_count
    tournament = settings.tournament_size
    children: list[np.ndarray] = []
    while len(children) < needed:
        first = population.genomes[tournament_select(population.fitness, tournament, rng)]
        second = population.genomes[tournament_select(population.fitness, tournament, rng)]
        if n > 1 and rng.random() < settings.crossover_rate:
            point = int(rng.integers(1, n))
            pair = single_point_crossover(first, second, point)
        else:
            pair = (first.copy(), second.copy())
        for child in pair:
            children.append(mutate(child, settings.mutation_rate, m, rng))
    return np.array(children[:needed], dtype=np.int64).reshape(needed, n)


def ga_generation(
    problem: Problem,
    population: Population,
    bounds: NormalizationBounds,
    settings: GASettings,
    rng: np.random.Generator,
) -> tuple[Population, int]:
    """One generation; returns the survivors and the number of evaluations used."""

    size = len(population)
    elites = population.take(np.argsort(population.fitness, kind="stable")[: settings.elite_count])
    children_genomes = _breed(population, settings, problem.m, rng)
    children = evaluate_population(problem, children_genomes, bounds)
    offspring = Population.concat(elites, children)
    merged = Population.concat(population, offspring)
    survivors = merged.take(np.argsort(merged.fitness, kind="stable")[:size])
    return survivors, len(children)


def run_generations(
    problem: Problem,
    population: Population,
    tracker: BestTracker,
    bounds: NormalizationBounds,
    settings: GASettings,
    rng: np.random.Generator,
    iterations: int,
) -> Population:
    for k in range(1, iterations + 1):
        population, used = ga_generation(problem, population, bounds, settings, rng)
        tracker.observe(population, used)
        logger.debug("ga iteration %d best %.6g", k, tracker.fitness)
    return population


def run_ga(problem: Problem, config: OptimizerConfig) -> RunResult:
    rng, population, bounds = initialize(problem, config)
    tracker = BestTracker(population)
    run_generations(problem, population, tracker, bounds, config.ga, rng, config.iterations)
    return tracker.result("ga", bounds, config.seed)
