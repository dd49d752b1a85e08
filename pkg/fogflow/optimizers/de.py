"""Differential evolution, rand/1/bin, over integer mappings.

All random draws of a generation (partner indices, crossover masks, forced
genes) happen before any trial is evaluated. A trial replaces its target only
when its fitness is strictly lower.
"""

from __future__ import annotations

import logging

import numpy as np

from ..objective import NormalizationBounds, Problem
from .common import (
    BestTracker,
    ConfigError,
    DESettings,
    OptimizerConfig,
    Population,
    RunResult,
    evaluate_population,
    initialize,
    project,
)

__all__ = [
    "draw_partners",
    "de_mutant",
    "crossover_mask",
    "de_generation",
    "run_de",
]

logger = logging.getLogger(__name__)


def draw_partners(size: int, rng: np.random.Generator) -> np.ndarray:
    """``(size, 3)`` distinct partner indices, none equal to the row's own index."""

    if size < 4:
        raise ConfigError(f"differential evolution needs a population of at least 4, got {size}")
    partners = np.empty((size, 3), dtype=np.int64)
    for i in range(size):
        others = np.delete(np.arange(size), i)
        partners[i] = rng.choice(others, size=3, replace=False)
    return partners


def de_mutant(base: np.ndarray, left: np.ndarray, right: np.ndarray, f: float) -> np.ndarray:
    """``base + f * (left - right)`` in real space."""

    return base.astype(float) + f * (left.astype(float) - right.astype(float))


def crossover_mask(shape: tuple[int, int], cr: float, rng: np.random.Generator) -> np.ndarray:
    """Binomial crossover mask with one forced gene per row."""

    size, n = shape
    mask = rng.random(shape) < cr
    forced = rng.integers(0, n, size=size)
    mask[np.arange(size), forced] = True
    return mask


def de_generation(
    problem: Problem,
    population: Population,
    bounds: NormalizationBounds,
    settings: DESettings,
    rng: np.random.Generator,
) -> tuple[Population, int]:
    genomes = population.genomes
    partners = draw_partners(len(population), rng)
    mask = crossover_mask(genomes.shape, settings.cr, rng)
    mutants = de_mutant(
        genomes[partners[:, 0]], genomes[partners[:, 1]], genomes[partners[:, 2]], settings.f
    )
    trials = project(np.where(mask, mutants, genomes), problem.m)
    evaluated = evaluate_population(problem, trials, bounds)
    better = evaluated.fitness < population.fitness
    survivors = Population(
        np.where(better[:, None], evaluated.genomes, genomes),
        np.where(better[:, None], evaluated.raw, population.raw),
        np.where(better, evaluated.fitness, population.fitness),
    )
    return survivors, len(evaluated)


def run_de(problem: Problem, config: OptimizerConfig) -> RunResult:
    if config.population < 4:
        raise ConfigError(
            f"differential evolution needs a population of at least 4, got {config.population}"
        )
    rng, population, bounds = initialize(problem, config)
    tracker = BestTracker(population)
    for k in range(1, config.iterations + 1):
        population, used = de_generation(problem, population, bounds, config.de, rng)
        tracker.observe(population, used)
        logger.debug("de iteration %d best %.6g", k, tracker.fitness)
    return tracker.result("de", bounds, config.seed)
