"""Particle swarm optimization over integer mappings.

Velocities start at zero and are clamped to ``[-(m-1), m-1]``. Each iteration
draws one ``r1`` and one ``r2`` per particle, applied across the whole vector;
positions are projected onto resource ids before they are stored.
"""

from __future__ import annotations

from dataclasses import dataclass
import logging
from warnings import warn

import numpy as np

from ..objective import NormalizationBounds, Problem
from ..simulation import Mapping
from .common import (
    BestTracker,
    OptimizerConfig,
    Particle,
    Population,
    PSOSettings,
    RunResult,
    evaluate_population,
    initialize,
    project,
)

__all__ = ["Swarm", "pso_velocity", "pso_step", "run_pso"]

logger = logging.getLogger(__name__)


def pso_velocity(
    velocity: np.ndarray,
    position: np.ndarray,
    pbest: np.ndarray,
    gbest: np.ndarray,
    r1: np.ndarray | float,
    r2: np.ndarray | float,
    settings: PSOSettings,
    m: int,
) -> np.ndarray:
    """``omega*V + c1*r1*(pbest - X) + c2*r2*(gbest - X)``, clamped to ``m-1``."""

    new = (
        settings.omega * velocity
        + settings.c1 * r1 * (pbest - position)
        + settings.c2 * r2 * (gbest - position)
    )
    limit = float(m - 1)
    return np.clip(new, -limit, limit)


@dataclass
class Swarm:
    """Positions, velocities and personal bests of every particle."""

    positions: Population
    velocities: np.ndarray
    pbest: Population

    @classmethod
    def from_population(cls, population: Population) -> "Swarm":
        """Zero velocities and personal bests equal to the current positions."""

        velocities = np.zeros(population.genomes.shape, dtype=float)
        pbest = Population(
            population.genomes.copy(), population.raw.copy(), population.fitness.copy()
        )
        return cls(population, velocities, pbest)

    def particle(self, index: int) -> Particle:
        return Particle(
            self.positions.individual(index),
            self.velocities[index].copy(),
            Mapping(tuple(self.pbest.genomes[index])),
            float(self.pbest.fitness[index]),
        )

    def update_pbest(self) -> None:
        improved = self.positions.fitness < self.pbest.fitness
        self.pbest.genomes[improved] = self.positions.genomes[improved]
        self.pbest.raw[improved] = self.positions.raw[improved]
        self.pbest.fitness[improved] = self.positions.fitness[improved]


def pso_step(
    problem: Problem,
    swarm: Swarm,
    gbest: np.ndarray,
    bounds: NormalizationBounds,
    settings: PSOSettings,
    rng: np.random.Generator,
) -> int:
    """Move every particle once and refresh personal bests; returns evaluations used."""

    size = len(swarm.positions)
    r1 = rng.random((size, 1))
    r2 = rng.random((size, 1))
    positions = swarm.positions.genomes.astype(float)
    swarm.velocities = pso_velocity(
        swarm.velocities,
        positions,
        swarm.pbest.genomes.astype(float),
        np.asarray(gbest, dtype=float)[None, :],
        r1,
        r2,
        settings,
        problem.m,
    )
    genomes = project(positions + swarm.velocities, problem.m)
    swarm.positions = evaluate_population(problem, genomes, bounds)
    swarm.update_pbest()
    return size


def run_swarm(
    problem: Problem,
    swarm: Swarm,
    tracker: BestTracker,
    bounds: NormalizationBounds,
    settings: PSOSettings,
    rng: np.random.Generator,
    iterations: int,
    first_iteration: int = 1,
) -> None:
    """Advance *swarm* for *iterations* steps; gbest is the tracker's best."""

    for k in range(first_iteration, first_iteration + iterations):
        used = pso_step(problem, swarm, tracker.genome, bounds, settings, rng)
        tracker.observe(swarm.positions, used)
        logger.debug("pso iteration %d best %.6g", k, tracker.fitness)


def run_pso(problem: Problem, config: OptimizerConfig) -> RunResult:
    """Run PSO for ``config.iterations`` iterations after the initial population."""

    if problem.m == 1:
        warn("pso on a single-resource pool cannot move; every mapping is the same", stacklevel=2)
    rng, population, bounds = initialize(problem, config)
    tracker = BestTracker(population)
    swarm = Swarm.from_population(population)
    run_swarm(problem, swarm, tracker, bounds, config.pso, rng, config.iterations)
    return tracker.result("pso", bounds, config.seed)
