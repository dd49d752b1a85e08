"""Hybrid search: GA for the first half of the iterations, then PSO.

The GA phase runs ``floor(T/2)`` generations. Its final population seeds the
swarm with zero velocities and personal bests at the current positions; the
global best and the normalization bounds carry over unchanged.
"""

from __future__ import annotations

import logging

from ..objective import Problem
from .common import BestTracker, OptimizerConfig, RunResult, initialize
from .ga import run_generations
from .pso import Swarm, run_swarm

__all__ = ["run_ga_pso", "phase_split"]

logger = logging.getLogger(__name__)


def phase_split(iterations: int) -> tuple[int, int]:
    """``(ga_iterations, pso_iterations)`` for a budget of *iterations*."""

    ga_iterations = iterations // 2
    return ga_iterations, iterations - ga_iterations


def run_ga_pso(problem: Problem, config: OptimizerConfig) -> RunResult:
    ga_iterations, pso_iterations = phase_split(config.iterations)
    rng, population, bounds = initialize(problem, config)
    tracker = BestTracker(population)
    population = run_generations(
        problem, population, tracker, bounds, config.ga, rng, ga_iterations
    )
    logger.debug("gapso switching to pso after %d ga iterations", ga_iterations)
    swarm = Swarm.from_population(population)
    run_swarm(
        problem,
        swarm,
        tracker,
        bounds,
        config.pso,
        rng,
        pso_iterations,
        first_iteration=ga_iterations + 1,
    )
    return tracker.result("gapso", bounds, config.seed)
