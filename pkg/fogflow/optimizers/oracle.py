"""Exhaustive search over every mapping of a small instance."""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from .. import constant
from ..objective import NormalizationBounds, Problem, calibrate_bounds
from .common import ConfigError, Individual, Population

__all__ = ["all_mappings", "brute_force"]

logger = logging.getLogger(__name__)


def all_mappings(n: int, m: int) -> np.ndarray:
    """Every genome of ``m**n`` in lexicographic order, as an ``(m**n, n)`` array."""

    codes = np.arange(m**n, dtype=np.int64)
    digits = np.unravel_index(codes, (m,) * n)
    return np.stack(digits, axis=1).astype(np.int64)


def brute_force(
    problem: Problem,
    bounds: Optional[NormalizationBounds] = None,
    cap: int = constant.brute_force_cap,
) -> Individual:
    """Argmin of the fitness over all ``m**n`` mappings.

    Without *bounds* the normalization is calibrated over the whole mapping
    space; pass an optimizer run's bounds to score on that run's scale. Ties go
    to the lexicographically smallest genome.
    """

    count = problem.m**problem.n
    if count > cap:
        raise ConfigError(
            f"{problem.m}^{problem.n} = {count} mappings exceed the brute-force cap of {cap}; "
            "use a smaller workflow or pool"
        )
    genomes = all_mappings(problem.n, problem.m)
    raw = problem.evaluate_raw(genomes)
    if bounds is None:
        bounds = calibrate_bounds(raw)
    space = Population(genomes, raw, problem.fitness(raw, bounds))
    best = space.individual(space.best_index())
    logger.info("brute force over %d mappings: fitness %.6g", count, best.fitness)
    return best
