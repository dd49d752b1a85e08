"""Population-based mapping searches and the brute-force oracle."""

from __future__ import annotations

from collections.abc import Callable

from ..objective import Problem
from .common import (
    BestTracker,
    ConfigError,
    DESettings,
    GASettings,
    Individual,
    OptimizerConfig,
    Particle,
    Population,
    PSOSettings,
    RunResult,
    init_population,
    project,
)
from .de import run_de
from .ga import run_ga
from .gapso import run_ga_pso
from .oracle import brute_force
from .pso import run_pso

__all__ = [
    "ALGORITHMS",
    "run",
    "run_pso",
    "run_ga",
    "run_de",
    "run_ga_pso",
    "brute_force",
    "init_population",
    "project",
    "BestTracker",
    "ConfigError",
    "DESettings",
    "GASettings",
    "Individual",
    "OptimizerConfig",
    "Particle",
    "Population",
    "PSOSettings",
    "RunResult",
]

ALGORITHMS: dict[str, Callable[[Problem, OptimizerConfig], RunResult]] = {
    "pso": run_pso,
    "ga": run_ga,
    "de": run_de,
    "gapso": run_ga_pso,
}


def run(name: str, problem: Problem, config: OptimizerConfig) -> RunResult:
    """Dispatch to the optimizer registered as *name*."""

    key = name.strip().lower().replace("-", "").replace("_", "")
    if key not in ALGORITHMS:
        raise ConfigError(
            f"unknown algorithm {name!r}; expected one of {', '.join(ALGORITHMS)}"
        )
    return ALGORITHMS[key](problem, config)
