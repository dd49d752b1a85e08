"""Weighted-sum fitness over min-max normalized metrics.

Bounds are calibrated once (on an optimizer's initial population) and then
frozen; later metrics may normalize outside ``[0, 1]``. A metric whose
calibrated ``max == min`` normalizes to 0. Lower fitness is better.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
import math
from typing import Any
from warnings import warn

import numpy as np

from . import constant
from .infra import ResourcePool
from .simulation import Evaluator, Metrics
from .workflow import Workflow

__all__ = [
    "Weights",
    "NormalizationBounds",
    "Problem",
    "calibrate_bounds",
    "normalize",
    "normalize_array",
    "weighted_fitness",
]


@dataclass(frozen=True)
class Weights:
    """Weights of makespan, cost and energy; need not sum to 1."""

    w1: float = constant.weight
    w2: float = constant.weight
    w3: float = constant.weight

    def __post_init__(self) -> None:
        values = tuple(float(v) for v in (self.w1, self.w2, self.w3))
        if not all(math.isfinite(v) for v in values):
            raise ValueError("weights must be finite")
        if any(v < 0 for v in values):
            raise ValueError("weights must be non-negative")
        if not any(v > 0 for v in values):
            raise ValueError("at least one weight must be positive")
        if sum(values) > 1.0 and not math.isclose(sum(values), 1.0):
            warn(
                f"weights sum to {sum(values):g}, more than 1; fitness may exceed the unit range",
                stacklevel=2,
            )
        for key, value in zip(("w1", "w2", "w3"), values):
            object.__setattr__(self, key, value)

    def as_array(self) -> np.ndarray:
        return np.array([self.w1, self.w2, self.w3], dtype=float)

    @classmethod
    def parse(cls, value: Any) -> "Weights":
        """Accept ``"w1,w2,w3"``, a 3-sequence or an existing :class:`Weights`."""

        if isinstance(value, Weights):
            return value
        items = value.split(",") if isinstance(value, str) else list(value)
        if len(items) != 3:
            raise ValueError(f"weights need three values, got {value!r}")
        return cls(*(float(str(item).strip()) for item in items))


@dataclass(frozen=True)
class NormalizationBounds:
    """Per-metric min/max used to normalize raw metrics."""

    ms_min: float
    ms_max: float
    tc_min: float
    tc_max: float
    te_min: float
    te_max: float

    def __post_init__(self) -> None:
        for prefix in ("ms", "tc", "te"):
            low = float(getattr(self, f"{prefix}_min"))
            high = float(getattr(self, f"{prefix}_max"))
            if low > high:
                raise ValueError(f"{prefix}_min must not exceed {prefix}_max")
            object.__setattr__(self, f"{prefix}_min", low)
            object.__setattr__(self, f"{prefix}_max", high)

    @property
    def lower(self) -> np.ndarray:
        return np.array([self.ms_min, self.tc_min, self.te_min])

    @property
    def upper(self) -> np.ndarray:
        return np.array([self.ms_max, self.tc_max, self.te_max])

    @classmethod
    def from_arrays(cls, lower: Sequence[float], upper: Sequence[float]) -> "NormalizationBounds":
        return cls(lower[0], upper[0], lower[1], upper[1], lower[2], upper[2])


def _as_raw_array(metrics: Iterable[Metrics] | np.ndarray) -> np.ndarray:
    if isinstance(metrics, np.ndarray):
        return metrics.reshape(-1, 3).astype(float)
    rows = [m.as_tuple() if isinstance(m, Metrics) else tuple(m) for m in metrics]
    return np.array(rows, dtype=float).reshape(-1, 3)


def calibrate_bounds(initial_metrics: Iterable[Metrics] | np.ndarray) -> NormalizationBounds:
    """Componentwise min and max over *initial_metrics* (list or ``(P, 3)`` array)."""

    raw = _as_raw_array(initial_metrics)
    if raw.shape[0] == 0:
        raise ValueError("cannot calibrate normalization bounds from an empty population")
    return NormalizationBounds.from_arrays(raw.min(axis=0), raw.max(axis=0))


def normalize_array(raw: np.ndarray, bounds: NormalizationBounds) -> np.ndarray:
    """Vectorized :func:`normalize` over rows of a ``(P, 3)`` array."""

    raw = np.asarray(raw, dtype=float)
    lower = bounds.lower
    span = bounds.upper - lower
    degenerate = span <= 0
    safe_span = np.where(degenerate, 1.0, span)
    return np.where(degenerate, 0.0, (raw - lower) / safe_span)


def normalize(metrics: Metrics, bounds: NormalizationBounds) -> tuple[float, float, float]:
    """``(x - min) / (max - min)`` per metric, 0 where ``max == min``; unclamped."""

    values = normalize_array(metrics.as_array(), bounds)
    return (float(values[0]), float(values[1]), float(values[2]))


def weighted_fitness(norm: Sequence[float] | np.ndarray, weights: Weights) -> Any:
    """``w1*MS + w2*TC + w3*TE``; a ``(P, 3)`` array gives ``P`` fitness values."""

    norm = np.asarray(norm, dtype=float)
    result = norm @ weights.as_array()
    if result.ndim == 0:
        return float(result)
    return result


class Problem:
    """A scheduling instance: workflow, resource pool and objective weights."""

    def __init__(self, workflow: Workflow, pool: ResourcePool, weights: Weights | None = None):
        self.workflow = workflow
        self.pool = pool
        self.weights = weights if weights is not None else Weights()
        self.evaluator = Evaluator(workflow, pool)

    @property
    def n(self) -> int:
        return self.workflow.n

    @property
    def m(self) -> int:
        return self.pool.m

    def evaluate_raw(self, genomes: np.ndarray) -> np.ndarray:
        """Raw metrics ``(P, 3)`` for integer genomes ``(P, n)``."""

        return self.evaluator.evaluate_many(genomes)

    def fitness(self, raw: np.ndarray, bounds: NormalizationBounds) -> np.ndarray:
        return np.atleast_1d(weighted_fitness(normalize_array(raw, bounds), self.weights))

    def score(self, mapping: Any, bounds: NormalizationBounds) -> tuple[Metrics, float]:
        """Raw metrics and fitness of one mapping under frozen *bounds*."""

        metrics = self.evaluator.evaluate(mapping)
        return metrics, float(weighted_fitness(normalize(metrics, bounds), self.weights))
