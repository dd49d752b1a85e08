"""Deterministic list scheduling of a task mapping and its three raw metrics.

Tasks are placed in topological order (ties by ascending id). Each resource is
a FIFO queue: a task starts once its resource is free and every parent's
output has arrived, where a transfer takes ``size / link_bandwidth`` seconds
between distinct resources and nothing on the same resource. Transfers delay
children but occupy no compute time and draw no modeled energy.

Metrics:

- makespan: latest finish minus earliest start [s];
- total cost: per-edge transfer tariff times size plus per-task execution
  tariff times execution time [$];
- total energy: working power over busy time plus idle power over the rest of
  ``[0, makespan]`` for every resource in the pool, used or not [J].
"""

from __future__ import annotations

import csv
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from os import PathLike
from pathlib import Path
from typing import Any, Union

import numpy as np

from . import constant
from .infra import Layer, ResourcePool
from .workflow import Workflow

__all__ = [
    "Mapping",
    "MappingError",
    "ScheduleInvariantError",
    "ScheduleTrace",
    "Metrics",
    "Evaluator",
    "AllocationRow",
    "simulate",
    "makespan",
    "total_cost",
    "total_energy",
    "evaluate",
    "allocation_table",
    "save_trace_csv",
]

PathType = Union[str, "PathLike[str]"]


class MappingError(ValueError):
    """Raised when a mapping does not fit the workflow and pool."""


class ScheduleInvariantError(RuntimeError):
    """Raised when a trace breaks an invariant the scheduler guarantees."""


@dataclass(frozen=True)
class Mapping:
    """Task-to-resource assignment; position is the task id, value the resource id.

    Ids are 0-based. :meth:`to_external`/:meth:`from_external` convert to the
    1-based encoding used in reports (task 1 is the first task, VM 1 the first
    resource).
    """

    assignment: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "assignment", tuple(int(v) for v in self.assignment))

    def __len__(self) -> int:
        return len(self.assignment)

    def __iter__(self):
        return iter(self.assignment)

    def __getitem__(self, index: int) -> int:
        return self.assignment[index]

    def to_external(self) -> tuple[int, ...]:
        return tuple(v + 1 for v in self.assignment)

    @classmethod
    def from_external(cls, values: Iterable[int]) -> "Mapping":
        return cls(tuple(int(v) - 1 for v in values))

    def check(self, workflow: Workflow, pool: ResourcePool) -> None:
        """Raise :class:`MappingError` unless the mapping fits *workflow* and *pool*."""

        _checked_assignment(workflow, pool, self)


def _checked_assignment(workflow: Workflow, pool: ResourcePool, mapping: Any) -> list[int]:
    values = mapping.assignment if isinstance(mapping, Mapping) else mapping
    arr = np.asarray(values)
    if arr.ndim != 1 or len(arr) != workflow.n:
        raise MappingError(f"mapping must have one entry per task ({workflow.n})")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise MappingError("mapping entries must be integer resource ids")
    assignment = [int(v) for v in arr]
    bad = [v for v in assignment if not 0 <= v < pool.m]
    if bad:
        raise MappingError(f"mapping uses resource id {bad[0]} outside 0..{pool.m - 1}")
    return assignment


@dataclass(frozen=True, eq=False)
class ScheduleTrace:
    """Start/finish times per task, busy seconds per resource, and the horizon."""

    start: np.ndarray
    finish: np.ndarray
    busy: np.ndarray
    horizon: float

    @property
    def idle(self) -> np.ndarray:
        """Idle seconds per resource over ``[0, horizon]``."""

        return self.horizon - self.busy


@dataclass(frozen=True)
class Metrics:
    """Raw objective triple: makespan [s], total cost [$], total energy [J]."""

    makespan: float
    total_cost: float
    total_energy: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.makespan, self.total_cost, self.total_energy)

    def as_array(self) -> np.ndarray:
        return np.array(self.as_tuple(), dtype=float)

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "Metrics":
        makespan_s, cost, energy = (float(v) for v in values)
        return cls(makespan_s, cost, energy)


class Evaluator:
    """Precomputed scheduling tables for one ``(workflow, pool)`` pair.

    Optimizers evaluate thousands of mappings against the same instance, so the
    topological order, parent lists and link tables are built once here.
    """

    def __init__(self, workflow: Workflow, pool: ResourcePool):
        self.workflow = workflow
        self.pool = pool
        self.n = workflow.n
        self.m = pool.m
        self._order = list(workflow.order)
        self._parents = [list(parents) for parents in workflow.parents]
        self._lengths = [task.length for task in workflow.tasks]
        self._mips = pool.mips.tolist()
        self._bandwidth = pool.bandwidth_matrix().tolist()
        self._comm_cost = pool.comm_cost_matrix().tolist()
        self._edges = [(edge.parent, edge.child, edge.size) for edge in workflow.edges]
        self._exec_rates = pool.exec_cost_rates
        self._working = pool.working_powers
        self._idle = pool.idle_powers

    def simulate(self, mapping: Any) -> ScheduleTrace:
        assignment = _checked_assignment(self.workflow, self.pool, mapping)
        return self._simulate(assignment)

    def _simulate(self, assignment: list[int]) -> ScheduleTrace:
        ready = [0.0] * self.m
        busy = [0.0] * self.m
        start = [0.0] * self.n
        finish = [0.0] * self.n
        bandwidth = self._bandwidth
        for task in self._order:
            resource = assignment[task]
            earliest = ready[resource]
            for parent, size in self._parents[task]:
                arrival = finish[parent]
                source = assignment[parent]
                if source != resource and size > 0:
                    arrival += size / bandwidth[source][resource]
                if arrival > earliest:
                    earliest = arrival
            duration = self._lengths[task] / self._mips[resource]
            start[task] = earliest
            finish[task] = earliest + duration
            ready[resource] = finish[task]
            busy[resource] += duration
        start_arr = np.array(start)
        finish_arr = np.array(finish)
        horizon = float(finish_arr.max() - start_arr.min()) if self.n else 0.0
        return ScheduleTrace(start_arr, finish_arr, np.array(busy), horizon)

    def total_cost(self, assignment: Sequence[int], trace: ScheduleTrace) -> float:
        comm = 0.0
        for parent, child, size in self._edges:
            comm += self._comm_cost[assignment[parent]][assignment[child]] * size
        durations = trace.finish - trace.start
        execution = float(np.dot(self._exec_rates[np.asarray(assignment)], durations))
        return comm + execution

    def total_energy(self, trace: ScheduleTrace) -> float:
        return _energy(self._working, self._idle, trace)

    def evaluate(self, mapping: Any) -> Metrics:
        assignment = _checked_assignment(self.workflow, self.pool, mapping)
        return Metrics.from_array(self._evaluate_row(assignment))

    def _evaluate_row(self, assignment: list[int]) -> tuple[float, float, float]:
        trace = self._simulate(assignment)
        return (
            makespan(trace),
            self.total_cost(assignment, trace),
            self.total_energy(trace),
        )

    def evaluate_many(self, genomes: np.ndarray) -> np.ndarray:
        """Raw metrics ``(P, 3)`` for a ``(P, n)`` array of feasible genomes.

        Rows are evaluated independently; the result does not depend on the
        order in which rows are visited.
        """

        genomes = np.asarray(genomes)
        if genomes.ndim != 2 or genomes.shape[1] != self.n:
            raise MappingError(f"genomes must have shape (P, {self.n})")
        if genomes.size and (genomes.min() < 0 or genomes.max() >= self.m):
            raise MappingError(f"genome entries must lie in 0..{self.m - 1}")
        rows = genomes.astype(int).tolist()
        return np.array([self._evaluate_row(row) for row in rows], dtype=float).reshape(
            len(rows), 3
        )


def _energy(working: np.ndarray, idle_power: np.ndarray, trace: ScheduleTrace) -> float:
    tolerance = 1e-9 * max(1.0, trace.horizon)
    if np.any(trace.busy > trace.horizon + tolerance):
        raise ScheduleInvariantError("resource busy time exceeds the schedule horizon")
    idle = np.maximum(trace.horizon - trace.busy, 0.0)
    active_energy = float(np.dot(working, trace.busy))
    idle_energy = float(np.dot(idle_power, idle))
    return active_energy + idle_energy


def simulate(workflow: Workflow, pool: ResourcePool, mapping: Any) -> ScheduleTrace:
    """Place every task and return the resulting :class:`ScheduleTrace`."""

    return Evaluator(workflow, pool).simulate(mapping)


def makespan(trace: ScheduleTrace) -> float:
    """Latest finish minus earliest start [s]."""

    if trace.finish.size == 0:
        return 0.0
    return float(trace.finish.max() - trace.start.min())


def total_cost(
    workflow: Workflow, pool: ResourcePool, mapping: Any, trace: ScheduleTrace
) -> float:
    """Communication plus execution cost [$] of *mapping* under *trace*."""

    evaluator = Evaluator(workflow, pool)
    return evaluator.total_cost(_checked_assignment(workflow, pool, mapping), trace)


def total_energy(pool: ResourcePool, trace: ScheduleTrace) -> float:
    """Active plus idle energy [J] of all resources over ``[0, horizon]``."""

    if len(trace.busy) != pool.m:
        raise ScheduleInvariantError("trace and pool disagree on the number of resources")
    return _energy(pool.working_powers, pool.idle_powers, trace)


def evaluate(workflow: Workflow, pool: ResourcePool, mapping: Any) -> Metrics:
    """Simulate *mapping* and return its raw :class:`Metrics`."""

    return Evaluator(workflow, pool).evaluate(mapping)


@dataclass(frozen=True)
class AllocationRow:
    """One resource of the task-resource allocation view (1-based ids)."""

    vm_id: int
    layer: Layer
    tasks: tuple[int, ...]


def allocation_table(pool: ResourcePool, mapping: Any) -> list[AllocationRow]:
    """Group the 1-based task numbers of *mapping* under each 1-based VM id."""

    values = mapping.assignment if isinstance(mapping, Mapping) else tuple(mapping)
    assigned: list[list[int]] = [[] for _ in range(pool.m)]
    for task, resource in enumerate(values):
        pool.resource(int(resource))
        assigned[int(resource)].append(task + 1)
    return [
        AllocationRow(resource.id + 1, resource.layer, tuple(assigned[resource.id]))
        for resource in pool.resources
    ]


def save_trace_csv(path: PathType, trace: ScheduleTrace, mapping: Any) -> None:
    """Write ``task_id,resource_id,start_s,finish_s`` rows, one per task."""

    values = mapping.assignment if isinstance(mapping, Mapping) else tuple(mapping)
    fmt = constant.float_format
    with Path(path).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["task_id", "resource_id", "start_s", "finish_s"])
        for task, resource in enumerate(values):
            writer.writerow(
                [
                    task,
                    int(resource),
                    format(float(trace.start[task]), fmt),
                    format(float(trace.finish[task]), fmt),
                ]
            )

