"""Workflow DAG model: tasks, data edges, validation and synthetic generators.

Task lengths are million instructions (MI) and edge sizes are megabits (Mb).
Plain floats are interpreted in those units; Pint quantities are converted.
Task ids are 0-based and contiguous; ``label`` keeps the external id (for
example the ``ID00000`` job ids of Pegasus DAX files).
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
import math
from typing import Any

import networkx as nx
import numpy as np

from .typed import DATA_UNIT, LENGTH_UNIT, to_magnitude

__all__ = [
    "Task",
    "DataEdge",
    "Workflow",
    "LayeredSpec",
    "ValidationReport",
    "WorkflowValidationError",
    "validate",
    "ensure_valid",
    "topological_order",
    "generate_layered",
    "depth",
    "to_networkx",
    "workflow_from_edges",
]


class WorkflowValidationError(ValueError):
    """Raised when a workflow breaks a structural invariant."""

    def __init__(self, violations: Sequence[str]):
        self.violations = tuple(violations)
        super().__init__("invalid workflow: " + "; ".join(self.violations))


@dataclass(frozen=True)
class Task:
    """One workflow task with its compute demand in MI."""

    id: int
    label: str
    length: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "id", int(self.id))
        object.__setattr__(self, "label", str(self.label))
        object.__setattr__(self, "length", to_magnitude(self.length, LENGTH_UNIT))


@dataclass(frozen=True)
class DataEdge:
    """Precedence edge carrying ``size`` Mb of output from parent to child."""

    parent: int
    child: int
    size: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "parent", int(self.parent))
        object.__setattr__(self, "child", int(self.child))
        object.__setattr__(self, "size", to_magnitude(self.size, DATA_UNIT))


@dataclass(frozen=True)
class Workflow:
    """Immutable workflow DAG ``G(T, E)``.

    Construction does not check invariants so that :func:`validate` can report
    every violation at once; use :func:`ensure_valid` to reject bad input.
    """

    tasks: tuple[Task, ...]
    edges: tuple[DataEdge, ...] = ()
    name: str = "workflow"

    def __post_init__(self) -> None:
        object.__setattr__(self, "tasks", tuple(self.tasks))
        object.__setattr__(self, "edges", tuple(self.edges))

    @property
    def n(self) -> int:
        """Number of tasks."""

        return len(self.tasks)

    @property
    def lengths(self) -> np.ndarray:
        """Task lengths [MI] indexed by task id."""

        return np.array([task.length for task in self.tasks], dtype=float)

    @property
    def total_length(self) -> float:
        return float(sum(task.length for task in self.tasks))

    @property
    def total_data(self) -> float:
        return float(sum(edge.size for edge in self.edges))

    @cached_property
    def parents(self) -> tuple[tuple[tuple[int, float], ...], ...]:
        """Per task id, the ``(parent id, size Mb)`` pairs feeding it."""

        incoming: list[list[tuple[int, float]]] = [[] for _ in self.tasks]
        for edge in self.edges:
            incoming[edge.child].append((edge.parent, edge.size))
        return tuple(tuple(sorted(items)) for items in incoming)

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        outgoing: list[list[int]] = [[] for _ in self.tasks]
        for edge in self.edges:
            outgoing[edge.parent].append(edge.child)
        return tuple(tuple(sorted(items)) for items in outgoing)

    @property
    def entry_tasks(self) -> tuple[int, ...]:
        """Tasks without parents."""

        return tuple(i for i, parents in enumerate(self.parents) if not parents)

    @property
    def exit_tasks(self) -> tuple[int, ...]:
        """Tasks without children."""

        return tuple(i for i, children in enumerate(self.children) if not children)

    @cached_property
    def order(self) -> tuple[int, ...]:
        """Cached :func:`topological_order`."""

        return tuple(topological_order(self))


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate`; ``violations`` is empty when valid."""

    violations: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def to_networkx(workflow: Workflow) -> nx.DiGraph:
    """Return the workflow as a ``networkx.DiGraph``.

    Nodes are task ids with ``label`` and ``length`` attributes; edges carry
    ``size``. Edges whose endpoints are unknown tasks are skipped.
    """

    graph = nx.DiGraph(name=workflow.name)
    for task in workflow.tasks:
        graph.add_node(task.id, label=task.label, length=task.length)
    for edge in workflow.edges:
        if edge.parent in graph and edge.child in graph:
            graph.add_edge(edge.parent, edge.child, size=edge.size)
    return graph


def validate(workflow: Workflow) -> ValidationReport:
    """Check every workflow invariant and return the full list of violations."""

    violations: list[str] = []
    if workflow.n < 1:
        violations.append("workflow has no tasks")

    seen_ids: set[int] = set()
    for position, task in enumerate(workflow.tasks):
        if task.id in seen_ids:
            violations.append(f"duplicate task id {task.id} ({task.label})")
        seen_ids.add(task.id)
        if task.id != position:
            violations.append(
                f"task {task.label} has id {task.id}, expected contiguous id {position}"
            )
        if not math.isfinite(task.length):
            violations.append(f"task {task.label} has non-finite length {task.length}")
        elif task.length <= 0:
            violations.append(f"task {task.label} has non-positive length {task.length}")

    labels = {task.id: task.label for task in workflow.tasks}
    pairs: set[tuple[int, int]] = set()
    for edge in workflow.edges:
        dangling = [end for end in (edge.parent, edge.child) if end not in labels]
        if dangling:
            violations.append(
                f"edge {edge.parent}->{edge.child} references unknown task(s) "
                + ", ".join(str(end) for end in dangling)
            )
            continue
        if edge.parent == edge.child:
            violations.append(f"self-loop on task {labels[edge.parent]}")
        if (edge.parent, edge.child) in pairs:
            violations.append(
                f"duplicate edge {labels[edge.parent]}->{labels[edge.child]}"
            )
        pairs.add((edge.parent, edge.child))
        if not math.isfinite(edge.size) or edge.size < 0:
            violations.append(
                f"edge {labels[edge.parent]}->{labels[edge.child]} has invalid size {edge.size}"
            )

    graph = to_networkx(workflow)
    graph.remove_edges_from(list(nx.selfloop_edges(graph)))
    try:
        cycle = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        pass
    else:
        members = [labels[parent] for parent, _ in cycle]
        violations.append("cycle through tasks " + " -> ".join(members))

    return ValidationReport(tuple(violations))


def ensure_valid(workflow: Workflow) -> Workflow:
    """Return *workflow* unchanged, or raise :class:`WorkflowValidationError`."""

    report = validate(workflow)
    if not report.ok:
        raise WorkflowValidationError(report.violations)
    return workflow


def topological_order(workflow: Workflow) -> list[int]:
    """Return task ids with every parent before its children.

    Among ready tasks the smallest id goes first, so the order is unique.
    """

    graph = to_networkx(workflow)
    try:
        return list(nx.lexicographical_topological_sort(graph))
    except nx.NetworkXUnfeasible as exc:
        raise WorkflowValidationError(["workflow contains a cycle"]) from exc


def depth(workflow: Workflow) -> int:
    """Longest path length counted in tasks."""

    if workflow.n == 0:
        return 0
    return int(nx.dag_longest_path_length(to_networkx(workflow))) + 1


def _ordered_range(values: Sequence[float], name: str) -> tuple[float, float]:
    low, high = (float(value) for value in values)
    if not (math.isfinite(low) and math.isfinite(high)):
        raise ValueError(f"{name} must be finite")
    if low > high:
        raise ValueError(f"{name} must be ordered (min <= max), got {low}, {high}")
    return low, high


@dataclass(frozen=True)
class LayeredSpec:
    """Shape of a synthetic layered workflow.

    ``layers`` holds layer widths; every task in layer ``i > 0`` receives an
    edge from each task of layer ``i - 1`` with probability
    ``inter_layer_density``, and at least one such edge.
    """

    layers: tuple[int, ...]
    length_range: tuple[float, float] = (1000.0, 10000.0)
    edge_size_range: tuple[float, float] = (0.0, 20.0)
    inter_layer_density: float = 0.5

    def __post_init__(self) -> None:
        layers = tuple(int(width) for width in self.layers)
        if not layers:
            raise ValueError("LayeredSpec requires at least one layer")
        if any(width < 1 for width in layers):
            raise ValueError("layer widths must be positive integers")
        length_range = _ordered_range(self.length_range, "length_range")
        if length_range[0] <= 0:
            raise ValueError("length_range must be strictly positive")
        edge_size_range = _ordered_range(self.edge_size_range, "edge_size_range")
        if edge_size_range[0] < 0:
            raise ValueError("edge_size_range must be non-negative")
        density = float(self.inter_layer_density)
        if not 0.0 <= density <= 1.0:
            raise ValueError("inter_layer_density must lie in [0, 1]")
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "length_range", length_range)
        object.__setattr__(self, "edge_size_range", edge_size_range)
        object.__setattr__(self, "inter_layer_density", density)

    @property
    def n(self) -> int:
        return sum(self.layers)


def _label(index: int) -> str:
    return f"ID{index:05d}"


def generate_layered(spec: LayeredSpec, seed: Any = None, name: str | None = None) -> Workflow:
    """Generate a validated layered workflow, deterministic for a fixed seed."""

    rng = np.random.default_rng(seed)
    lengths = rng.uniform(*spec.length_range, size=spec.n)
    tasks = [Task(i, _label(i), float(length)) for i, length in enumerate(lengths)]

    edges: list[DataEdge] = []
    start = 0
    previous: list[int] = []
    for width in spec.layers:
        layer = list(range(start, start + width))
        for child in layer:
            if not previous:
                break
            chosen = [p for p in previous if rng.random() < spec.inter_layer_density]
            if not chosen:
                chosen = [previous[int(rng.integers(len(previous)))]]
            sizes = rng.uniform(*spec.edge_size_range, size=len(chosen))
            edges.extend(
                DataEdge(parent, child, float(size)) for parent, size in zip(chosen, sizes)
            )
        previous = layer
        start += width

    if name is None:
        name = "layered-" + "x".join(str(width) for width in spec.layers)
    edges.sort(key=lambda edge: (edge.parent, edge.child))
    return ensure_valid(Workflow(tuple(tasks), tuple(edges), name))


def workflow_from_edges(
    lengths: Iterable[float],
    edges: Iterable[tuple[int, int, float]] = (),
    name: str = "workflow",
) -> Workflow:
    """Build a workflow from task lengths and ``(parent, child, size)`` triples."""

    tasks = tuple(Task(i, _label(i), length) for i, length in enumerate(lengths))
    data_edges = tuple(DataEdge(parent, child, size) for parent, child, size in edges)
    return Workflow(tasks, data_edges, name)
