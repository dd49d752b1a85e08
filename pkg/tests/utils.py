"""Helper functions for test validation."""

import numpy as np


def assert_non_increasing(sequence):
    """Assert a convergence sequence never rises, with zero tolerance."""
    values = np.asarray(sequence, dtype=float)
    rises = np.nonzero(np.diff(values) > 0)[0]
    assert rises.size == 0, f"sequence rises after index {rises[:5].tolist()}: {values}"


def assert_feasible_trace(workflow, mapping, trace):
    """
    Assert that a schedule trace respects precedence and resource exclusivity.

    Args:
        workflow: the scheduled Workflow
        mapping: sequence of 0-based resource ids per task
        trace: ScheduleTrace produced for ``mapping``
    """
    assert np.all(np.isfinite(trace.start)), "start times must be finite"
    assert np.all(trace.finish >= trace.start), "finish precedes start"

    for edge in workflow.edges:
        assert trace.start[edge.child] >= trace.finish[edge.parent] - 1e-12, (
            f"task {edge.child} starts before parent {edge.parent} finishes"
        )

    by_resource = {}
    for task, resource in enumerate(mapping):
        by_resource.setdefault(int(resource), []).append(task)
    for tasks in by_resource.values():
        spans = sorted((trace.start[t], trace.finish[t]) for t in tasks)
        for (_, end), (begin, _) in zip(spans, spans[1:]):
            assert begin >= end - 1e-12, "tasks overlap on one resource"
