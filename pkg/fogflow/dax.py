"""Pegasus DAX reader and writer.

``job`` elements become tasks in document order with
``length = runtime * 1000`` MI, i.e. runtimes are calibrated to a 1000-MIPS
reference machine. A file written (``link="out"``/``"output"``) by one job
and read by another yields a data edge; all files shared by the same ordered
pair are summed, bytes converted to megabits. ``child``/``parent``
declarations with no shared file become zero-size edges. An ``inout`` file
counts as both written and read by its job.
"""

from __future__ import annotations

from collections import defaultdict
from os import PathLike
from pathlib import Path
from typing import Union
import xml.etree.ElementTree as ET

from . import constant
from .workflow import DataEdge, Task, Workflow, WorkflowValidationError, ensure_valid

__all__ = [
    "DaxParseError",
    "parse_dax",
    "read_dax",
    "write_dax",
    "save_dax",
    "bytes_to_megabits",
    "megabits_to_bytes",
]

DAX_NAMESPACE = "http://pegasus.isi.edu/schema/DAX"

_OUT_LINKS = {"out", "output"}
_IN_LINKS = {"in", "input"}
_INOUT_LINKS = {"inout"}

PathType = Union[str, "PathLike[str]"]


class DaxParseError(ValueError):
    """Raised for malformed XML or DAX content; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _float_attribute(element: ET.Element, key: str, context: str) -> float:
    raw = element.get(key)
    if raw is None:
        raise DaxParseError(f"{context} lacks a {key!r} attribute")
    try:
        return float(raw)
    except ValueError as exc:
        raise DaxParseError(f"{context} has non-numeric {key}={raw!r}") from exc


def bytes_to_megabits(size_bytes: float) -> float:
    return size_bytes * constant.byte_To_bit / constant.Mb_To_bit


def megabits_to_bytes(size_mb: float) -> float:
    return size_mb * constant.Mb_To_bit / constant.byte_To_bit


def parse_dax(document: str | bytes, name: str = "workflow") -> Workflow:
    """Parse DAX XML text into a validated :class:`Workflow`."""

    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        line, column = exc.position
        raise DaxParseError("malformed DAX XML", line, column) from exc

    ids: dict[str, int] = {}
    tasks: list[Task] = []
    producers: dict[str, list[int]] = defaultdict(list)
    consumers: dict[str, list[int]] = defaultdict(list)
    file_sizes: dict[str, float] = {}
    consumer_sizes: dict[str, float] = {}

    for job in (el for el in root.iter() if _local(el.tag) == "job"):
        label = job.get("id")
        if label is None:
            raise DaxParseError("job element lacks an 'id' attribute")
        if label in ids:
            raise WorkflowValidationError([f"duplicate job id {label}"])
        runtime = _float_attribute(job, "runtime", f"job {label}")
        index = len(tasks)
        ids[label] = index
        tasks.append(Task(index, label, runtime * constant.reference_mips))

        for uses in (el for el in job if _local(el.tag) == "uses"):
            filename = uses.get("file", uses.get("name"))
            if filename is None:
                raise DaxParseError(f"job {label} has a uses element without a file")
            link = (uses.get("link") or "").lower()
            size = None
            if uses.get("size") is not None:
                size = _float_attribute(uses, "size", f"file {filename}")
            if link not in _OUT_LINKS | _IN_LINKS | _INOUT_LINKS:
                raise DaxParseError(f"file {filename} of job {label} has unknown link {link!r}")
            if link in _OUT_LINKS | _INOUT_LINKS:
                producers[filename].append(index)
                if size is not None:
                    file_sizes[filename] = size
            if link in _IN_LINKS | _INOUT_LINKS:
                consumers[filename].append(index)
                if size is not None:
                    consumer_sizes.setdefault(filename, size)

    pair_bytes: dict[tuple[int, int], float] = defaultdict(float)
    for filename, readers in consumers.items():
        size = file_sizes.get(filename, consumer_sizes.get(filename, 0.0))
        for parent in producers.get(filename, ()):
            for child in readers:
                if parent != child:
                    pair_bytes[(parent, child)] += size

    for child_el in (el for el in root.iter() if _local(el.tag) == "child"):
        child_ref = child_el.get("ref")
        for parent_el in (el for el in child_el if _local(el.tag) == "parent"):
            parent_ref = parent_el.get("ref")
            missing = [ref for ref in (child_ref, parent_ref) if ref not in ids]
            if missing:
                raise WorkflowValidationError(
                    [f"dependency references unknown job {ref}" for ref in missing]
                )
            pair = (ids[str(parent_ref)], ids[str(child_ref)])
            if pair not in pair_bytes:
                pair_bytes[pair] = 0.0

    edges = tuple(
        DataEdge(parent, child, bytes_to_megabits(size))
        for (parent, child), size in sorted(pair_bytes.items())
    )
    return ensure_valid(Workflow(tuple(tasks), edges, name))


def read_dax(path: PathType) -> Workflow:
    """Read and parse a DAX file; the workflow is named after the file stem."""

    path = Path(path)
    return parse_dax(path.read_bytes(), name=path.stem)


def write_dax(workflow: Workflow) -> str:
    """Serialize *workflow* as DAX text that :func:`parse_dax` reads back.

    Each non-empty edge becomes one file written by the parent and read by the
    child; every edge is also declared as a ``child``/``parent`` dependency.
    """

    ET.register_namespace("", DAX_NAMESPACE)

    def tag(name: str) -> str:
        return f"{{{DAX_NAMESPACE}}}{name}"

    root = ET.Element(
        tag("adag"),
        {"version": "2.1", "name": workflow.name, "jobCount": str(workflow.n)},
    )
    jobs = {}
    for task in workflow.tasks:
        jobs[task.id] = ET.SubElement(
            root,
            tag("job"),
            {"id": task.label, "runtime": repr(task.length / constant.reference_mips)},
        )
    labels = {task.id: task.label for task in workflow.tasks}
    for edge in workflow.edges:
        if edge.size <= 0:
            continue
        filename = f"{labels[edge.parent]}_{labels[edge.child]}.dat"
        size = repr(megabits_to_bytes(edge.size))
        ET.SubElement(jobs[edge.parent], tag("uses"), {"file": filename, "link": "output", "size": size})
        ET.SubElement(jobs[edge.child], tag("uses"), {"file": filename, "link": "input", "size": size})

    by_child: dict[int, list[int]] = defaultdict(list)
    for edge in workflow.edges:
        by_child[edge.child].append(edge.parent)
    for child in sorted(by_child):
        child_el = ET.SubElement(root, tag("child"), {"ref": labels[child]})
        for parent in sorted(by_child[child]):
            ET.SubElement(child_el, tag("parent"), {"ref": labels[parent]})

    ET.indent(root)
    return ET.tostring(root, encoding="unicode", xml_declaration=True) + "\n"


def save_dax(workflow: Workflow, path: PathType) -> None:
    """Write :func:`write_dax` output to *path*."""

    Path(path).write_text(write_dax(workflow), encoding="utf-8")
