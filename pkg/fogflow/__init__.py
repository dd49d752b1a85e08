# FogFlow, a cloud-fog workflow scheduling laboratory
# Copyright (C) 2026, FogFlow contributors

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.

# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.

"""Public package interface for FogFlow.

``import fogflow`` has no heavy side effects; submodules and the public
symbols below are imported on first access.
"""

from __future__ import annotations

from importlib import import_module, metadata
from pathlib import Path
import re
from typing import Any


def _version_from_pyproject() -> str:
    """Return the source-tree project version when package metadata is absent."""
    pyproject = Path(__file__).resolve().parents[1] / "pyproject.toml"
    try:
        try:
            tomllib: Any = import_module("tomllib")
        except ModuleNotFoundError:  # pragma: no cover - Python < 3.11 fallback
            tomllib = None

        if tomllib is not None:
            with pyproject.open("rb") as handle:
                return tomllib.load(handle)["project"]["version"]

        text = pyproject.read_text(encoding="utf-8")
    except (OSError, KeyError):
        return "0+unknown"

    in_project = False
    for raw_line in text.splitlines():
        line = raw_line.strip()
        if line == "[project]":
            in_project = True
            continue
        if in_project and line.startswith("["):
            break
        if in_project:
            match = re.match(r"""version\s*=\s*["']([^"']+)["']""", line)
            if match:
                return match.group(1)
    return "0+unknown"


def _load_version() -> str:
    try:
        return metadata.version("fogflow")
    except metadata.PackageNotFoundError:
        return _version_from_pyproject()


__version__ = _load_version()

_SUBMODULES = {
    "constant",
    "typed",
    "workflow",
    "dax",
    "infra",
    "simulation",
    "objective",
    "optimizers",
    "high_level",
    "cli",
}

_SYMBOL_TO_MODULE = {
    "Q_": "typed",
    "ureg": "typed",
    "Task": "workflow",
    "DataEdge": "workflow",
    "Workflow": "workflow",
    "LayeredSpec": "workflow",
    "ValidationReport": "workflow",
    "WorkflowValidationError": "workflow",
    "validate": "workflow",
    "topological_order": "workflow",
    "generate_layered": "workflow",
    "depth": "workflow",
    "DaxParseError": "dax",
    "parse_dax": "dax",
    "read_dax": "dax",
    "write_dax": "dax",
    "Layer": "infra",
    "Resource": "infra",
    "ResourcePool": "infra",
    "PoolError": "infra",
    "default_testbed": "infra",
    "Mapping": "simulation",
    "MappingError": "simulation",
    "ScheduleInvariantError": "simulation",
    "ScheduleTrace": "simulation",
    "Metrics": "simulation",
    "simulate": "simulation",
    "evaluate": "simulation",
    "makespan": "simulation",
    "total_cost": "simulation",
    "total_energy": "simulation",
    "allocation_table": "simulation",
    "Weights": "objective",
    "NormalizationBounds": "objective",
    "Problem": "objective",
    "calibrate_bounds": "objective",
    "normalize": "objective",
    "weighted_fitness": "objective",
    "ALGORITHMS": "optimizers",
    "ConfigError": "optimizers",
    "OptimizerConfig": "optimizers",
    "RunResult": "optimizers",
    "run_pso": "optimizers",
    "run_ga": "optimizers",
    "run_de": "optimizers",
    "run_ga_pso": "optimizers",
    "brute_force": "optimizers",
    "ExperimentConfig": "high_level",
    "read_inputs": "high_level",
    "run_experiment": "high_level",
    "save_csv": "high_level",
    "describe": "high_level",
}

__all__ = ["__version__", *sorted(_SUBMODULES), *_SYMBOL_TO_MODULE]


def __getattr__(name: str) -> Any:
    if name in _SUBMODULES:
        value = import_module(f".{name}", __name__)
    elif name in _SYMBOL_TO_MODULE:
        module = import_module(f".{_SYMBOL_TO_MODULE[name]}", __name__)
        value = getattr(module, name)
    else:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}")

    globals()[name] = value
    return value


def __dir__() -> list[str]:
    return sorted(set(globals()) | set(__all__) | _SUBMODULES)
