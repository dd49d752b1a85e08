"""Three-tier compute pool: end devices, fog nodes and cloud servers.

Rates are MIPS, execution tariffs $/s, communication tariffs $/Mb, power
ratings watts and bandwidths Mbps. Plain floats are read in those units;
Pint quantities are converted.
"""

from __future__ import annotations

import csv
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import IntEnum
import math
from os import PathLike
from pathlib import Path
from typing import Any, Union

import numpy as np

from . import constant
from .typed import BANDWIDTH_UNIT, POWER_UNIT, RATE_UNIT, to_finite_float

__all__ = [
    "Layer",
    "Resource",
    "ResourcePool",
    "PoolError",
    "default_testbed",
    "link_bandwidth",
    "unit_comm_cost",
    "read_pool_table",
    "parse_counts",
    "POOL_TABLE_COLUMNS",
]

POOL_TABLE_COLUMNS = (
    "layer",
    "mips",
    "exec_cost_rate",
    "comm_cost_rate",
    "working_power",
    "idle_power",
    "uplink",
    "downlink",
)


class PoolError(ValueError):
    """Raised for invalid resources, pools or resource ids."""


class Layer(IntEnum):
    """Resource tier; the ordering is only used for reporting."""

    EndDevice = 0
    Fog = 1
    Cloud = 2

    @classmethod
    def parse(cls, value: Any) -> "Layer":
        if isinstance(value, Layer):
            return value
        key = str(value).strip().lower().replace("_", "").replace("-", "").replace(" ", "")
        aliases = {
            "end": cls.EndDevice,
            "enddevice": cls.EndDevice,
            "device": cls.EndDevice,
            "fog": cls.Fog,
            "fognode": cls.Fog,
            "cloud": cls.Cloud,
            "cloudserver": cls.Cloud,
        }
        if key not in aliases:
            raise PoolError(f"unknown layer {value!r}; expected end, fog or cloud")
        return aliases[key]

    @property
    def label(self) -> str:
        return {Layer.EndDevice: "End", Layer.Fog: "Fog", Layer.Cloud: "Cloud"}[self]


@dataclass(frozen=True)
class Resource:
    """One compute resource.

    ``working_power`` and ``idle_power`` are the folded active and idle power
    constants of the energy model; ``exec_cost_rate`` is charged per second of
    execution and ``comm_cost_rate`` per Mb transferred.
    """

    id: int
    layer: Layer
    mips: Any
    exec_cost_rate: Any = 0.0
    comm_cost_rate: Any = 0.0
    working_power: Any = 1.0
    idle_power: Any = 0.0
    uplink: Any = 1.0
    downlink: Any = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "id", int(self.id))
        object.__setattr__(self, "layer", Layer.parse(self.layer))
        try:
            values = {
                "mips": to_finite_float(self.mips, RATE_UNIT, "mips"),
                "exec_cost_rate": to_finite_float(self.exec_cost_rate, None, "exec_cost_rate"),
                "comm_cost_rate": to_finite_float(self.comm_cost_rate, None, "comm_cost_rate"),
                "working_power": to_finite_float(self.working_power, POWER_UNIT, "working_power"),
                "idle_power": to_finite_float(self.idle_power, POWER_UNIT, "idle_power"),
                "uplink": to_finite_float(self.uplink, BANDWIDTH_UNIT, "uplink"),
                "downlink": to_finite_float(self.downlink, BANDWIDTH_UNIT, "downlink"),
            }
        except ValueError as exc:
            raise PoolError(f"resource {self.id}: {exc}") from exc

        for key in ("mips", "working_power", "uplink", "downlink"):
            if values[key] <= 0:
                raise PoolError(f"resource {self.id}: {key} must be positive")
        for key in ("exec_cost_rate", "comm_cost_rate", "idle_power"):
            if values[key] < 0:
                raise PoolError(f"resource {self.id}: {key} must be non-negative")
        if values["idle_power"] > values["working_power"]:
            raise PoolError(f"resource {self.id}: idle_power exceeds working_power")
        for key, value in values.items():
            object.__setattr__(self, key, value)

    @classmethod
    def from_defaults(cls, id: int, layer: Layer) -> "Resource":
        """Resource with the testbed parameters of *layer*."""

        table = {
            Layer.EndDevice: constant.end_device,
            Layer.Fog: constant.fog_node,
            Layer.Cloud: constant.cloud_server,
        }[Layer.parse(layer)]
        return cls(id, layer, **table)


@dataclass(frozen=True)
class ResourcePool:
    """Ordered resources with contiguous ids ``0..m-1``."""

    resources: tuple[Resource, ...]

    def __post_init__(self) -> None:
        resources = tuple(self.resources)
        if not resources:
            raise PoolError("resource pool must contain at least one resource")
        for index, resource in enumerate(resources):
            if resource.id != index:
                raise PoolError(
                    f"resource ids must be contiguous from 0; position {index} has id {resource.id}"
                )
        object.__setattr__(self, "resources", resources)

    @property
    def m(self) -> int:
        return len(self.resources)

    def __len__(self) -> int:
        return len(self.resources)

    def __getitem__(self, index: int) -> Resource:
        return self.resource(index)

    def resource(self, index: int) -> Resource:
        if isinstance(index, bool) or not 0 <= int(index) < self.m:
            raise PoolError(f"resource id {index} outside 0..{self.m - 1}")
        return self.resources[int(index)]

    def _column(self, key: str) -> np.ndarray:
        return np.array([getattr(r, key) for r in self.resources], dtype=float)

    @property
    def mips(self) -> np.ndarray:
        return self._column("mips")

    @property
    def exec_cost_rates(self) -> np.ndarray:
        return self._column("exec_cost_rate")

    @property
    def working_powers(self) -> np.ndarray:
        return self._column("working_power")

    @property
    def idle_powers(self) -> np.ndarray:
        return self._column("idle_power")

    @property
    def layers(self) -> tuple[Layer, ...]:
        return tuple(r.layer for r in self.resources)

    def counts(self) -> dict[Layer, int]:
        """Number of resources per layer."""

        return {layer: self.layers.count(layer) for layer in Layer}

    def bandwidth_matrix(self) -> np.ndarray:
        """``[src, dst]`` link bandwidths; the diagonal is ``inf``."""

        up = self._column("uplink")
        down = self._column("downlink")
        matrix = np.minimum(up[:, None], down[None, :])
        np.fill_diagonal(matrix, math.inf)
        return matrix

    def comm_cost_matrix(self) -> np.ndarray:
        """``[src, dst]`` unit communication costs; the diagonal is zero."""

        rates = self._column("comm_cost_rate")
        matrix = np.maximum(rates[:, None], rates[None, :])
        np.fill_diagonal(matrix, 0.0)
        return matrix

    @classmethod
    def from_resources(cls, resources: Iterable[Resource | dict]) -> "ResourcePool":
        """Build a pool, renumbering resources in the given order."""

        built = []
        for index, item in enumerate(resources):
            if isinstance(item, Resource):
                fields = {k: getattr(item, k) for k in POOL_TABLE_COLUMNS}
            else:
                fields = dict(item)
                fields.pop("id", None)
            built.append(Resource(index, **fields))
        return cls(tuple(built))


def default_testbed(
    n_end: int = constant.pool_counts[0],
    n_fog: int = constant.pool_counts[1],
    n_cloud: int = constant.pool_counts[2],
) -> ResourcePool:
    """Pool of end devices, then fog nodes, then cloud servers with testbed rates."""

    counts = (int(n_end), int(n_fog), int(n_cloud))
    if any(count < 0 for count in counts):
        raise PoolError("resource counts must be non-negative")
    if sum(counts) < 1:
        raise PoolError("resource pool must contain at least one resource")
    resources = []
    for layer, count in zip(Layer, counts):
        for _ in range(count):
            resources.append(Resource.from_defaults(len(resources), layer))
    return ResourcePool(tuple(resources))


def link_bandwidth(pool: ResourcePool, src: int, dst: int) -> float:
    """Bandwidth [Mbps] of the path from *src* to *dst*; ``inf`` when co-located."""

    source = pool.resource(src)
    target = pool.resource(dst)
    if source.id == target.id:
        return math.inf
    return min(source.uplink, target.downlink)


def unit_comm_cost(pool: ResourcePool, src: int, dst: int) -> float:
    """Transfer tariff [$/Mb] between two resources; zero when co-located."""

    source = pool.resource(src)
    target = pool.resource(dst)
    if source.id == target.id:
        return 0.0
    return max(source.comm_cost_rate, target.comm_cost_rate)


PathType = Union[str, "PathLike[str]"]


def read_pool_table(path: PathType) -> ResourcePool:
    """Read an explicit resource table (CSV with :data:`POOL_TABLE_COLUMNS`)."""

    with Path(path).open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        missing = [col for col in POOL_TABLE_COLUMNS if col not in (reader.fieldnames or ())]
        if missing:
            raise PoolError(f"pool table {path} lacks columns: {', '.join(missing)}")
        rows = [{key: row[key] for key in POOL_TABLE_COLUMNS} for row in reader]
    return ResourcePool.from_resources(rows)


def parse_counts(value: str | Sequence[int]) -> tuple[int, int, int]:
    """Parse ``"e,f,c"`` (or a 3-sequence) into resource counts."""

    items = value.split(",") if isinstance(value, str) else list(value)
    if len(items) != 3:
        raise PoolError(f"pool counts need three values (end,fog,cloud), got {value!r}")
    try:
        counts = tuple(int(str(item).strip()) for item in items)
    except ValueError as exc:
        raise PoolError(f"pool counts must be integers, got {value!r}") from exc
    return counts  # type: ignore[return-value]
