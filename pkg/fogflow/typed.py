"""Pint unit registry and quantity helpers for FogFlow.

Task lengths, rates, data sizes and bandwidths are stored internally as plain
floats in canonical units: million instructions (MI), MI per second (MIPS),
megabits (Mb), megabits per second (Mbps), seconds, watts and dollars.
Constructors that take physical inputs also accept Pint quantities, which are
converted to those canonical units on the way in.
"""

from __future__ import annotations

import math
from typing import Any

from pint import UnitRegistry

ureg: UnitRegistry = UnitRegistry()
ureg.define("million_instructions = [computation] = MI")
ureg.define("million_instructions_per_second = million_instructions / second = MIPS")
ureg.define("megabit_per_second = megabit / second = Mbps")
Q_ = ureg.Quantity

LENGTH_UNIT = "million_instructions"
RATE_UNIT = "million_instructions_per_second"
DATA_UNIT = "megabit"
BANDWIDTH_UNIT = "megabit_per_second"
POWER_UNIT = "watt"

__all__ = [
    "ureg",
    "Q_",
    "is_quantity",
    "to_magnitude",
    "to_finite_float",
]


def is_quantity(value: Any) -> bool:
    """Return True when *value* behaves like a Pint quantity."""

    return hasattr(value, "to") and hasattr(value, "magnitude")


def to_magnitude(value: Any, unit: str | None = None) -> float:
    """Return *value* as a float magnitude, optionally converted to *unit*."""

    if is_quantity(value):
        return float(value.to(unit).magnitude if unit else value.magnitude)
    return float(value)


def to_finite_float(value: Any, unit: str | None, name: str) -> float:
    """Return a finite float in *unit*, raising ``ValueError`` otherwise.

    Quantities are converted to *unit*; with ``unit=None`` their magnitude is
    taken as is (used for dollar tariffs, which Pint has no unit for).
    """

    magnitude = to_magnitude(value, unit)
    if not math.isfinite(magnitude):
        raise ValueError(f"{name} must be finite, got {magnitude!r}")
    return magnitude
