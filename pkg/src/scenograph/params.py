"""Parameter values and their abstraction-level semantics.

A parameter is Unset (open, functional modeling), a Scalar (concrete),
a Range (uniform grid: min, max, step), or a DiscreteSet. Ranges and
sets are what the concretizer enumerates; Unset is what defaults fill.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

from .errors import InvalidArgument, SchemaError

ScalarValue = Union[int, float, str]


class Unset:
    """Singleton marker for a parameter left open."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Unset"


UNSET = Unset()


@dataclass(frozen=True)
class Scalar:
    value: ScalarValue
    unit: str = ""

    def __post_init__(self):
        if isinstance(self.value, bool) or not isinstance(self.value, (int, float, str)):
            raise InvalidArgument(f"scalar value must be a number or text, got {self.value!r}")


@dataclass(frozen=True)
class Range:
    """Inclusive numeric range walked in `step` increments.

    The maximum is reachable only when (max - min) is an integer
    multiple of step; cardinality is floor((max - min) / step) + 1.
    """

    min: float
    max: float
    step: float
    unit: str = ""

    def __post_init__(self):
        if self.min > self.max:
            raise InvalidArgument(f"range requires min <= max, got [{self.min}, {self.max}]")
        if self.step <= 0:
            raise InvalidArgument(f"range step must be positive, got {self.step}")

    def cardinality(self) -> int:
        # small epsilon so float grids like (3, 8, 1) count exactly
        return int(math.floor((self.max - self.min) / self.step + 1e-9)) + 1

    def point(self, index: int) -> float:
        return self.min + index * self.step


@dataclass(frozen=True)
class DiscreteSet:
    values: tuple = field(default_factory=tuple)
    unit: str = ""

    def __init__(self, values, unit: str = ""):
        object.__setattr__(self, "values", tuple(values))
        object.__setattr__(self, "unit", unit)
        if not self.values:
            raise InvalidArgument("discrete set must not be empty")

    def cardinality(self) -> int:
        return len(self.values)


ParamValue = Union[Unset, Scalar, Range, DiscreteSet]


def is_concrete(value: ParamValue) -> bool:
    return isinstance(value, Scalar)


def is_bounded(value: ParamValue) -> bool:
    """True for anything the concretizer can resolve (not Unset)."""
    return not isinstance(value, Unset)


def param_to_json(value: ParamValue):
    if isinstance(value, Unset):
        return None
    if isinstance(value, Scalar):
        return {"scalar": value.value, "unit": value.unit}
    if isinstance(value, Range):
        return {"range": [value.min, value.max, value.step], "unit": value.unit}
    if isinstance(value, DiscreteSet):
        return {"set": list(value.values), "unit": value.unit}
    raise InvalidArgument(f"not a parameter value: {value!r}")


def param_from_json(data, path: str = "param") -> ParamValue:
    if data is None:
        return UNSET
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: expected null or object, got {type(data).__name__}")
    unit = data.get("unit", "")
    if not isinstance(unit, str):
        raise SchemaError(f"{path}.unit: expected text")
    try:
        if "scalar" in data:
            return Scalar(data["scalar"], unit)
        if "range" in data:
            bounds = data["range"]
            if not isinstance(bounds, list) or len(bounds) != 3:
                raise SchemaError(f"{path}.range: expected [min, max, step]")
            return Range(float(bounds[0]), float(bounds[1]), float(bounds[2]), unit)
        if "set" in data:
            values = data["set"]
            if not isinstance(values, list):
                raise SchemaError(f"{path}.set: expected a list")
            return DiscreteSet(values, unit)
    except InvalidArgument as exc:
        raise SchemaError(f"{path}: {exc}") from exc
    raise SchemaError(f"{path}: expected one of scalar/range/set keys")
