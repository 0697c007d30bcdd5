"""Constraint taxonomy shared by the whole pipeline.

Four process dimensions, two granularities, and the 9-slot count profile
(8 dimension/granularity slots plus a process-irrelevant bucket) that every
characterization produces. The (control-flow, within) slot holds the
activity-existence count.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from enum import Enum


class ProcessDimension(Enum):
    CONTROL_FLOW = "control-flow"
    TEMPORAL = "temporal"
    RESOURCE = "resource"
    DATA = "data"


class Granularity(Enum):
    WITHIN = "within_activities"
    BETWEEN = "between_activities"


class EnvironmentalObjective(Enum):
    """The six environmental objectives, in canonical order."""

    CLIMATE_MITIGATION = "mitigation"
    CLIMATE_ADAPTATION = "adaptation"
    WATER = "water"
    CIRCULAR_ECONOMY = "circular"
    POLLUTION = "pollution"
    BIODIVERSITY = "biodiversity"


# Flat category labels in the fixed report-column order.
CATEGORY_ORDER = (
    "cf_within",
    "cf_between",
    "temporal_within",
    "temporal_between",
    "resource_within",
    "resource_between",
    "data_within",
    "data_between",
    "irrelevant",
)

_SLOT_TO_NESTED = {
    "cf_within": (ProcessDimension.CONTROL_FLOW, Granularity.WITHIN),
    "cf_between": (ProcessDimension.CONTROL_FLOW, Granularity.BETWEEN),
    "temporal_within": (ProcessDimension.TEMPORAL, Granularity.WITHIN),
    "temporal_between": (ProcessDimension.TEMPORAL, Granularity.BETWEEN),
    "resource_within": (ProcessDimension.RESOURCE, Granularity.WITHIN),
    "resource_between": (ProcessDimension.RESOURCE, Granularity.BETWEEN),
    "data_within": (ProcessDimension.DATA, Granularity.WITHIN),
    "data_between": (ProcessDimension.DATA, Granularity.BETWEEN),
}


class ProfileError(ValueError):
    """Raised for invalid profile contents (negative or non-integer counts)."""


@dataclass(frozen=True)
class ConstraintProfile:
    """Non-negative counts for the 8 dimension/granularity slots + irrelevant."""

    cf_within: int = 0
    cf_between: int = 0
    temporal_within: int = 0
    temporal_between: int = 0
    resource_within: int = 0
    resource_between: int = 0
    data_within: int = 0
    data_between: int = 0
    irrelevant: int = 0

    def __post_init__(self) -> None:
        for f in fields(self):
            v = getattr(self, f.name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise ProfileError(f"count {f.name} must be an integer, got {v!r}")
            if v < 0:
                raise ProfileError(f"count {f.name} must be >= 0, got {v}")

    @classmethod
    def zero(cls) -> "ConstraintProfile":
        return cls()

    def count(self, dimension: ProcessDimension, granularity: Granularity) -> int:
        for slot, (dim, gran) in _SLOT_TO_NESTED.items():
            if dim is dimension and gran is granularity:
                return getattr(self, slot)
        raise KeyError((dimension, granularity))

    def total(self) -> int:
        return sum(getattr(self, slot) for slot in CATEGORY_ORDER)

    def relevant(self) -> int:
        return self.total() - self.irrelevant

    def add(self, other: "ConstraintProfile") -> "ConstraintProfile":
        return ConstraintProfile(
            **{slot: getattr(self, slot) + getattr(other, slot) for slot in CATEGORY_ORDER}
        )

    def __add__(self, other: "ConstraintProfile") -> "ConstraintProfile":
        return self.add(other)

    def as_flat_dict(self) -> dict[str, int]:
        return {slot: getattr(self, slot) for slot in CATEGORY_ORDER}

    def to_nested(self) -> dict:
        """Nested mapping in the external JSON shape (dimension -> granularity)."""
        out: dict = {}
        for dim in ProcessDimension:
            out[dim.value] = {
                Granularity.WITHIN.value: self.count(dim, Granularity.WITHIN),
                Granularity.BETWEEN.value: self.count(dim, Granularity.BETWEEN),
            }
        out["irrelevant"] = self.irrelevant
        return out

    @classmethod
    def from_nested(cls, nested: dict) -> "ConstraintProfile":
        kwargs: dict[str, int] = {}
        for slot, (dim, gran) in _SLOT_TO_NESTED.items():
            kwargs[slot] = int(nested.get(dim.value, {}).get(gran.value, 0))
        kwargs["irrelevant"] = int(nested.get("irrelevant", 0))
        return cls(**kwargs)

    @classmethod
    def from_flat_dict(cls, flat: dict) -> "ConstraintProfile":
        return cls(**{slot: int(flat.get(slot, 0)) for slot in CATEGORY_ORDER})
