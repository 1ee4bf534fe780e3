# src/models/chirp.py

from typing import Dict, List

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..exceptions import PartitionError


class Partition(BaseModel):
    """Axis sets (1-based) choosing the chirp branch per axis."""

    j1: List[int] = Field(default_factory=list, description="Axes with phase gradient +(x - x0)/eps")
    j2: List[int] = Field(default_factory=list, description="Axes with phase gradient -(x - x0)/eps")
    j3: List[int] = Field(default_factory=list, description="Axes with phase gradient +|x - x0|/eps")
    j4: List[int] = Field(default_factory=list, description="Axes with phase gradient -|x - x0|/eps")

    @field_validator("j1", "j2", "j3", "j4")
    @classmethod
    def validate_axis_numbers(cls, v):
        for axis in v:
            if axis < 1:
                raise ValueError(f"Partition axes are numbered from 1, got {axis}")
        return sorted(v)

    @property
    def is_empty(self) -> bool:
        return not (self.j1 or self.j2 or self.j3 or self.j4)

    def branch_of(self, axis: int) -> str:
        """Name of the set holding a 1-based axis."""
        for name in ("j1", "j2", "j3", "j4"):
            if axis in getattr(self, name):
                return name
        raise PartitionError(f"Axis {axis} belongs to no partition set", "partition")

    def check_cover(self, dim: int) -> None:
        """Raise PartitionError unless the four sets are disjoint and cover 1..dim."""
        seen: Dict[int, str] = {}
        for name in ("j1", "j2", "j3", "j4"):
            for axis in getattr(self, name):
                if axis in seen:
                    raise PartitionError(f"Axis {axis} is in both {seen[axis]} and {name}", "partition")
                seen[axis] = name
        expected = set(range(1, dim + 1))
        if set(seen) != expected:
            missing = sorted(expected - set(seen))
            extra = sorted(set(seen) - expected)
            raise PartitionError(
                f"Partition must cover axes 1..{dim} exactly (missing {missing}, out of range {extra})",
                "partition",
            )


class ChirpSpec(BaseModel):
    """Parameters of an optimal Gaussian-enveloped chirp."""

    zeta: float = Field(..., gt=0, description="Envelope parameter; |f|^2 has variance zeta / 2 per axis")
    eps: float = Field(..., gt=0, description="Reciprocal chirp rate")
    x0: List[float] = Field(default_factory=lambda: [0.0], min_length=1)
    w0: List[float] = Field(default_factory=lambda: [0.0], min_length=1)
    amp_offset: float = Field(0.0, description="Additive constant in the envelope exponent")
    phase_offsets: Dict[str, float] = Field(
        default_factory=dict, description="Per-orthant phase offsets keyed by sign strings such as '+-'"
    )
    partition: Partition = Field(default_factory=Partition)

    @field_validator("phase_offsets")
    @classmethod
    def validate_orthant_keys(cls, v):
        for key in v:
            if not key or any(ch not in "+-" for ch in key):
                raise ValueError(f"Orthant keys are strings of '+' and '-', got {key!r}")
        return v

    @model_validator(mode="after")
    def validate_dimension(self):
        """Validate vector lengths agree and default the partition to all-j1"""
        if len(self.x0) != len(self.w0):
            raise ValueError(f"x0 and w0 must have the same length, got {len(self.x0)} and {len(self.w0)}")
        for key in self.phase_offsets:
            if len(key) != self.dim:
                raise ValueError(f"Orthant key {key!r} must have one sign per axis ({self.dim})")
        if self.partition.is_empty:
            self.partition = Partition(j1=list(range(1, self.dim + 1)))
        return self

    @property
    def dim(self) -> int:
        return len(self.x0)

    model_config = ConfigDict(
        validate_assignment=False,
        json_schema_extra={
            "example": {
                "zeta": 0.15915494309189535,
                "eps": 1.0,
                "x0": [0.0],
                "w0": [0.0],
                "amp_offset": 0.0,
                "phase_offsets": {},
                "partition": {"j1": [1], "j2": [], "j3": [], "j4": []},
            }
        },
    )
