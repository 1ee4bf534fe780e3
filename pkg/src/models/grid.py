# src/models/grid.py

from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class DomainTag(str, Enum):
    """Which variable a signal is sampled in."""

    TIME = "time"
    FREQUENCY = "frequency"


class Grid(BaseModel):
    """Uniform sampling lattice; node k sits at origin + k * spacing per axis."""

    origin: Tuple[float, ...] = Field(..., min_length=1, description="Position of node 0 per axis")
    spacing: Tuple[float, ...] = Field(..., min_length=1, description="Positive node spacing per axis")
    count: Tuple[int, ...] = Field(..., min_length=1, description="Number of nodes per axis")

    @field_validator("spacing")
    @classmethod
    def validate_spacing(cls, v):
        """Validate every spacing component is strictly positive and finite"""
        for s in v:
            if not np.isfinite(s) or s <= 0:
                raise ValueError(f"Grid spacing must be strictly positive, got {s}")
        return v

    @field_validator("count")
    @classmethod
    def validate_count(cls, v):
        """Validate every axis carries at least two nodes"""
        for c in v:
            if c < 2:
                raise ValueError(f"Grid count must be at least 2 per axis, got {c}")
        return v

    @model_validator(mode="after")
    def validate_dimensions(self):
        """Validate origin, spacing and count agree on the dimension"""
        if not len(self.origin) == len(self.spacing) == len(self.count):
            raise ValueError(
                f"Grid origin, spacing and count must share one dimension, "
                f"got {len(self.origin)}, {len(self.spacing)}, {len(self.count)}"
            )
        return self

    @property
    def dim(self) -> int:
        return len(self.count)

    @property
    def total(self) -> int:
        return int(np.prod(self.count))

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(self.count)

    @property
    def weight(self) -> float:
        """Riemann-sum quadrature weight (product of spacings)."""
        return float(np.prod(self.spacing))

    def axis(self, n: int) -> np.ndarray:
        """Node coordinates along axis n."""
        return self.origin[n] + self.spacing[n] * np.arange(self.count[n])

    def axes(self) -> List[np.ndarray]:
        return [self.axis(n) for n in range(self.dim)]

    def mesh(self) -> List[np.ndarray]:
        """Coordinate arrays of shape ``self.shape``, one per axis."""
        return np.meshgrid(*self.axes(), indexing="ij")

    def nodes(self) -> np.ndarray:
        """All nodes as a (total, dim) array in row-major order."""
        return np.stack([m.ravel() for m in self.mesh()], axis=-1)

    def node(self, flat_index: int) -> Tuple[float, ...]:
        multi = np.unravel_index(flat_index, self.shape)
        return tuple(float(self.origin[n] + self.spacing[n] * multi[n]) for n in range(self.dim))

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={"example": {"origin": [-8.0], "spacing": [0.0625], "count": [256]}},
    )


class Signal(BaseModel):
    """Complex samples on a grid; the discrete stand-in for a square-integrable function."""

    grid: Grid
    samples: np.ndarray = Field(..., description="Complex samples, flat row-major")
    domain_tag: DomainTag = DomainTag.TIME
    truncated: bool = Field(False, description="Boundary-decay warning flag")
    time_origin: Optional[Tuple[float, ...]] = Field(
        None, description="Origin of the time grid a spectrum was computed from"
    )

    @field_validator("samples", mode="before")
    @classmethod
    def validate_samples(cls, v):
        """Coerce samples to a flat read-only complex array"""
        arr = np.array(v, dtype=np.complex128).ravel()
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def validate_against_grid(self):
        """Validate sample count matches the grid and every sample is finite"""
        if self.samples.size != self.grid.total:
            raise ValueError(f"Signal has {self.samples.size} samples but its grid has {self.grid.total} nodes")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("Signal samples must be finite")
        return self

    @property
    def shaped(self) -> np.ndarray:
        """Samples reshaped to the grid's axis layout."""
        return self.samples.reshape(self.grid.shape)

    def with_samples(self, samples: np.ndarray, truncated: Optional[bool] = None) -> "Signal":
        """New signal on the same grid and domain."""
        return Signal(
            grid=self.grid,
            samples=samples,
            domain_tag=self.domain_tag,
            truncated=self.truncated if truncated is None else truncated,
            time_origin=self.time_origin,
        )

    def is_real(self, rtol: float = 1e-9) -> bool:
        peak = float(np.max(np.abs(self.samples))) if self.samples.size else 0.0
        if peak == 0.0:
            return True
        return float(np.max(np.abs(self.samples.imag))) <= rtol * peak

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True, use_enum_values=False)
