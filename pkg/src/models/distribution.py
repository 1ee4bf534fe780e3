# src/models/distribution.py

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .grid import Grid


class Distribution(BaseModel):
    """Discrete Cf(x, w): rows are time nodes, columns frequency nodes."""

    time_grid: Grid
    freq_grid: Grid
    values: np.ndarray = Field(..., description="Complex values shaped (time nodes, frequency nodes)")
    kernel_tag: str = Field(..., min_length=1)

    @field_validator("values", mode="before")
    @classmethod
    def validate_values(cls, v):
        arr = np.array(v, dtype=np.complex128)
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def validate_lattice(self):
        """Validate the value layout and the half-sample frequency lattice"""
        expected = (self.time_grid.total, self.freq_grid.total)
        if self.values.shape != expected:
            raise ValueError(f"Distribution values must have shape {expected}, got {self.values.shape}")
        for n in range(self.time_grid.dim):
            step = 1.0 / (2 * self.time_grid.count[n] * self.time_grid.spacing[n])
            if not np.isclose(self.freq_grid.spacing[n], step, rtol=1e-9, atol=0.0):
                raise ValueError(
                    f"Frequency spacing on axis {n} must be 1/(2 M dt) = {step}, got {self.freq_grid.spacing[n]}"
                )
        return self

    @property
    def cell(self) -> float:
        """Quadrature weight of one (time, frequency) cell."""
        return self.time_grid.weight * self.freq_grid.weight

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.cell))

    def inner(self, other: "Distribution") -> complex:
        return complex(np.sum(self.values * np.conj(other.values)) * self.cell)

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)
