# src/models/kernel.py

from enum import Enum
from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

ArrayFn = Callable[[np.ndarray], np.ndarray]
JointFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


def as_nodes(t: np.ndarray) -> np.ndarray:
    """View coordinates as a (total, dim) node array."""
    t = np.asarray(t, dtype=float)
    return t[:, None] if t.ndim == 1 else t


class KernelVariant(str, Enum):
    UNIT = "unit"
    KIRKWOOD_RIHACZEK = "krd"
    PAGE = "page"
    TIME_MULTIPLIER = "timemul"
    TABULATED_2D = "table"


class Kernel(BaseModel):
    """
    A member of the kernel catalog.

    Time-multiplier kernels are described by their phase in cycles, so the
    multiplier is exp(2*pi*i*phase(t)); ``phase_gradient`` is its analytic
    gradient when known. Tabulated kernels carry a joint function phi(v, y).
    """

    variant: KernelVariant
    tag: str = Field(..., min_length=1, description="Kernel spec the kernel was built from")
    phase: Optional[ArrayFn] = Field(None, description="Phase of the time multiplier in cycles")
    phase_gradient: Optional[ArrayFn] = Field(None, description="Analytic gradient of the phase")
    sign: float = Field(1.0, description="Constant factor +1 or -1 applied to the multiplier")
    joint: Optional[JointFn] = Field(None, description="Tabulated phi(v, y)")

    @model_validator(mode="after")
    def validate_variant_payload(self):
        """Validate each variant carries the callables it needs"""
        if self.variant == KernelVariant.TIME_MULTIPLIER and self.phase is None:
            raise ValueError("Time-multiplier kernels require a phase function")
        if self.variant == KernelVariant.TABULATED_2D and self.joint is None:
            raise ValueError("Tabulated kernels require a joint function phi(v, y)")
        if self.sign not in (1.0, -1.0):
            raise ValueError(f"Kernel sign must be +1 or -1, got {self.sign}")
        return self

    @classmethod
    def unit(cls) -> "Kernel":
        return cls(variant=KernelVariant.UNIT, tag="unit")

    @classmethod
    def kirkwood_rihaczek(cls) -> "Kernel":
        return cls(variant=KernelVariant.KIRKWOOD_RIHACZEK, tag="krd")

    @classmethod
    def page(cls) -> "Kernel":
        return cls(variant=KernelVariant.PAGE, tag="page")

    @classmethod
    def time_multiplier(
        cls, phase: ArrayFn, tag: str, phase_gradient: Optional[ArrayFn] = None, sign: float = 1.0
    ) -> "Kernel":
        return cls(
            variant=KernelVariant.TIME_MULTIPLIER, tag=tag, phase=phase, phase_gradient=phase_gradient, sign=sign
        )

    @classmethod
    def tabulated(cls, joint: JointFn, tag: str) -> "Kernel":
        return cls(variant=KernelVariant.TABULATED_2D, tag=tag, joint=joint)

    @property
    def has_time_form(self) -> bool:
        return self.variant in (KernelVariant.UNIT, KernelVariant.TIME_MULTIPLIER)

    def multiplier(self, t: np.ndarray) -> np.ndarray:
        """phi_t at an array of nodes shaped (total, dim); the unit kernel is the constant 1."""
        t = as_nodes(t)
        if self.variant == KernelVariant.UNIT:
            return np.ones(t.shape[0], dtype=np.complex128)
        return self.sign * np.exp(2j * np.pi * np.asarray(self.phase(t), dtype=float))

    def gradient(self, t: np.ndarray) -> Optional[np.ndarray]:
        """Analytic phase gradient shaped (total, dim), or None when unknown."""
        t = as_nodes(t)
        if self.variant == KernelVariant.UNIT:
            return np.zeros_like(t)
        if self.phase_gradient is None:
            return None
        return np.asarray(self.phase_gradient(t), dtype=float).reshape(t.shape)

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


class KernelFlags(BaseModel):
    unit_modulus: bool
    time_multiplier: bool
    marginal: bool
    energy_conserving: bool

    @model_validator(mode="after")
    def validate_time_multiplier_implies_unit_modulus(self):
        """A time-multiplier kernel is unit modulus by definition"""
        if self.time_multiplier and not self.unit_modulus:
            raise ValueError("time_multiplier flag requires unit_modulus")
        return self

    model_config = ConfigDict(frozen=True)
