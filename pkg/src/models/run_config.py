# src/models/run_config.py

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from ..utils.config import LOG_LEVELS, parse_grid_string
from .reports import TheoremCase


class Subcommand(str, Enum):
    GENERATE = "generate"
    COMPUTE = "compute"
    VERIFY = "verify"
    REPORT = "report"


class RunConfig(BaseModel):
    """Validated command-line request for one subcommand."""

    subcommand: Subcommand
    grid: Optional[str] = Field(None, description="Grid as M:lo:hi; the configured default when omitted")
    kernel: str = Field("unit", min_length=1)
    signal: Optional[str] = Field(None, description="Signal CSV path")
    chirp: Optional[str] = Field(None, description="ChirpSpec JSON path")
    gaussian: bool = False
    hermite: Optional[int] = Field(None, ge=0)
    random: bool = False
    zeta: Optional[float] = Field(None, gt=0)
    eps: Optional[float] = Field(None, gt=0)
    x0: float = 0.0
    w0: float = 0.0
    partition: Optional[str] = Field(None, pattern="^j[1-4]$")
    tol: Optional[float] = Field(None, gt=0, description="Override of the identity tolerance")
    out: Optional[str] = None
    format: Optional[str] = Field(None, pattern="^(csv|bin)$")
    seed: int = Field(0, ge=0)
    suite: Optional[str] = Field(None, pattern="^(lemmas|theorems|flandrin|all)$")
    theorem: Optional[TheoremCase] = None
    threads: Optional[int] = Field(None, ge=1)
    log_level: Optional[str] = None
    reports: List[str] = Field(default_factory=list)

    @field_validator("grid")
    @classmethod
    def validate_grid(cls, v):
        if v is not None:
            parse_grid_string(v)
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v):
        if v is not None and v.lower() not in LOG_LEVELS:
            raise ValueError(f"log_level must be one of {', '.join(LOG_LEVELS)}")
        return v.lower() if v else v

    @model_validator(mode="after")
    def validate_subcommand_inputs(self):
        """Validate each subcommand received the inputs it needs"""
        sources = [self.signal is not None, self.chirp is not None, self.gaussian, self.hermite is not None, self.random]
        if sum(sources) > 1:
            raise ValueError("Choose at most one of --signal, --chirp, --gaussian, --hermite, --random")

        if self.subcommand == Subcommand.GENERATE:
            if self.signal is not None:
                raise ValueError("generate builds a signal; --signal is an input for compute and verify")
            if not self.out:
                raise ValueError("generate requires --out")
        elif self.subcommand == Subcommand.COMPUTE:
            if not self.out:
                raise ValueError("compute requires --out")
        elif self.subcommand == Subcommand.VERIFY:
            if self.suite is not None and self.theorem is not None:
                raise ValueError("verify takes either --suite or --theorem, not both")
        elif not self.reports:
            raise ValueError("report requires at least one report path")
        return self

    @property
    def verify_suite(self) -> str:
        return self.suite or "all"
