# src/models/reports.py

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

# Slack allowed when asserting one quadrature is at least another
ORDERING_RTOL = 1e-9


class TheoremCase(str, Enum):
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    T4 = "T4"


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    EQUALITY = "equality"


class MomentReport(BaseModel):
    """Moments, spreads and covariances of a signal in the Fourier picture."""

    x0: List[float]
    w0: List[float]
    spread_x: float = Field(..., ge=0)
    spread_w: float = Field(..., ge=0)
    cov: float
    abs_cov: float = Field(..., ge=0)
    product: float = Field(..., ge=0)

    @model_validator(mode="after")
    def validate_abs_cov_dominates(self):
        """Absolute covariance is never below the magnitude of the covariance"""
        if self.abs_cov < abs(self.cov) - ORDERING_RTOL * max(1.0, abs(self.cov)):
            raise ValueError(f"abs_cov {self.abs_cov} is below |cov| {abs(self.cov)}")
        return self

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "x0": [0.0],
                "w0": [0.0],
                "spread_x": 0.0795775,
                "spread_w": 0.0795775,
                "cov": 0.0,
                "abs_cov": 0.0,
                "product": 0.00633257,
            }
        }
    )


class DistMomentReport(BaseModel):
    """Second moments of a distribution under the weight |D|^2 / ||D||^2."""

    x0_C: List[float]
    w0_C: List[float]
    spread_x_C: float = Field(..., ge=0)
    spread_w_C: float = Field(..., ge=0)
    product_C: float = Field(..., ge=0)
    weight_sum: float = Field(1.0, description="Total of the normalized weights")

    @model_validator(mode="after")
    def validate_weights_normalized(self):
        if abs(self.weight_sum - 1.0) > 1e-6:
            raise ValueError(f"Distribution weights must sum to 1, got {self.weight_sum}")
        return self


class ConversionReport(BaseModel):
    """Distribution-domain spreads against their Fourier-domain expressions."""

    spread_x_C: float
    spread_w_C: float
    product_C: float
    target_spread_x: float
    target_spread_w: float
    target_product: float
    residual_x: float = Field(..., ge=0)
    residual_w: float = Field(..., ge=0)
    residual_product: float = Field(..., ge=0)

    @property
    def residuals(self) -> tuple:
        return self.residual_x, self.residual_w, self.residual_product


class BoundReport(BaseModel):
    """Measured distribution-domain uncertainty product against its lower bounds."""

    case: TheoremCase
    b_real: float
    b_cov_f: float
    b_abscov_f: float
    b_cov_fphi: float
    b_abscov_fphi: float
    theorem_bound_cov: float
    theorem_bound_abscov: float
    measured_product_C: float
    slack: float
    verdict: Verdict
    tolerance: float = Field(..., gt=0)

    @model_validator(mode="after")
    def validate_bound_ordering(self):
        """The absolute-covariance bound is the tighter of the two"""
        if self.theorem_bound_abscov < self.theorem_bound_cov * (1 - ORDERING_RTOL):
            raise ValueError(
                f"theorem_bound_abscov {self.theorem_bound_abscov} is below theorem_bound_cov {self.theorem_bound_cov}"
            )
        return self

    @model_validator(mode="after")
    def validate_verdict(self):
        """pass or equality exactly when measured >= bound - tolerance"""
        holds = self.slack >= -self.tolerance
        if holds != (self.verdict != Verdict.FAIL):
            raise ValueError(f"Verdict {self.verdict.value} contradicts slack {self.slack}")
        return self

    model_config = ConfigDict(use_enum_values=False)


class CheckResult(BaseModel):
    """One numeric check and the tolerance it was judged against."""

    name: str
    identity: str
    value: Optional[float] = None
    target: Optional[float] = None
    residual: Optional[float] = None
    tolerance: float = Field(..., ge=0)
    passed: bool
    details: Dict[str, Any] = Field(default_factory=dict)


class SuiteReport(BaseModel):
    """Machine-readable outcome of a verification run."""

    suite: str
    seed: int
    grid: str
    tolerance: float = Field(..., gt=0)
    passed: bool
    checks: List[CheckResult] = Field(default_factory=list)
    bound_reports: List[BoundReport] = Field(default_factory=list)

    @property
    def failed_checks(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]
