"""
Pydantic models for isotopy parameters and verification reports
"""
from typing import List

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..config import TOLERANCES


class IsotopyParams(BaseModel):
    """Time and tolerances of one evaluation of the deformation."""

    model_config = ConfigDict(frozen=True)

    t: float = Field(1.0, ge=0.0, le=1.0, description="deformation time")
    root_tol: float = Field(TOLERANCES.root_tol, gt=0, description="Gamma1 bisection tolerance (ray parameter)")
    seam_tol: float = Field(TOLERANCES.seam_tol, gt=0, description="allowed branch disagreement")


class CheckResult(BaseModel):
    """One named verification check."""

    model_config = ConfigDict(
        populate_by_name=True,
        json_schema_extra={
            "examples": [
                {
                    "name": "identity_at_t0",
                    "description": "the deformation starts at the identity",
                    "max_residual": 4.4e-16,
                    "tolerance": 1e-12,
                    "pass": True,
                    "sample_count": 10432,
                }
            ]
        },
    )

    name: str = Field(..., description="stable identifier of the check")
    description: str = Field("", description="the property being tested")
    max_residual: float = Field(..., description="worst value observed (NaN when no sample applied)")
    tolerance: float
    passed: bool = Field(..., alias="pass")
    sample_count: int = Field(..., ge=0)


class VerificationReport(BaseModel):
    """Named checks plus their conjunction."""

    checks: List[CheckResult] = Field(default_factory=list)
    overall: bool = False

    @model_validator(mode="after")
    def _overall_is_conjunction(self) -> "VerificationReport":
        expected = bool(self.checks) and all(check.passed for check in self.checks)
        if self.overall != expected:
            raise ValueError("overall must equal the conjunction of the check flags")
        return self

    @classmethod
    def from_checks(cls, checks: List[CheckResult]) -> "VerificationReport":
        return cls(checks=checks, overall=bool(checks) and all(check.passed for check in checks))

    def failed(self) -> List[str]:
        return [check.name for check in self.checks if not check.passed]
