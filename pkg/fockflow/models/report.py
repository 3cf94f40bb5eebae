"""
Verification report model
"""

import math
import sys
from typing import Any, Dict, Iterable

from pydantic import ConfigDict, Field, model_validator

from .common import FockFlowModel

# Stand-in for a non-finite error so reports stay valid JSON
UNEVALUABLE_ERROR = sys.float_info.max


class VerificationReport(FockFlowModel):
    """Outcome of a named identity or boundary check"""
    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    name: str
    max_error: float = Field(ge=0)
    tolerance: float = Field(gt=0)
    passed: bool = Field(alias="pass")
    sample_count: int = Field(ge=0)
    details: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _pass_matches_error(self) -> "VerificationReport":
        if self.passed != (self.max_error <= self.tolerance):
            raise ValueError("pass flag must equal max_error <= tolerance")
        return self

    @classmethod
    def from_errors(
        cls,
        name: str,
        errors: Iterable[float],
        tolerance: float,
        details: Dict[str, Any] = None,
    ) -> "VerificationReport":
        """
        Build a report from per-sample errors

        Non-finite errors count as failures and are reported as the largest float.
        A check that produced no samples fails and is flagged with "no_samples".

        Args:
            name: Check name
            errors: Per-sample errors
            tolerance: Pass threshold
            details: Extra JSON-serializable information

        Returns:
            Verification report
        """
        values = [float(e) for e in errors]
        details = dict(details or {})
        if not values:
            max_error = UNEVALUABLE_ERROR
            details["no_samples"] = True
        elif all(math.isfinite(v) for v in values):
            max_error = max(values)
        else:
            max_error = UNEVALUABLE_ERROR
        return cls(
            name=name,
            max_error=max_error,
            tolerance=tolerance,
            passed=max_error <= tolerance,
            sample_count=len(values),
            details=details,
        )

    def to_json_dict(self) -> Dict[str, Any]:
        """JSON-ready mapping using the published field names"""
        return self.model_dump(mode="json", by_alias=True)
