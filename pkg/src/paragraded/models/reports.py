"""
Paragraded Report Schemas
=========================

Pydantic schemas shared by the audits and the CLI. Every audit in the library returns
one of these so results can be printed as tables or dumped as JSON unchanged.
"""

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, computed_field

from ..core.exceptions import IdentityViolationError


class Severity(str, Enum):
    """Severity of an audit finding."""
    INFO = "info"
    MISMATCH = "mismatch"
    FAILURE = "failure"


class ResidualCheck(BaseModel):
    """A single identity evaluated numerically."""
    model_config = ConfigDict(frozen=True)

    name: str = Field(description="Identity being checked")
    residual: float = Field(ge=0.0, description="Max-norm residual")
    tolerance: float = Field(gt=0.0, description="Pass threshold")

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


class Finding(BaseModel):
    """A documented disagreement between a printed value and the computed one."""
    model_config = ConfigDict(frozen=True)

    item: str = Field(description="What was compared (cell, row, claim)")
    printed: Any = Field(default=None, description="Value as printed in the reference tables")
    computed: Any = Field(default=None, description="Value computed from the defining formula")
    severity: Severity = Field(default=Severity.MISMATCH)
    note: Optional[str] = Field(default=None)


class AuditReport(BaseModel):
    """Checks plus findings for one audit suite."""
    model_config = ConfigDict(frozen=True)

    suite: str = Field(description="Suite name")
    checks: List[ResidualCheck] = Field(default_factory=list)
    findings: List[Finding] = Field(default_factory=list)
    data: Dict[str, Any] = Field(default_factory=dict, description="Suite-specific payload")

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def worst_residual(self) -> float:
        return max((check.residual for check in self.checks), default=0.0)

    def require_passed(self) -> "AuditReport":
        """
        Raises:
            IdentityViolationError: Naming the first failing check
        """
        for check in self.checks:
            if not check.passed:
                raise IdentityViolationError(
                    f"{self.suite}: {check.name} residual {check.residual:.3e} exceeds {check.tolerance:.1e}",
                    residual=check.residual,
                    tolerance=check.tolerance,
                )
        return self


class AuditSummary(BaseModel):
    """Result of running several suites together."""
    model_config = ConfigDict(frozen=True)

    reports: List[AuditReport] = Field(default_factory=list)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return all(report.passed for report in self.reports)

    def table(self) -> str:
        lines = [f"{'suite':<28} {'checks':>6} {'worst residual':>15} {'findings':>8}  status"]
        for report in self.reports:
            status = "PASS" if report.passed else "FAIL"
            lines.append(
                f"{report.suite:<28} {len(report.checks):>6} "
                f"{report.worst_residual:>15.3e} {len(report.findings):>8}  {status}"
            )
        return "\n".join(lines)
