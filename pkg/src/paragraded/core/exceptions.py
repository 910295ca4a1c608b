"""
Paragraded Exception Classes
============================

Structured exceptions raised by the library. Each carries a stable error code and
the CLI exit code it maps to, so the command layer never has to guess.
"""

from typing import Any, Dict, Optional, Sequence, Tuple

from pydantic import BaseModel

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IDENTITY = 2
EXIT_NUMERICAL = 3


class ParagradedError(Exception):
    """Base exception class for paragraded errors."""

    def __init__(
        self,
        message: str,
        error_code: str = "PARAGRADED_ERROR",
        exit_code: int = EXIT_USAGE,
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message)
        self.message = message
        self.error_code = error_code
        self.exit_code = exit_code
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "code": self.error_code,
            "message": self.message,
            "details": self.details,
        }


class ValidationError(ParagradedError):
    """Exception raised for invalid inputs (labels, shapes, ranges, unitarity)."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(
            message=message,
            error_code="VALIDATION_ERROR",
            exit_code=EXIT_USAGE,
            details=details,
        )


class GradeConservationError(ParagradedError):
    """Exception raised when strict mode meets an undeclared grade-changing gate."""

    def __init__(
        self,
        message: str,
        gate_index: int,
        gate_name: str,
        span: Optional[Tuple[int, int]] = None,
    ):
        super().__init__(
            message=message,
            error_code="GRADE_CONSERVATION_ERROR",
            exit_code=EXIT_IDENTITY,
            details={"gate_index": gate_index, "gate": gate_name, "span": span},
        )
        self.gate_index = gate_index
        self.gate_name = gate_name
        self.span = span


class IdentityViolationError(ParagradedError):
    """Exception raised when an audited identity exceeds its tolerance."""

    def __init__(self, message: str, residual: float, tolerance: float):
        super().__init__(
            message=message,
            error_code="IDENTITY_VIOLATION",
            exit_code=EXIT_IDENTITY,
            details={"residual": residual, "tolerance": tolerance},
        )
        self.residual = residual
        self.tolerance = tolerance


class NumericalError(ParagradedError):
    """Exception raised for numerical failures (factorizations, degenerate fits)."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(
            message=message,
            error_code="NUMERICAL_ERROR",
            exit_code=EXIT_NUMERICAL,
            details=details,
        )


class ParseError(ParagradedError):
    """Exception raised when DSL source produces diagnostics."""

    def __init__(self, message: str, diagnostics: Sequence[BaseModel]):
        super().__init__(
            message=message,
            error_code="PARSE_ERROR",
            exit_code=EXIT_USAGE,
            details={"diagnostics": [d.model_dump(mode="json") for d in diagnostics]},
        )
        self.diagnostics = list(diagnostics)


class ConfigurationError(ParagradedError):
    """Exception raised for configuration errors."""

    def __init__(self, message: str):
        super().__init__(
            message=message,
            error_code="CONFIGURATION_ERROR",
            exit_code=EXIT_USAGE,
        )
