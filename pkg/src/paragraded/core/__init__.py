"""
Paragraded Core Module
======================

Exception hierarchy and input validation.
"""

from .exceptions import (
    ConfigurationError,
    GradeConservationError,
    IdentityViolationError,
    NumericalError,
    ParagradedError,
    ParseError,
    ValidationError,
)
from .validators import build_model, validate_hermitian, validate_square, validate_unitary

__all__ = [
    "ConfigurationError",
    "GradeConservationError",
    "IdentityViolationError",
    "NumericalError",
    "ParagradedError",
    "ParseError",
    "ValidationError",
    "build_model",
    "validate_hermitian",
    "validate_square",
    "validate_unitary",
]
