"""
Paragraded
==========

Numerical library and CLI for Z2 x Z2 graded paraparticle algebras: Green and deformed
Fock representations, braiding and Yang-Baxter checks, graded Clifford towers, a
photonic ququart gate model with synthesis, free-fermion XY-chain entanglement, and
fractional-noise diagnostics.
"""

from .core.exceptions import (
    ConfigurationError,
    GradeConservationError,
    IdentityViolationError,
    NumericalError,
    ParagradedError,
    ParseError,
    ValidationError,
)
from .grading import Grade
from .utils.config import Config

__version__ = "0.3.0"

__all__ = [
    "Config",
    "ConfigurationError",
    "Grade",
    "GradeConservationError",
    "IdentityViolationError",
    "NumericalError",
    "ParagradedError",
    "ParseError",
    "ValidationError",
    "__version__",
]
