"""
Paragraded Input Validators
===========================

Validation helpers shared by the domain modules. Pydantic failures are converted to
the library's ValidationError so callers only ever catch one family of exceptions.
"""

from typing import Any, Sequence, Type, TypeVar

import numpy as np
from pydantic import BaseModel
from pydantic import ValidationError as PydanticValidationError

from ..utils.linalg import hermiticity_residual, unitarity_residual
from .exceptions import ValidationError

M = TypeVar("M", bound=BaseModel)


def build_model(model_cls: Type[M], **data: Any) -> M:
    """
    Construct a pydantic model, translating validation failures.

    Args:
        model_cls: Model class to build
        **data: Field values

    Returns:
        Validated model instance

    Raises:
        ValidationError: If any field fails validation
    """
    try:
        return model_cls(**data)
    except PydanticValidationError as e:
        error_details = []
        for error in e.errors():
            field_path = " -> ".join(str(loc) for loc in error["loc"])
            error_details.append(f"{field_path}: {error['msg']}")

        raise ValidationError(
            f"{model_cls.__name__} validation failed: {'; '.join(error_details)}",
            details={"validation_errors": e.errors(include_url=False)},
        ) from e


def validate_square(matrix: Any, name: str = "matrix", size: int | None = None) -> np.ndarray:
    """Coerce to a complex 2-D square array, optionally of a fixed size."""
    arr = np.asarray(matrix, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"{name} must be a square matrix, got shape {arr.shape}")
    if size is not None and arr.shape[0] != size:
        raise ValidationError(f"{name} must be {size}x{size}, got {arr.shape[0]}x{arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


def validate_unitary(matrix: Any, tol: float = 1e-9, name: str = "U", size: int | None = None) -> np.ndarray:
    """
    Validate that a matrix is unitary.

    Raises:
        ValidationError: If ||U†U - 1|| exceeds tol
    """
    arr = validate_square(matrix, name=name, size=size)
    residual = unitarity_residual(arr)
    if residual > tol:
        raise ValidationError(
            f"{name} is not unitary (residual {residual:.3e} > {tol:.1e})",
            details={"residual": residual},
        )
    return arr


def validate_hermitian(matrix: Any, tol: float = 1e-12, name: str = "h") -> np.ndarray:
    """
    Validate that a matrix is Hermitian.

    Raises:
        ValidationError: With the max asymmetry when h != h†
    """
    arr = validate_square(matrix, name=name)
    asymmetry = hermiticity_residual(arr)
    if asymmetry > tol:
        raise ValidationError(
            f"{name} is not Hermitian (max asymmetry {asymmetry:.3e})",
            details={"max_asymmetry": asymmetry},
        )
    return arr


def validate_power_of_two(values: Sequence[Any], name: str = "grid") -> int:
    n = len(values)
    if n < 2 or n & (n - 1):
        raise ValidationError(f"{name} length must be a power of two, got {n}")
    return n
