"""Dense-matrix helpers shared by the algebra modules."""

from functools import reduce
from typing import Iterable

import numpy as np

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def max_abs(a: np.ndarray) -> float:
    """Entrywise max-norm; 0.0 for empty input."""
    return float(np.max(np.abs(a))) if a.size else 0.0


def kron_all(factors: Iterable[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, factors)


def unitarity_residual(u: np.ndarray) -> float:
    return max_abs(dagger(u) @ u - np.eye(u.shape[0]))


def hermiticity_residual(h: np.ndarray) -> float:
    return max_abs(h - dagger(h))


def equal_up_to_phase(a: np.ndarray, b: np.ndarray) -> float:
    """Max-norm distance between a and b after removing the best global phase."""
    overlap = np.trace(dagger(b) @ a)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return max_abs(a - phase * b)
