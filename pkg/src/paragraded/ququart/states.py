"""
Ququart basis and states.

Basis order k = 2a + b with Q_a = l mod 2 (OAM parity, high bit) and
Q_b = (1 - sigma)/2 (helicity):

    k  (a,b)  mode
    0  (0,0)  l=0,  A
    1  (0,1)  l=0,  B
    2  (1,0)  l=+1, sigma=+1
    3  (1,1)  l=-1, sigma=-1
"""

from typing import List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.exceptions import ValidationError
from ..grading import Grade

BASIS_LABELS: Tuple[str, ...] = ("0", "1", "+", "-")
BASIS_MODES: Tuple[Tuple[int, str], ...] = ((0, "A"), (0, "B"), (1, "+1"), (-1, "-1"))

NORM_TOL = 1e-12


def index_of(a: int, b: int) -> int:
    return 2 * a + b


def bits_of(k: int) -> Tuple[int, int]:
    return k >> 1, k & 1


def grade_of_index(k: int) -> Grade:
    a, b = bits_of(k)
    return Grade(a=a, b=b)


class QuquartState(BaseModel):
    """Normalized amplitudes over the k = 2a + b basis."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    amplitudes: np.ndarray = Field(description="Four complex amplitudes")

    @model_validator(mode="after")
    def _check_norm(self) -> "QuquartState":
        if self.amplitudes.shape != (4,):
            raise ValueError(f"a ququart state has 4 amplitudes, got shape {self.amplitudes.shape}")
        norm = float(np.linalg.norm(self.amplitudes))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm is {norm}, expected 1")
        self.amplitudes.setflags(write=False)
        return self

    @classmethod
    def basis(cls, k: int) -> "QuquartState":
        if not 0 <= k < 4:
            raise ValidationError(f"Basis index must be 0..3, got {k}")
        amps = np.zeros(4, dtype=complex)
        amps[k] = 1.0
        return cls(amplitudes=amps)

    @classmethod
    def from_amplitudes(cls, values: Sequence[complex], normalize: bool = False) -> "QuquartState":
        amps = np.asarray(values, dtype=complex).copy()
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise ValidationError("Cannot normalize the zero vector")
            amps = amps / norm
        try:
            return cls(amplitudes=amps)
        except ValueError as e:
            raise ValidationError(str(e)) from e

    def evolve(self, unitary: np.ndarray) -> "QuquartState":
        amps = unitary @ self.amplitudes
        # Renormalize away rounding drift from long circuits.
        return QuquartState(amplitudes=amps / np.linalg.norm(amps))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def sector_weights(self) -> List[Tuple[Grade, float]]:
        probs = self.probabilities()
        return [(grade_of_index(k), float(probs[k])) for k in range(4)]

    def format(self, tol: float = 1e-12) -> str:
        terms = []
        for k, amp in enumerate(self.amplitudes):
            if abs(amp) > tol:
                terms.append(f"({amp.real:+.6f}{amp.imag:+.6f}j)|{BASIS_LABELS[k]}>")
        return " ".join(terms)
