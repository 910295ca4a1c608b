"""
Ququart gate set.

Fixed gates of the deterministic set (X_b, H_b, Z_a, H_a, CNOT_ba and the q-plate that
realizes it), the composites built from them, angle-parametrized rotations used by the
synthesizer, and Jones-calculus waveplates acting on the helicity qubit Q_b.

Waveplates are defined in the linear (H, V) basis, conjugated into the circular (L, R)
basis with L <-> b = 0, and normalized so the largest entry of the first column is real
and positive.
"""

import itertools
import logging
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic import ValidationError as PydanticValidationError

from ..core.exceptions import ValidationError
from ..grading import G00, G01, G10, Grade, grade_add
from ..utils.linalg import HADAMARD, I2, PAULI_X, PAULI_Z, unitarity_residual
from .algebra import CNOT_BA
from .states import grade_of_index

logger = logging.getLogger(__name__)

UNITARY_TOL = 1e-12

# Columns are |L> and |R> in the linear basis.
_CIRCULAR = np.array([[1, 1], [1j, -1j]], dtype=complex) / np.sqrt(2.0)


class GateOp(BaseModel):
    """A named 4x4 unitary with its grade bookkeeping."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    matrix: np.ndarray
    grade_delta: Grade = Field(default=G00, description="Grade bits the gate flips")
    interface: bool = Field(default=False, description="Declared grade-changing interface")
    compensated: bool = Field(default=False, description="Grade change undone by a declared inverse")
    params: Tuple[float, ...] = Field(default=())

    @model_validator(mode="after")
    def _check_gate(self) -> "GateOp":
        if self.matrix.shape != (4, 4):
            raise ValueError(f"{self.name}: gates act on the 4-dim ququart, got {self.matrix.shape}")
        residual = unitarity_residual(self.matrix)
        if residual > UNITARY_TOL:
            raise ValueError(f"{self.name}: not unitary (residual {residual:.3e})")
        shifts = monomial_shifts(self.matrix)
        if shifts is not None:
            allowed = {G00, self.grade_delta} if self.interface else {self.grade_delta}
            if not set(shifts) <= allowed:
                raise ValueError(f"{self.name}: grade_delta {self.grade_delta} disagrees with its sector action")
        self.matrix.setflags(write=False)
        return self

    @property
    def changes_grade(self) -> bool:
        return self.grade_delta != G00

    def label(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}({', '.join(f'{p:.6g}' for p in self.params)})"


def monomial_shifts(matrix: np.ndarray, tol: float = 1e-12) -> Optional[List[Grade]]:
    """Grade shift of each basis column, or None when some column is a superposition."""
    shifts = []
    for k in range(4):
        support = np.flatnonzero(np.abs(matrix[:, k]) > tol)
        if len(support) != 1:
            return None
        shifts.append(grade_add(grade_of_index(k), grade_of_index(int(support[0]))))
    return shifts


def _normalize_phase(m: np.ndarray) -> np.ndarray:
    column = m[:, 0]
    pivot = column[int(np.argmax(np.abs(column) + 1e-15 * np.arange(len(column))[::-1]))]
    return m * (abs(pivot) / pivot) if abs(pivot) > 0 else m


def _linear_retarder(theta: float, delta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    rot = np.array([[c, -s], [s, c]])
    return rot @ np.diag([1.0, np.exp(1j * delta)]) @ rot.T


def jones_circular(theta: float, delta: float) -> np.ndarray:
    """Retarder with fast axis at theta and retardance delta, in the circular basis."""
    return _normalize_phase(_CIRCULAR.conj().T @ _linear_retarder(theta, delta) @ _CIRCULAR)


def rz(t: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)])


def rx(t: float) -> np.ndarray:
    return np.cos(t / 2) * I2 - 1j * np.sin(t / 2) * PAULI_X


def ry(t: float) -> np.ndarray:
    return np.array([[np.cos(t / 2), -np.sin(t / 2)], [np.sin(t / 2), np.cos(t / 2)]], dtype=complex)


def on_a(u: np.ndarray) -> np.ndarray:
    return np.kron(u, I2)


def on_b(u: np.ndarray) -> np.ndarray:
    return np.kron(I2, u)


def hwp(theta_deg: float) -> GateOp:
    """Half-wave plate on Q_b; reverses helicity at any angle."""
    matrix = on_b(jones_circular(np.deg2rad(theta_deg), np.pi))
    return GateOp(name="HWP", matrix=matrix, grade_delta=G01, params=(theta_deg,))


def qwp(theta_deg: float) -> GateOp:
    """Quarter-wave plate on Q_b; it splits each helicity across both b grades, so like H_b it shifts no grade."""
    matrix = on_b(jones_circular(np.deg2rad(theta_deg), np.pi / 2))
    return GateOp(name="QWP", matrix=matrix, params=(theta_deg,))


def compensated_sigma_flip() -> GateOp:
    """QWP(45) -> HWP(0) -> QWP(45): a helicity flip declared with its inverse."""
    product = qwp(45.0).matrix @ hwp(0.0).matrix @ qwp(45.0).matrix
    return GateOp(name="sigma_flip", matrix=_normalize_phase(product), grade_delta=G01, compensated=True)


def rz_a(t: float) -> GateOp:
    return GateOp(name="RZ_a", matrix=on_a(rz(t)), params=(t,))


def rx_b(t: float) -> GateOp:
    """RX on Q_b. At t = pi mod 2pi it is a bit flip and carries the b grade shift."""
    matrix = on_b(rx(t))
    shifts = monomial_shifts(matrix)
    delta = G01 if shifts is not None and G01 in shifts else G00
    return GateOp(name="RX_b", matrix=matrix, grade_delta=delta, params=(t,))


def _fixed(name: str, matrix: np.ndarray, **kwargs) -> Callable[[], GateOp]:
    return lambda: GateOp(name=name, matrix=matrix.copy(), **kwargs)


_FIXED: Dict[str, Callable[[], GateOp]] = {
    "X_b": _fixed("X_b", on_b(PAULI_X), grade_delta=G01),
    "H_b": _fixed("H_b", on_b(HADAMARD)),
    "Z_a": _fixed("Z_a", on_a(PAULI_Z)),
    "H_a": _fixed("H_a", on_a(HADAMARD)),
    "X_a": _fixed("X_a", on_a(PAULI_X), grade_delta=G10),
    "CNOT_ba": _fixed("CNOT_ba", CNOT_BA, grade_delta=G10, interface=True),
    "qplate_pi": _fixed("qplate_pi", CNOT_BA, grade_delta=G10, interface=True),
    "CNOT_ab": _fixed(
        "CNOT_ab",
        np.kron(HADAMARD, HADAMARD) @ CNOT_BA @ np.kron(HADAMARD, HADAMARD),
        grade_delta=G01,
        interface=True,
    ),
    "sigma_flip": compensated_sigma_flip,
}

_PARAMETRIC: Dict[str, Callable[[float], GateOp]] = {
    "RZ_a": rz_a,
    "RX_b": rx_b,
    "HWP": hwp,
    "QWP": qwp,
}


def _key(name: str) -> str:
    """Lookup key: case and underscores are ignored, so Hb, H_b and h_b agree."""
    return name.lower().replace("_", "")


_ALIASES = {_key(name): name for name in itertools.chain(_FIXED, _PARAMETRIC)}
_ALIASES.update({"qplate": "qplate_pi", "cnot": "CNOT_ba"})


def gate_names() -> Tuple[str, ...]:
    return tuple(_FIXED) + tuple(_PARAMETRIC)


def canonical_gate_name(name: str) -> Optional[str]:
    return _ALIASES.get(_key(name))


def is_parametric(name: str) -> bool:
    return canonical_gate_name(name) in _PARAMETRIC


def gate(name: str, *params: float) -> GateOp:
    """
    Look up a gate by name.

    Raises:
        ValidationError: Unknown name, wrong parameter count or a non-finite angle
    """
    canonical = _ALIASES.get(_key(name))
    if canonical is None:
        raise ValidationError(f"Unknown gate '{name}'", details={"known": list(gate_names())})
    if canonical in _FIXED:
        if params:
            raise ValidationError(f"Gate {canonical} takes no parameters")
        return _FIXED[canonical]()
    if len(params) != 1:
        raise ValidationError(f"Gate {canonical} takes exactly one angle")
    angle = float(params[0])
    if not np.isfinite(angle):
        raise ValidationError(f"Gate {canonical}: angle must be finite, got {angle}")
    try:
        return _PARAMETRIC[canonical](angle)
    except PydanticValidationError as e:
        raise ValidationError(
            f"Gate {canonical}({angle:.6g}) failed validation: {e.errors()[0]['msg']}",
            details={"validation_errors": e.errors(include_url=False)},
        ) from e


def haar_unitary(rng: np.random.Generator, n: int = 4) -> np.ndarray:
    """Haar-random U(n) from the QR decomposition of a complex Gaussian matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
