"""
Cartan (KAK) analysis of two-qubit gates.

Every U in U(4) factors as

    U = phase * (A1 (x) B1) * exp(i (x XX + y YY + z ZZ)) * (A0 (x) B0)

The interaction (x, y, z) is brought into the chamber pi/4 >= x >= y >= |z| (z >= 0 when
x = pi/4) by shifts of pi/2 and local conjugations, which are tracked so the
decomposition stays exact. Reported Cartan coordinates are (2x, 2y, 2|z|), which puts
CNOT at (pi/2, 0, 0) and SWAP at (pi/2, pi/2, pi/2).
"""

import itertools
import logging
import math
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.linalg import eigh, expm, logm

from ..core.exceptions import NumericalError
from ..core.validators import validate_unitary
from ..utils.linalg import I2, PAULI_X, PAULI_Y, PAULI_Z, max_abs

logger = logging.getLogger(__name__)

MAGIC = np.array(
    [
        [1, 0, 0, 1j],
        [0, 1j, 1, 0],
        [0, 1j, -1, 0],
        [1, 0, 0, -1j],
    ]
) / np.sqrt(2.0)

_PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)
_PAIRS = tuple(np.kron(p, p) for p in _PAULIS)

CHAMBER_EPS = 1e-12
CLASS_TOL = 1e-10

# Mixing ratios tried when simultaneously diagonalizing Re(m) and Im(m).
_MIXING = (0.6180339887498949, 1.4142135623730951, 2.718281828459045, 0.3183098861837907)


class CartanCoords(BaseModel):
    """Weyl-chamber point, c1 >= c2 >= c3 >= 0."""
    model_config = ConfigDict(frozen=True)

    c1: float = Field(ge=-CHAMBER_EPS, le=math.pi / 2 + 1e-9)
    c2: float = Field(ge=-CHAMBER_EPS, le=math.pi / 2 + 1e-9)
    c3: float = Field(ge=-CHAMBER_EPS, le=math.pi / 2 + 1e-9)

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.c1, self.c2, self.c3)

    @property
    def entangling(self) -> bool:
        return max(self.as_tuple()) > CLASS_TOL


class KakDecomposition(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    global_phase: complex
    before: np.ndarray = Field(description="Local 4x4 factor applied first")
    after: np.ndarray = Field(description="Local 4x4 factor applied last")
    interaction: Tuple[float, float, float] = Field(description="Signed canonical (x, y, z)")

    def core(self) -> np.ndarray:
        return interaction_unitary(*self.interaction)

    def unitary(self) -> np.ndarray:
        return self.global_phase * self.after @ self.core() @ self.before

    def coords(self) -> CartanCoords:
        x, y, z = self.interaction
        return CartanCoords(c1=2 * x, c2=2 * y, c3=2 * abs(z))


def interaction_unitary(x: float, y: float, z: float) -> np.ndarray:
    return expm(1j * (x * _PAIRS[0] + y * _PAIRS[1] + z * _PAIRS[2]))


def kron_factor(k: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Split a local 4x4 operator into A (x) B with det A = 1."""
    r = k.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    u, s, vh = np.linalg.svd(r)
    a = u[:, 0].reshape(2, 2) * np.sqrt(s[0])
    b = vh[0, :].reshape(2, 2) * np.sqrt(s[0])
    g = np.sqrt(np.linalg.det(a))
    return a / g, b * g


def _orthogonal_eigenbasis(m: np.ndarray) -> np.ndarray:
    """Real orthogonal P with P^T m P diagonal, for complex symmetric unitary m."""
    re, im = m.real, m.imag
    for ratio in _MIXING:
        _, p = eigh(re + ratio * im)
        d = p.T @ m @ p
        if max_abs(d - np.diag(np.diag(d))) < 1e-10:
            if np.linalg.det(p) < 0:
                p[:, 0] = -p[:, 0]
            return p
    raise NumericalError("Could not diagonalize the magic-basis Gram matrix", details={"matrix": m.tolist()})


class _Tracker:
    """U = phase * left * N(v) * right, updated in place by chamber moves."""

    def __init__(self, phase: complex, left: np.ndarray, v: List[float], right: np.ndarray):
        self.phase = phase
        self.left = left
        self.v = v
        self.right = right

    def shift(self, k: int, n: int) -> None:
        """v_k += n pi/2."""
        if n == 0:
            return
        self.v[k] += n * math.pi / 2
        self.phase *= (-1j) ** n
        if n % 2:
            self.right = _PAIRS[k] @ self.right

    def _conjugate(self, g: np.ndarray) -> None:
        self.left = self.left @ g
        self.right = g @ self.right

    def negate(self, i: int, j: int) -> None:
        (k,) = {0, 1, 2} - {i, j}
        self._conjugate(np.kron(_PAULIS[k], I2))
        self.v[i], self.v[j] = -self.v[i], -self.v[j]

    def swap(self, i: int, j: int) -> None:
        g = (_PAULIS[i] + _PAULIS[j]) / np.sqrt(2.0)
        self._conjugate(np.kron(g, g))
        self.v[i], self.v[j] = self.v[j], self.v[i]


def _canonicalize(t: _Tracker) -> None:
    quarter = math.pi / 4
    for k in range(3):
        t.shift(k, -int(round(t.v[k] / (math.pi / 2))))
        if t.v[k] <= -quarter + CHAMBER_EPS:
            t.shift(k, 1)
        elif t.v[k] > quarter + CHAMBER_EPS:
            t.shift(k, -1)

    for i, j in ((0, 1), (1, 2), (0, 1)):
        if abs(t.v[j]) > abs(t.v[i]) + CHAMBER_EPS:
            t.swap(i, j)

    negative = [val < -CHAMBER_EPS for val in t.v]
    if negative[0] and negative[1]:
        t.negate(0, 1)
    elif negative[0]:
        t.negate(0, 2)
    elif negative[1]:
        t.negate(1, 2)

    if t.v[0] > quarter - CHAMBER_EPS and t.v[2] < -CHAMBER_EPS:
        t.shift(0, -1)
        t.negate(0, 2)


def kak_decomposition(u: np.ndarray, tol: float = 1e-9) -> KakDecomposition:
    """
    Magic-basis KAK decomposition with the interaction in the Weyl chamber.

    Raises:
        ValidationError: If U is not a 4x4 unitary
        NumericalError: If the reconstruction misses U by more than tol
    """
    u = validate_unitary(u, tol=tol, size=4)
    det_root = np.linalg.det(u) ** 0.25
    us = u / det_root

    ub = MAGIC.conj().T @ us @ MAGIC
    p = _orthogonal_eigenbasis(ub.T @ ub)
    lam = np.angle(np.diag(p.T @ ub.T @ ub @ p)) / 2
    o1 = ub @ p @ np.diag(np.exp(-1j * lam))
    if np.linalg.det(o1).real < 0:
        lam[0] += math.pi
        o1[:, 0] = -o1[:, 0]

    x = (lam[0] + lam[1] - lam[2] - lam[3]) / 4
    y = (-lam[0] + lam[1] - lam[2] + lam[3]) / 4
    z = (lam[0] - lam[1] - lam[2] + lam[3]) / 4
    mean = float(np.sum(lam)) / 4

    left = MAGIC @ o1.real @ MAGIC.conj().T
    right = MAGIC @ p.T @ MAGIC.conj().T
    tracker = _Tracker(det_root * np.exp(1j * mean), left, [x, y, z], right)
    _canonicalize(tracker)

    result = KakDecomposition(
        global_phase=complex(tracker.phase),
        before=tracker.right,
        after=tracker.left,
        interaction=(float(tracker.v[0]), float(tracker.v[1]), float(tracker.v[2])),
    )
    residual = max_abs(result.unitary() - u)
    if residual > tol:
        raise NumericalError(f"KAK reconstruction residual {residual:.3e} exceeds {tol:.1e}", details={"residual": residual})
    return result


def cartan_coords(u: np.ndarray) -> CartanCoords:
    return kak_decomposition(u).coords()


def makhlin_invariants(u: np.ndarray) -> Tuple[complex, float]:
    """(G1, G2) from m = U_B^T U_B in the magic basis."""
    u = validate_unitary(u, tol=1e-9, size=4)
    ub = MAGIC.conj().T @ u @ MAGIC
    m = ub.T @ ub
    det = np.linalg.det(u)
    tr = np.trace(m)
    g1 = tr**2 / (16 * det)
    g2 = (tr**2 - np.trace(m @ m)) / (4 * det)
    return complex(g1), float(g2.real)


def cnot_class(interaction: Sequence[float], tol: float = CLASS_TOL) -> int:
    x, y, z = interaction
    if max(abs(x), abs(y), abs(z)) <= tol:
        return 0
    if abs(x - math.pi / 4) <= tol and abs(y) <= tol and abs(z) <= tol:
        return 1
    if abs(z) <= tol:
        return 2
    return 3


def cnot_count(u: np.ndarray, tol: float = CLASS_TOL) -> int:
    """Minimal number of CNOTs needed for U, read off its chamber point."""
    return cnot_class(kak_decomposition(u).interaction, tol)


def su2_closure(generators: Iterable[np.ndarray], tol: float = 1e-9) -> int:
    """
    Dimension of the real Lie algebra generated by the logarithms of 2x2 unitaries.

    3 certifies that the set generates all of SU(2).
    """
    basis: List[np.ndarray] = []

    def flatten(a: np.ndarray) -> np.ndarray:
        return np.concatenate([a.real.ravel(), a.imag.ravel()])

    def try_add(a: np.ndarray) -> bool:
        a = a - np.trace(a) / 2 * np.eye(2)
        if max_abs(a) <= tol:
            return False
        stacked = np.array([flatten(b) for b in basis + [a]])
        if np.linalg.matrix_rank(stacked, tol=tol) > len(basis):
            basis.append(a)
            return True
        return False

    for g in generators:
        g = validate_unitary(g, tol=1e-9, name="generator", size=2)
        try_add(logm(g))

    grew = True
    while grew and len(basis) < 3:
        grew = False
        for a, b in itertools.combinations(list(basis), 2):
            if try_add(a @ b - b @ a):
                grew = True
    return len(basis)
