"""
SU(4) synthesis over the ququart gate set.

Single-qubit layers are Euler decompositions: Z-X-Z on Q_a using RZ_a and H_a, X-Z-X
on Q_b using RX_b and H_b. Entangling layers use CNOT_ba only. A target is matched to
a CNOT template of the same Cartan class; the two KAK decompositions then supply the
outer local layers exactly.
"""

import itertools
import logging
import math
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.optimize import least_squares

from ..core.exceptions import NumericalError
from ..core.validators import validate_unitary
from ..utils.config import Config
from ..utils.linalg import HADAMARD, I2, equal_up_to_phase, max_abs
from .algebra import CNOT_BA
from .cartan import CLASS_TOL, KakDecomposition, cnot_class, kak_decomposition, kron_factor, makhlin_invariants
from .circuits import Circuit
from .gates import GateOp, gate, rx, rx_b, ry, rz, rz_a

logger = logging.getLogger(__name__)

_HH = np.kron(HADAMARD, HADAMARD)


class EulerAngles(BaseModel):
    """u = exp(i phase) R1(alpha) R2(beta) R1(gamma)."""
    model_config = ConfigDict(frozen=True)

    phase: float
    alpha: float
    beta: float
    gamma: float


def euler_zxz(u: np.ndarray) -> EulerAngles:
    u = validate_unitary(u, tol=1e-9, name="u", size=2)
    v = u / np.sqrt(np.linalg.det(u))
    # Z-Y-Z angles first; RY(b) = RZ(pi/2) RX(b) RZ(-pi/2).
    b = 2 * math.atan2(abs(v[1, 0]), abs(v[0, 0]))
    total = 2 * np.angle(v[1, 1]) if abs(v[1, 1]) > 1e-12 else 0.0
    diff = 2 * np.angle(v[1, 0]) if abs(v[1, 0]) > 1e-12 else 0.0
    a, c = (total + diff) / 2, (total - diff) / 2
    alpha, beta, gamma = a + math.pi / 2, b, c - math.pi / 2

    w = rz(alpha) @ rx(beta) @ rz(gamma)
    overlap = np.trace(w.conj().T @ u) / 2
    return EulerAngles(phase=float(np.angle(overlap)), alpha=alpha, beta=beta, gamma=gamma)


def euler_xzx(u: np.ndarray) -> EulerAngles:
    """H RX H = RZ, so the X-Z-X angles of u are the Z-X-Z angles of H u H."""
    u = validate_unitary(u, tol=1e-9, name="u", size=2)
    return euler_zxz(HADAMARD @ u @ HADAMARD)


def _local_gates(k: np.ndarray) -> Tuple[List[GateOp], float]:
    """Gates realizing the local operator k, plus the phase they leave out."""
    a, b = kron_factor(k)
    ea, eb = euler_zxz(a), euler_xzx(b)
    gates = [
        rz_a(ea.gamma), gate("H_a"), rz_a(ea.beta), gate("H_a"), rz_a(ea.alpha),
        rx_b(eb.gamma), gate("H_b"), rx_b(eb.beta), gate("H_b"), rx_b(eb.alpha),
    ]
    return gates, ea.phase + eb.phase


def _two_cnot_core(params: Sequence[float]) -> List[np.ndarray]:
    theta, phi = params
    return [np.kron(rz(theta), rx(phi))]


def _three_cnot_core(params: Sequence[float]) -> List[np.ndarray]:
    alpha, beta, delta = params
    return [_HH @ np.kron(rz(delta), ry(beta)), np.kron(I2, ry(alpha)) @ _HH]


def _template(layers: Sequence[np.ndarray]) -> np.ndarray:
    t = CNOT_BA.copy()
    for layer in layers:
        t = CNOT_BA @ layer @ t
    return t


def _candidates(target: Tuple[float, float, float], cnots: int) -> Iterator[Tuple[float, ...]]:
    half = math.pi / 2
    x, y, _ = target
    if cnots == 2:
        for (p, q), s1, s2 in itertools.product(((x, y), (y, x)), (-1, 1), (-1, 1)):
            yield (s1 * 2 * q, s2 * 2 * p)
        return
    # The closed form first, then its sign, offset and ordering variants.
    yield (half - 2 * target[0], 2 * target[1] - half, half - 2 * target[2])
    for perm in itertools.permutations(target):
        for signs in itertools.product((1, -1), repeat=3):
            for offsets in itertools.product((1, -1), repeat=3):
                yield tuple(o * half + s * 2 * c for o, s, c in zip(offsets, signs, perm))


def _match(target: KakDecomposition, cnots: int, tol: float) -> Tuple[List[np.ndarray], KakDecomposition]:
    core = _two_cnot_core if cnots == 2 else _three_cnot_core
    goal = np.array(target.interaction)
    for params in _candidates(target.interaction, cnots):
        layers = core(params)
        kak = kak_decomposition(_template(layers))
        if max_abs(np.array(kak.interaction) - goal) <= tol:
            return layers, kak

    # Fall back to fitting the local invariants directly.
    g1, g2 = makhlin_invariants(target.unitary())

    def residual(params: np.ndarray) -> np.ndarray:
        h1, h2 = makhlin_invariants(_template(core(params)))
        return np.array([h1.real - g1.real, h1.imag - g1.imag, h2 - g2])

    start = np.full(2 if cnots == 2 else 3, 0.3)
    fit = least_squares(residual, start, xtol=1e-15, ftol=1e-15, gtol=1e-15)
    layers = core(fit.x)
    kak = kak_decomposition(_template(layers))
    if max_abs(np.array(kak.interaction) - goal) > 1e-9:
        raise NumericalError(
            f"No {cnots}-CNOT template reaches the target chamber point",
            details={"target": list(target.interaction), "reached": list(kak.interaction)},
        )
    return layers, kak


def synthesize_su4(u: np.ndarray, tol: Optional[float] = None) -> Circuit:
    """
    Decompose a 4x4 unitary into at most three CNOT_ba and Euler rotation layers.

    Raises:
        ValidationError: If u is not unitary
        NumericalError: If the rebuilt circuit misses u by more than tol
    """
    tol = Config(load_env_file=False).tol_synth if tol is None else tol
    u = validate_unitary(u, tol=tol, size=4)
    target = kak_decomposition(u, tol=tol)
    cnots = cnot_class(target.interaction, CLASS_TOL)

    if cnots == 0:
        locals_ = [target.after @ target.before]
        inner: List[np.ndarray] = []
        phase = target.global_phase
    else:
        if cnots == 1:
            inner = []
            template = kak_decomposition(CNOT_BA)
        else:
            inner, template = _match(target, cnots, 1e-9)
        first = template.before.conj().T @ target.before
        last = target.after @ template.after.conj().T
        locals_ = [first, last]
        phase = target.global_phase / template.global_phase

    gates: List[GateOp] = []
    global_phase = float(np.angle(phase))
    if cnots == 0:
        layer, extra = _local_gates(locals_[0])
        gates.extend(layer)
        global_phase += extra
    else:
        layer, extra = _local_gates(locals_[0])
        gates.extend(layer)
        global_phase += extra
        gates.append(gate("CNOT_ba"))
        for m in inner:
            layer, extra = _local_gates(m)
            gates.extend(layer)
            global_phase += extra
            gates.append(gate("CNOT_ba"))
        layer, extra = _local_gates(locals_[1])
        gates.extend(layer)
        global_phase += extra

    circuit = Circuit(gates=tuple(gates), global_phase=global_phase)
    error = synthesis_error(u, circuit)
    if error > tol:
        raise NumericalError(f"Synthesis error {error:.3e} exceeds {tol:.1e}", details={"error": error, "cnots": cnots})
    logger.debug(f"Synthesized with {cnots} CNOTs, error {error:.2e}")
    return circuit


def synthesis_error(u: np.ndarray, circuit: Circuit) -> float:
    """Distance between u and the circuit unitary up to a global phase."""
    return equal_up_to_phase(circuit.unitary(), np.asarray(u, dtype=complex))
