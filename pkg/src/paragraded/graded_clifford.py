"""
Graded Clifford algebra
=======================

Block-diagonal gamma matrices Gamma^mu_g = P_g (x) gamma^mu on the graded spinor space,
Lorentz generators, the tower mass map M(s) = m/(s + 1/2) and the momentum-space
dispersion check for each grade sector.
"""

import itertools
import logging
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.linalg import svdvals

from .core.exceptions import ValidationError
from .grading import DEFAULT_BASIS, Grade, GradeBasis, SpinLike, as_half_integer, grade_of_spin, projector
from .models.reports import AuditReport, ResidualCheck
from .utils.export import matrix_to_csv, table_to_csv
from .utils.linalg import I2, PAULI_X, PAULI_Y, PAULI_Z, anticommutator, commutator, dagger, max_abs

logger = logging.getLogger(__name__)

CLIFFORD_TOL = 1e-12


class GammaSet(BaseModel):
    """Dirac matrices gamma^0..gamma^{d-1} with a diagonal metric."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    gammas: Tuple[np.ndarray, ...]
    metric: Tuple[int, ...] = Field(description="Diagonal of eta, +1 first")

    @model_validator(mode="after")
    def _check_clifford(self) -> "GammaSet":
        if len(self.gammas) != len(self.metric):
            raise ValueError("one metric entry per gamma matrix is required")
        if clifford_residual(self.gammas, self.metric) > CLIFFORD_TOL:
            raise ValueError("gamma matrices do not satisfy the Clifford relations")
        for g in self.gammas:
            g.setflags(write=False)
        return self

    @property
    def dim(self) -> int:
        return self.gammas[0].shape[0]

    @property
    def eta(self) -> np.ndarray:
        return np.diag(self.metric).astype(float)


class GradedGammaSet(BaseModel):
    """Per-sector Gamma^mu_g and their sums Gamma^mu."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    base: GammaSet
    basis: GradeBasis = Field(default=DEFAULT_BASIS)
    sectors: Dict[Grade, Tuple[np.ndarray, ...]]
    total: Tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return 4 * self.base.dim


class TowerLevel(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    s: Fraction
    grade: Grade
    mass: float = Field(gt=0.0)


def clifford_residual(gammas: Sequence[np.ndarray], metric: Sequence[int]) -> float:
    """max over mu <= nu of ||{g^mu, g^nu} - 2 eta^{mu nu} 1||."""
    eye = np.eye(gammas[0].shape[0])
    worst = 0.0
    for mu, nu in itertools.combinations_with_replacement(range(len(gammas)), 2):
        target = 2.0 * metric[mu] * eye if mu == nu else 0.0 * eye
        worst = max(worst, max_abs(anticommutator(gammas[mu], gammas[nu]) - target))
    return worst


def dirac_gammas() -> GammaSet:
    """Dirac representation, gamma^0 = diag(1, 1, -1, -1)."""
    zero = np.zeros((2, 2), dtype=complex)
    gamma0 = np.block([[I2, zero], [zero, -I2]])
    spatial = [np.block([[zero, sigma], [-sigma, zero]]) for sigma in (PAULI_X, PAULI_Y, PAULI_Z)]
    return GammaSet(gammas=(gamma0, *spatial), metric=(1, -1, -1, -1))


def gammas_1p1() -> GammaSet:
    """Two-dimensional reduction gamma^0 = sigma_z, gamma^1 = i sigma_y."""
    return GammaSet(gammas=(PAULI_Z.copy(), 1j * PAULI_Y), metric=(1, -1))


def graded_gammas(gammas: Optional[GammaSet] = None, basis: GradeBasis = DEFAULT_BASIS) -> GradedGammaSet:
    gammas = gammas or dirac_gammas()
    sectors = {
        g: tuple(np.kron(projector(g, basis).matrix, gamma) for gamma in gammas.gammas)
        for g in basis.ordering
    }
    total = tuple(sum(sectors[g][mu] for g in basis.ordering) for mu in range(len(gammas.gammas)))
    return GradedGammaSet(base=gammas, basis=basis, sectors=sectors, total=total)


def lorentz_generators(gg: GradedGammaSet) -> Dict[Tuple[int, int], np.ndarray]:
    """Sigma^{mu nu} = (i/4)[Gamma^mu, Gamma^nu] for mu < nu."""
    n = len(gg.total)
    return {
        (mu, nu): 0.25j * commutator(gg.total[mu], gg.total[nu])
        for mu, nu in itertools.combinations(range(n), 2)
    }


def _sigma(gens: Dict[Tuple[int, int], np.ndarray], mu: int, nu: int, dim: int) -> np.ndarray:
    if mu == nu:
        return np.zeros((dim, dim), dtype=complex)
    return gens[(mu, nu)] if mu < nu else -gens[(nu, mu)]


def lorentz_closure_residual(gg: GradedGammaSet) -> float:
    """
    Worst violation of
    [S^{mn}, S^{rs}] = i (eta^{nr} S^{ms} - eta^{mr} S^{ns} - eta^{ns} S^{mr} + eta^{ms} S^{nr}).
    """
    gens = lorentz_generators(gg)
    eta = gg.base.metric
    n, dim = len(eta), gg.dim
    worst = 0.0
    for m, nn, r, s in itertools.product(range(n), repeat=4):
        S = lambda a, b: _sigma(gens, a, b, dim)
        lhs = commutator(S(m, nn), S(r, s))
        rhs = 1j * (
            (eta[nn] if nn == r else 0) * S(m, s)
            - (eta[m] if m == r else 0) * S(nn, s)
            - (eta[nn] if nn == s else 0) * S(m, r)
            + (eta[m] if m == s else 0) * S(nn, r)
        )
        worst = max(worst, max_abs(lhs - rhs))
    return worst


def clifford_audit(gg: Optional[GradedGammaSet] = None) -> AuditReport:
    """Global closure, intra- and inter-sector relations, Hermiticity and block structure."""
    gg = gg or graded_gammas()
    eta = gg.base.metric
    n = len(eta)
    eye_base = np.eye(gg.base.dim)

    intra = 0.0
    inter = 0.0
    for g, h in itertools.product(gg.basis.ordering, repeat=2):
        for mu, nu in itertools.product(range(n), repeat=2):
            anti = anticommutator(gg.sectors[g][mu], gg.sectors[h][nu])
            if g == h:
                target = 2.0 * eta[mu] * (mu == nu) * np.kron(projector(g, gg.basis).matrix, eye_base)
                intra = max(intra, max_abs(anti - target))
            else:
                inter = max(inter, max_abs(anti))

    gamma0 = gg.total[0]
    hermiticity = max(max_abs(dagger(G) - gamma0 @ G @ gamma0) for G in gg.total)
    base_gens = {
        (mu, nu): 0.25j * commutator(gg.base.gammas[mu], gg.base.gammas[nu])
        for mu, nu in itertools.combinations(range(n), 2)
    }
    blockwise = max(
        max_abs(sigma - np.kron(np.eye(4), base_gens[key])) for key, sigma in lorentz_generators(gg).items()
    )

    checks = [
        ResidualCheck(name="{G^mu, G^nu} = 2 eta", residual=clifford_residual(gg.total, eta), tolerance=CLIFFORD_TOL),
        ResidualCheck(name="intra-sector anticommutator", residual=intra, tolerance=CLIFFORD_TOL),
        ResidualCheck(name="inter-sector anticommutator", residual=inter, tolerance=CLIFFORD_TOL),
        ResidualCheck(name="G^mu dag = G^0 G^mu G^0", residual=hermiticity, tolerance=CLIFFORD_TOL),
        ResidualCheck(name="Sigma = 1 (x) sigma blockwise", residual=blockwise, tolerance=CLIFFORD_TOL),
        ResidualCheck(name="Lorentz algebra closure", residual=lorentz_closure_residual(gg), tolerance=CLIFFORD_TOL),
    ]
    return AuditReport(suite="graded_clifford", checks=checks)


def tower_mass(s: SpinLike, m: float) -> float:
    if m <= 0:
        raise ValidationError(f"Mass scale m must be positive, got {m}")
    return m / (float(as_half_integer(s)) + 0.5)


def tower_level(s: SpinLike, m: float) -> TowerLevel:
    value = as_half_integer(s)
    return TowerLevel(s=value, grade=grade_of_spin(value), mass=tower_mass(value, m))


def graded_inner_product(psi: np.ndarray, phi: np.ndarray, basis: GradeBasis = DEFAULT_BASIS) -> complex:
    """sum_g <psi_g, phi_g> over the sector blocks of a graded spinor."""
    psi, phi = np.asarray(psi, dtype=complex), np.asarray(phi, dtype=complex)
    if psi.shape != phi.shape or psi.ndim != 1 or psi.size % 4:
        raise ValidationError(f"Graded spinors must be equal-length vectors divisible by 4, got {psi.shape}, {phi.shape}")
    k = psi.size // 4
    return complex(sum(np.vdot(psi[i * k:(i + 1) * k], phi[i * k:(i + 1) * k]) for i in range(len(basis.ordering))))


def dispersion_residual(
    p4: Sequence[float],
    s: SpinLike,
    m: float,
    grade: Grade,
    gg: Optional[GradedGammaSet] = None,
) -> float:
    """
    Smallest singular value of the grade block of Gamma^mu_g p_mu - M(s) (P_g (x) 1).

    Vanishes exactly on shell, p.p = M(s)^2.
    """
    gg = gg or graded_gammas()
    if grade_of_spin(s) != grade:
        raise ValidationError(f"Grade {grade} does not match spin {s} (expected {grade_of_spin(s)})")
    p_upper = np.asarray(p4, dtype=float)
    if p_upper.shape != (len(gg.base.metric),):
        raise ValidationError(f"Momentum must have {len(gg.base.metric)} components, got {p_upper.shape}")

    p_lower = np.asarray(gg.base.metric) * p_upper
    operator = sum(gg.sectors[grade][mu] * p_lower[mu] for mu in range(len(p_lower)))
    operator = operator - tower_mass(s, m) * np.kron(projector(grade, gg.basis).matrix, np.eye(gg.base.dim))

    k = gg.base.dim
    pos = gg.basis.index_of(grade)
    block = operator[pos * k:(pos + 1) * k, pos * k:(pos + 1) * k]
    return float(np.min(svdvals(block)))


def dispersion_scan(
    momenta: Iterable[Sequence[float]],
    s: SpinLike,
    m: float,
    grade: Grade,
    gg: Optional[GradedGammaSet] = None,
) -> List[Tuple[float, float, float]]:
    """(p^0, p^1, residual) rows."""
    gg = gg or graded_gammas()
    return [(float(p[0]), float(p[1]), dispersion_residual(p, s, m, grade, gg)) for p in momenta]


def dispersion_csv(rows: Iterable[Tuple[float, float, float]], target: Union[str, Path, None] = None) -> str:
    return table_to_csv(["p0", "p1", "residual"], rows, target)


def gamma_csv(gg: GradedGammaSet, mu: int, target: Union[str, Path, None] = None) -> str:
    k = gg.base.dim
    labels = [f"{g.label}.{i}" for g in gg.basis.ordering for i in range(k)]
    return matrix_to_csv(gg.total[mu], labels, target)
