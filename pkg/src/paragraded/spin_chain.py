"""
Free-fermion spin chains
========================

Jordan-Wigner machinery for the isotropic XY chain H = -J sum (XX + YY): hopping
matrix, ground-state correlation matrix, interval entanglement entropy and the
central-charge fit. Also the bilinear paraparticle Hamiltonian solver and the cyclic
four-site parafermion chain.

Periodic chains are solved in the fermion-parity sector of the half-filled ground
state. The boundary bond then carries the Jordan-Wigner sign -(-1)^(N/2), i.e.
anti-periodic fermions when N = 0 mod 4 and periodic ones when N = 2 mod 4.
"""

import logging
import math
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy import stats
from scipy.linalg import eigh, eigvalsh, svdvals
from scipy.special import xlogy

from .core.exceptions import NumericalError, ValidationError
from .core.validators import validate_hermitian
from .grading import SpinLike, as_half_integer
from .models.reports import AuditReport, Finding, ResidualCheck, Severity
from .ququart.algebra import phase_hamiltonian
from .utils.export import table_to_csv
from .utils.linalg import I2, PAULI_X, PAULI_Y, PAULI_Z, commutator, kron_all, max_abs

logger = logging.getLogger(__name__)

NU_CLAMP = 1e-15
NU_BUG_TOL = 1e-10
DENSE_SITE_LIMIT = 12
MIN_FIT_POINTS = 5
# Shorter intervals sit outside the logarithmic regime.
MIN_FIT_LENGTH = 4

_ANNIHILATE = np.array([[0, 1], [0, 0]], dtype=complex)


class Boundary(str, Enum):
    PERIODIC = "periodic"
    OPEN = "open"


class XYChain(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=4, description="Number of sites")
    j: float = Field(default=1.0, description="Coupling")
    boundary: Boundary = Boundary.PERIODIC

    @field_validator("j")
    @classmethod
    def _nonzero(cls, value: float) -> float:
        if value == 0:
            raise ValueError("coupling J must be non-zero")
        return value

    @property
    def boundary_sign(self) -> int:
        """Jordan-Wigner sign on the wrap-around bond at half filling."""
        return -((-1) ** (self.n // 2))


def _chain(n: int, j: float, boundary: Union[str, Boundary]) -> XYChain:
    try:
        return XYChain(n=n, j=j, boundary=Boundary(boundary))
    except ValueError as e:
        raise ValidationError(f"Invalid XY chain: {e}") from e


def jw_hopping_matrix(chain: XYChain) -> np.ndarray:
    """t_mn = J for nearest neighbours, plus the signed corner bond when periodic."""
    t = np.zeros((chain.n, chain.n))
    for m in range(chain.n - 1):
        t[m, m + 1] = t[m + 1, m] = chain.j
    if chain.boundary is Boundary.PERIODIC:
        t[0, -1] = t[-1, 0] = chain.boundary_sign * chain.j
    return t


def single_particle_hamiltonian(chain: XYChain) -> np.ndarray:
    """XX + YY = 2 (s+s- + s-s+), so H = -2 sum t_mn c_m^dag c_n."""
    return -2.0 * jw_hopping_matrix(chain)


def ground_state_correlations(chain: XYChain) -> np.ndarray:
    """
    C_mn = <c_m^dag c_n> with every negative-energy mode filled.

    Raises:
        ValidationError: For odd N, whose Fermi level is degenerate
    """
    if chain.n % 2:
        raise ValidationError(f"Ground-state correlations need an even site count, got N={chain.n}")
    energies, modes = eigh(single_particle_hamiltonian(chain))
    occupied = modes[:, energies < 0]
    if occupied.shape[1] != chain.n // 2:
        raise NumericalError(
            f"Expected {chain.n // 2} filled modes, found {occupied.shape[1]}",
            details={"energies": energies.tolist()},
        )
    return occupied.conj() @ occupied.T


def infinite_chain_correlations(length: int) -> np.ndarray:
    """sin(pi (m-n)/2) / (pi (m-n)) for the half-filled infinite XX chain."""
    d = np.subtract.outer(np.arange(length), np.arange(length)).astype(float)
    with np.errstate(divide="ignore", invalid="ignore"):
        c = np.sin(np.pi * d / 2) / (np.pi * d)
    c[d == 0] = 0.5
    return c


def _binary_entropy(nu: np.ndarray) -> float:
    if np.any(nu < -NU_BUG_TOL) or np.any(nu > 1 + NU_BUG_TOL):
        raise NumericalError(
            "Correlation eigenvalues left [0, 1]",
            details={"min": float(nu.min()), "max": float(nu.max())},
        )
    nu = np.clip(nu, NU_CLAMP, 1 - NU_CLAMP)
    return float(-np.sum(xlogy(nu, nu) + xlogy(1 - nu, 1 - nu)))


def entanglement_entropy(correlations: np.ndarray, length: int) -> float:
    """Von Neumann entropy of the first ``length`` sites."""
    c = np.asarray(correlations)
    if not 1 <= length < c.shape[0]:
        raise ValidationError(f"Interval length must lie in [1, {c.shape[0] - 1}], got {length}")
    return _binary_entropy(eigvalsh(c[:length, :length]))


def chord_length(n: int, length: int) -> float:
    return (n / math.pi) * math.sin(math.pi * length / n)


class CentralChargeFit(BaseModel):
    """Entropy curve plus the chord-length and raw-log regressions."""
    model_config = ConfigDict(frozen=True)

    n: int
    lengths: List[int]
    entropies: List[float]
    chords: List[float]
    central_charge: float = Field(description="Slope against (1/3) ln chord")
    intercept: float
    residual: float = Field(description="RMS regression residual")
    stderr: float
    raw_central_charge: float = Field(description="Slope against (1/3) ln l")
    raw_intercept: float

    def to_csv(self, target: Union[str, Path, None] = None) -> str:
        return table_to_csv(["l", "chord", "S"], zip(self.lengths, self.chords, self.entropies), target)

    def summary(self) -> str:
        return "\n".join(
            [
                f"N = {self.n}, l in [{self.lengths[0]}, {self.lengths[-1]}] ({len(self.lengths)} points)",
                f"chord fit: slope {self.central_charge:.6f} intercept {self.intercept:.6f} residual {self.residual:.3e}",
                f"raw fit:   slope {self.raw_central_charge:.6f} intercept {self.raw_intercept:.6f}",
                f"c = {self.central_charge:.2f}±{max(self.stderr, 0.005):.2f}",
            ]
        )


def central_charge_fit(
    n: int,
    l_min: int,
    l_max: int,
    j: float = 1.0,
    correlations: Optional[np.ndarray] = None,
) -> CentralChargeFit:
    """
    Fit S(l) = (c/3) ln[(N/pi) sin(pi l/N)] + const on a periodic chain.

    Args:
        n: Site count
        l_min, l_max: Interval lengths, inclusive, within [4, N/2]
        j: Coupling
        correlations: Precomputed correlation matrix; the XX ground state by default

    Raises:
        ValidationError: For a range outside [4, N/2] or with fewer than five points
        NumericalError: For a flat entropy curve, which leaves nothing to regress
    """
    if not MIN_FIT_LENGTH <= l_min <= l_max <= n // 2:
        raise ValidationError(f"Interval range [{l_min}, {l_max}] must lie within [{MIN_FIT_LENGTH}, {n // 2}]")
    lengths = list(range(l_min, l_max + 1))
    if len(lengths) < MIN_FIT_POINTS:
        raise ValidationError(f"Central-charge fit needs at least {MIN_FIT_POINTS} points, got {len(lengths)}")

    c = ground_state_correlations(_chain(n, j, Boundary.PERIODIC)) if correlations is None else correlations
    entropies = np.array([entanglement_entropy(c, length) for length in lengths])
    if np.ptp(entropies) < 1e-12:
        raise NumericalError(
            "Entropy is constant over the range; zero variance, nothing to fit",
            details={"entropy": float(entropies[0])},
        )

    chords = np.array([chord_length(n, length) for length in lengths])
    x = np.log(chords) / 3
    fit = stats.linregress(x, entropies)
    raw = stats.linregress(np.log(lengths) / 3, entropies)
    residual = float(np.sqrt(np.mean((entropies - (fit.slope * x + fit.intercept)) ** 2)))
    logger.info(f"Central charge fit N={n}: c={fit.slope:.4f} (raw {raw.slope:.4f})")

    return CentralChargeFit(
        n=n,
        lengths=lengths,
        entropies=entropies.tolist(),
        chords=chords.tolist(),
        central_charge=float(fit.slope),
        intercept=float(fit.intercept),
        residual=residual,
        stderr=float(fit.stderr),
        raw_central_charge=float(raw.slope),
        raw_intercept=float(raw.intercept),
    )


# Dense spin-space oracles


def _site_op(op: np.ndarray, site: int, n: int) -> np.ndarray:
    return kron_all([op if k == site else I2 for k in range(n)])


def xy_spin_hamiltonian(n: int, j: float = 1.0, boundary: Union[str, Boundary] = Boundary.PERIODIC) -> np.ndarray:
    """Dense 2^N matrix of -J sum (X X + Y Y)."""
    if n > DENSE_SITE_LIMIT:
        raise ValidationError(f"Dense spin Hamiltonian limited to N <= {DENSE_SITE_LIMIT}, got {n}")
    chain = _chain(n, j, boundary)
    bonds = [(m, m + 1) for m in range(n - 1)]
    if chain.boundary is Boundary.PERIODIC:
        bonds.append((n - 1, 0))
    h = np.zeros((2**n, 2**n), dtype=complex)
    for m, k in bonds:
        for pauli in (PAULI_X, PAULI_Y):
            h -= j * _site_op(pauli, m, n) @ _site_op(pauli, k, n)
    return h


def _spin_ground_state(n: int, j: float, boundary: Union[str, Boundary]) -> np.ndarray:
    energies, states = eigh(xy_spin_hamiltonian(n, j, boundary))
    if energies[1] - energies[0] < 1e-9:
        raise NumericalError("Spin ground state is degenerate", details={"gap": float(energies[1] - energies[0])})
    return states[:, 0]


def jw_fermions(n: int) -> List[np.ndarray]:
    """c_k = Z_0 ... Z_{k-1} a_k on n sites."""
    return [kron_all([PAULI_Z] * k + [_ANNIHILATE] + [I2] * (n - k - 1)) for k in range(n)]


def brute_force_correlations(n: int, j: float = 1.0, boundary: Union[str, Boundary] = Boundary.PERIODIC) -> np.ndarray:
    psi = _spin_ground_state(n, j, boundary)
    cs = jw_fermions(n)
    return np.array([[psi.conj() @ cm.conj().T @ cn @ psi for cn in cs] for cm in cs])


def brute_force_entropy(n: int, length: int, j: float = 1.0, boundary: Union[str, Boundary] = Boundary.PERIODIC) -> float:
    """Entropy of the reduced density matrix of the exact 2^N ground state."""
    if not 1 <= length < n:
        raise ValidationError(f"Interval length must lie in [1, {n - 1}], got {length}")
    psi = _spin_ground_state(n, j, boundary)
    weights = svdvals(psi.reshape(2**length, 2 ** (n - length))) ** 2
    return float(-np.sum(xlogy(weights, weights)))


def bilinear_algebra_residual(n_modes: int = 3) -> float:
    """Max residual of [E_ij, E_kl] = d_jk E_il - d_il E_kj with E_ij = c_i^dag c_j."""
    if not 1 <= n_modes <= 5:
        raise ValidationError(f"n_modes must lie in [1, 5], got {n_modes}")
    cs = jw_fermions(n_modes)
    e = [[ci.conj().T @ cj for cj in cs] for ci in cs]
    zero = np.zeros_like(e[0][0])
    worst = 0.0
    r = range(n_modes)
    for i in r:
        for j in r:
            for k in r:
                for m in r:
                    expected = (e[i][m] if j == k else zero) - (e[k][j] if i == m else zero)
                    worst = max(worst, max_abs(commutator(e[i][j], e[k][m]) - expected))
    return worst


def xy_audit(n: int = 8, tol: float = 1e-8) -> AuditReport:
    """Correlation-matrix entropy and correlations against exact diagonalization."""
    chain = _chain(n, 1.0, Boundary.PERIODIC)
    c = ground_state_correlations(chain)
    checks = [
        ResidualCheck(
            name=f"correlations vs ED, N={n}",
            residual=max_abs(c - brute_force_correlations(n)),
            tolerance=1e-10,
        ),
        ResidualCheck(
            name=f"entropy vs ED, N={n}",
            residual=max(abs(entanglement_entropy(c, ell) - brute_force_entropy(n, ell)) for ell in range(1, n)),
            tolerance=tol,
        ),
        ResidualCheck(name="half filling trace", residual=abs(np.trace(c).real - n / 2), tolerance=1e-10),
        ResidualCheck(name="gl_N bilinear relations", residual=bilinear_algebra_residual(3), tolerance=1e-12),
    ]
    return AuditReport(suite="xy_chain", checks=checks)


# Bilinear paraparticle Hamiltonians


class BilinearHamiltonian(BaseModel):
    """
    Sum h_ij psi_i^+ psi_j^-, optionally with terms the quadratic solver cannot handle.

    ``pairing`` holds Delta_ij and ``interaction`` the coefficient U of U (a^dag a)^n;
    both are carried for bookkeeping and rejected at solve time.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    h: np.ndarray
    pairing: Optional[np.ndarray] = None
    interaction: float = 0.0

    @model_validator(mode="after")
    def _check_hermitian(self) -> "BilinearHamiltonian":
        validate_hermitian(self.h, tol=1e-12, name="h")
        return self

    @property
    def quadratic(self) -> bool:
        no_pairing = self.pairing is None or max_abs(np.asarray(self.pairing)) == 0.0
        return no_pairing and self.interaction == 0.0


class TowerConvention(str, Enum):
    PRODUCT = "M(s+1/2)"
    QUOTIENT = "m/(s+1/2)"


class TowerComparison(BaseModel):
    model_config = ConfigDict(frozen=True)

    mode: int
    spin: str
    energy: float
    product: float
    quotient: float

    @property
    def matches(self) -> List[TowerConvention]:
        out = []
        if abs(self.energy - self.product) <= 1e-9:
            out.append(TowerConvention.PRODUCT)
        if abs(self.energy - self.quotient) <= 1e-9:
            out.append(TowerConvention.QUOTIENT)
        return out


class BilinearSpectrum(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    energies: np.ndarray = Field(description="Ascending single-mode energies")
    modes: np.ndarray = Field(description="Unitary with h = V diag(energies) V^dag")
    tower: List[TowerComparison] = Field(default_factory=list)


def diagonalize_bilinear(
    hamiltonian: Union[BilinearHamiltonian, np.ndarray],
    spins: Optional[Sequence[SpinLike]] = None,
    mass: float = 1.0,
) -> BilinearSpectrum:
    """
    Diagonalize h into sum eps_k n_k.

    When ``spins`` are given, every eps_k is compared against both tower conventions,
    M(s_k + 1/2) and m/(s_k + 1/2).

    Raises:
        ValidationError: For a non-Hermitian h, or pairing / interaction terms
    """
    if not isinstance(hamiltonian, BilinearHamiltonian):
        hamiltonian = BilinearHamiltonian(h=validate_hermitian(hamiltonian, tol=1e-12, name="h"))
    if not hamiltonian.quadratic:
        raise ValidationError(
            "Pairing and interaction terms are not quadratic in a, a^dag; the bilinear solver does not support them",
            details={"interaction": hamiltonian.interaction},
        )
    h = np.asarray(hamiltonian.h, dtype=complex)
    energies, modes = eigh(h)

    tower: List[TowerComparison] = []
    if spins is not None:
        if len(spins) != len(energies):
            raise ValidationError(f"Need one spin per mode: {len(energies)} modes, {len(spins)} spins")
        for k, (eps, s) in enumerate(zip(energies, spins)):
            half = float(as_half_integer(s)) + 0.5
            tower.append(
                TowerComparison(mode=k, spin=str(as_half_integer(s)), energy=float(eps), product=mass * half, quotient=mass / half)
            )
    return BilinearSpectrum(energies=energies, modes=modes, tower=tower)


def bilinear_audit(h: np.ndarray, spectrum: Optional[BilinearSpectrum] = None) -> AuditReport:
    spectrum = spectrum or diagonalize_bilinear(h)
    v = spectrum.modes
    rebuilt = v @ np.diag(spectrum.energies) @ v.conj().T
    checks = [
        ResidualCheck(name="mode transform unitary", residual=max_abs(v.conj().T @ v - np.eye(len(v))), tolerance=1e-12),
        ResidualCheck(name="h = V eps V^dag", residual=max_abs(rebuilt - h), tolerance=1e-10),
        ResidualCheck(name="trace conservation", residual=abs(np.sum(spectrum.energies) - np.trace(h).real), tolerance=1e-10),
    ]
    findings = [
        Finding(
            item=f"mode {row.mode} (s={row.spin})",
            printed={"product": row.product, "quotient": row.quotient},
            computed=row.energy,
            severity=Severity.INFO if row.matches else Severity.MISMATCH,
            note=", ".join(c.value for c in row.matches) or "matches neither tower convention",
        )
        for row in spectrum.tower
    ]
    return AuditReport(suite="bilinear_hamiltonian", checks=checks, findings=findings)


def tight_binding_h(
    omega: Sequence[float],
    j: float,
    lam: Union[float, Sequence[float]] = 0.0,
) -> np.ndarray:
    """
    Single-particle h on sites carrying an (L, R) polarization pair.

    h = (diag(omega) + J * nearest-neighbour hopping) (x) 1 + diag(lambda) (x) sigma_z
    """
    omega = np.asarray(omega, dtype=float)
    n = omega.size
    if n < 1:
        raise ValidationError("Need at least one site")
    lam = np.broadcast_to(np.asarray(lam, dtype=float), (n,))
    hop = np.diag(omega) + j * (np.eye(n, k=1) + np.eye(n, k=-1))
    return np.kron(hop, I2) + np.kron(np.diag(lam), PAULI_Z)


# Cyclic parafermion chain


class CyclicParafermionChain(BaseModel):
    """Four sites with a_{k+4} = a_k, on-site omega and hopping g."""
    model_config = ConfigDict(frozen=True)

    omega: float = 0.0
    g: float = 1.0

    @property
    def phases(self) -> Tuple[float, ...]:
        return tuple(math.pi * k / 2 for k in range(4))

    def hamiltonian(self) -> np.ndarray:
        shift = np.roll(np.eye(4), 1, axis=0)
        return self.omega * np.eye(4) + self.g * (shift + shift.T)

    def phase_hamiltonian(self) -> np.ndarray:
        return self.hamiltonian() + phase_hamiltonian()

    def spectrum(self) -> np.ndarray:
        return eigvalsh(self.hamiltonian())

    def analytic_spectrum(self) -> np.ndarray:
        return np.sort([self.omega + 2 * self.g * math.cos(math.pi * k / 2) for k in range(4)])


def cyclic_spectrum(omega: float, g: float) -> np.ndarray:
    """Ascending eigenvalues of omega 1 + g (S + S^T): {omega - 2g, omega, omega, omega + 2g}."""
    return CyclicParafermionChain(omega=omega, g=g).spectrum()


def cyclic_audit(rng: np.random.Generator, samples: int = 100, tol: float = 1e-12) -> AuditReport:
    worst = 0.0
    for _ in range(samples):
        chain = CyclicParafermionChain(omega=float(rng.normal()), g=float(rng.normal()))
        worst = max(worst, max_abs(chain.spectrum() - chain.analytic_spectrum()))
    return AuditReport(
        suite="cyclic_chain",
        checks=[ResidualCheck(name=f"circulant spectrum, {samples} draws", residual=worst, tolerance=tol)],
    )


def entropy_curve(correlations: np.ndarray, lengths: Sequence[int]) -> Dict[int, float]:
    return {length: entanglement_entropy(correlations, length) for length in lengths}
