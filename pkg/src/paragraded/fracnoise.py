"""
Fractional noise
================

Fractional Brownian motion generators (exact Cholesky, Davies-Harte circulant
embedding, truncated ARFIMA), a log-periodogram Hurst estimator, the spectral
fractional Laplacian, the fractional quantum potential and the Delta-Q diagnostic
that triggers a grade-sector correction unitary.

Randomness always comes from an explicit seed. Batches derive one child seed per
path from the master seed through ``numpy.random.SeedSequence.spawn``.
"""

import logging
import math
from enum import Enum
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.linalg import LinAlgError, cholesky
from scipy.signal import lfilter

from .core.exceptions import NumericalError, ValidationError
from .core.validators import build_model, validate_power_of_two
from .grading import Grade
from .models.reports import AuditReport, ResidualCheck
from .utils.config import Config
from .utils.export import table_to_csv
from .utils.linalg import max_abs

logger = logging.getLogger(__name__)

EXACT_MAX_SAMPLES = 4096
MIN_ARFIMA_TERMS = 64
MIN_HURST_SAMPLES = 256
DENSITY_FLOOR = 1e-12


class Provenance(str, Enum):
    EXACT = "exact"
    CIRCULANT = "circulant"
    ARFIMA = "arfima"


class FbmConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    hurst: float = Field(gt=0.0, lt=1.0)
    n: int = Field(ge=2, description="Sample count")
    dt: float = Field(default=1.0, gt=0.0)
    seed: int = Field(default=0, ge=0, lt=2**64)


class FbmPath(BaseModel):
    """Samples B_H(k dt) for k = 1..n."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    times: np.ndarray
    values: np.ndarray
    hurst: float
    provenance: str
    seed: int

    @property
    def increments(self) -> np.ndarray:
        return np.diff(self.values, prepend=0.0)

    def to_csv(self, target: Union[str, Path, None] = None) -> str:
        return table_to_csv(["t", "value"], zip(self.times.tolist(), self.values.tolist()), target)


def fbm_config(hurst: float, n: int, dt: float = 1.0, seed: Optional[int] = None) -> FbmConfig:
    seed = Config(load_env_file=False).seed if seed is None else seed
    return build_model(FbmConfig, hurst=hurst, n=n, dt=dt, seed=seed)


def fbm_covariance(t, s, hurst: float):
    """E[B_H(t) B_H(s)] = (t^2H + s^2H - |t-s|^2H) / 2."""
    t, s = np.asarray(t, dtype=float), np.asarray(s, dtype=float)
    if np.any(t < 0) or np.any(s < 0):
        raise ValidationError("fBm covariance needs non-negative times")
    h2 = 2 * hurst
    return 0.5 * (t**h2 + s**h2 - np.abs(t - s) ** h2)


def fgn_autocovariance(k, hurst: float):
    """Unit-step increment autocovariance, even in the lag k."""
    k = np.abs(np.asarray(k, dtype=float))
    h2 = 2 * hurst
    return 0.5 * (np.abs(k + 1) ** h2 - 2 * k**h2 + np.abs(k - 1) ** h2)


def gamma_kernel(tau, hurst: float):
    """H (2H - 1) |tau|^(2H-2), the continuum noise kernel away from tau = 0."""
    tau = np.asarray(tau, dtype=float)
    if np.any(tau == 0):
        raise ValidationError("gamma_kernel is singular at tau = 0")
    return hurst * (2 * hurst - 1) * np.abs(tau) ** (2 * hurst - 2)


def hurst_from_levy_index(alpha: float) -> float:
    if not 0 < alpha <= 2:
        raise ValidationError(f"Stability index must lie in (0, 2], got {alpha}")
    return alpha / 2


def _times(config: FbmConfig) -> np.ndarray:
    return config.dt * np.arange(1, config.n + 1)


def _cholesky_factor(config: FbmConfig) -> np.ndarray:
    if config.n > EXACT_MAX_SAMPLES:
        raise ValidationError(f"Exact generator limited to n <= {EXACT_MAX_SAMPLES}, got {config.n}")
    t = _times(config)
    cov = fbm_covariance(t[:, None], t[None, :], config.hurst)
    try:
        return cholesky(cov, lower=True)
    except LinAlgError as e:
        # scipy names the failing leading minor in the message
        raise NumericalError(
            f"fBm covariance is not numerically positive definite at H={config.hurst}: {e}",
            details={"hurst": config.hurst, "n": config.n, "pivot": str(e)},
        ) from e


def fbm_generate_exact(config: FbmConfig, rng: Optional[np.random.Generator] = None) -> FbmPath:
    """Exact-covariance path from the Cholesky factor of the covariance matrix."""
    rng = rng or np.random.default_rng(config.seed)
    values = _cholesky_factor(config) @ rng.standard_normal(config.n)
    return FbmPath(times=_times(config), values=values, hurst=config.hurst, provenance=Provenance.EXACT.value, seed=config.seed)


def circulant_eigenvalues(n: int, hurst: float) -> np.ndarray:
    row = fgn_autocovariance(np.arange(n + 1), hurst)
    embedding = np.concatenate([row, row[-2:0:-1]])
    return np.fft.fft(embedding).real


def fgn_generate_circulant(config: FbmConfig, rng: Optional[np.random.Generator] = None) -> FbmPath:
    """
    Davies-Harte generator: embed the increment autocovariance in a 2n circulant.

    Raises:
        NumericalError: If the embedding has a negative eigenvalue
    """
    rng = rng or np.random.default_rng(config.seed)
    n = config.n
    lam = circulant_eigenvalues(n, config.hurst)
    if lam.min() < -1e-10:
        raise NumericalError("Circulant embedding is not non-negative definite", details={"min_eigenvalue": float(lam.min())})
    z = rng.standard_normal(2 * n) + 1j * rng.standard_normal(2 * n)
    noise = np.fft.fft(np.sqrt(np.clip(lam, 0.0, None) / (2 * n)) * z).real[:n]
    values = np.cumsum(noise) * config.dt**config.hurst
    return FbmPath(times=_times(config), values=values, hurst=config.hurst, provenance=Provenance.CIRCULANT.value, seed=config.seed)


class ArfimaCoeffs(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    d: float
    psi: np.ndarray = Field(description="psi_0 .. psi_J")

    @model_validator(mode="after")
    def _check_recurrence(self) -> "ArfimaCoeffs":
        if self.psi[0] != 1.0:
            raise ValueError("psi_0 must be 1")
        return self

    @property
    def truncation(self) -> int:
        return len(self.psi) - 1


def arfima_coeffs(hurst: float, j_max: int) -> ArfimaCoeffs:
    """MA weights of ARFIMA(0, d, 0), d = H - 1/2, via psi_j = psi_{j-1} (j - 1 + d) / j."""
    if j_max < MIN_ARFIMA_TERMS:
        raise ValidationError(f"ARFIMA truncation must be at least {MIN_ARFIMA_TERMS}, got {j_max}")
    if not 0 < hurst < 1:
        raise ValidationError(f"Hurst exponent must lie in (0, 1), got {hurst}")
    d = hurst - 0.5
    psi = np.empty(j_max + 1)
    psi[0] = 1.0
    for j in range(1, j_max + 1):
        psi[j] = psi[j - 1] * (j - 1 + d) / j
    return ArfimaCoeffs(d=d, psi=psi)


def arfima_autocorrelation(max_lag: int, hurst: float) -> np.ndarray:
    """rho(k) = rho(k-1) (k - 1 + d) / (k - d) for the untruncated process."""
    d = hurst - 0.5
    rho = np.empty(max_lag + 1)
    rho[0] = 1.0
    for k in range(1, max_lag + 1):
        rho[k] = rho[k - 1] * (k - 1 + d) / (k - d)
    return rho


def fgn_generate_arfima(config: FbmConfig, j_max: int = 1024, rng: Optional[np.random.Generator] = None) -> FbmPath:
    """Cumulative sum of the truncated MA filter applied to unit Gaussians, scaled to unit increment variance."""
    rng = rng or np.random.default_rng(config.seed)
    coeffs = arfima_coeffs(config.hurst, j_max)
    eps = rng.standard_normal(config.n + j_max)
    noise = lfilter(coeffs.psi, [1.0], eps)[j_max:]
    noise /= math.sqrt(float(np.sum(coeffs.psi**2)))
    values = np.cumsum(noise) * config.dt**config.hurst
    return FbmPath(
        times=_times(config),
        values=values,
        hurst=config.hurst,
        provenance=f"{Provenance.ARFIMA.value}({j_max})",
        seed=config.seed,
    )


def sample_paths(
    config: FbmConfig,
    n_paths: int,
    method: Union[str, Provenance] = Provenance.EXACT,
    j_max: int = 1024,
) -> List[FbmPath]:
    """Independent paths, path i seeded by the i-th spawned child of config.seed."""
    if n_paths < 1:
        raise ValidationError(f"n_paths must be positive, got {n_paths}")
    method = Provenance(method)
    children = np.random.SeedSequence(config.seed).spawn(n_paths)
    rngs = [np.random.default_rng(child) for child in children]

    if method is Provenance.EXACT:
        factor = _cholesky_factor(config)
        times = _times(config)
        return [
            FbmPath(times=times, values=factor @ rng.standard_normal(config.n), hurst=config.hurst, provenance=method.value, seed=config.seed)
            for rng in rngs
        ]
    if method is Provenance.CIRCULANT:
        return [fgn_generate_circulant(config, rng) for rng in rngs]
    return [fgn_generate_arfima(config, j_max, rng) for rng in rngs]


class HurstEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    hurst: float
    stderr: float
    slope: float
    frequencies: int


def hurst_estimate(
    path: Union[FbmPath, Sequence[float], np.ndarray],
    bootstrap: int = 200,
    seed: int = 0,
) -> HurstEstimate:
    """
    Log-periodogram regression on the lowest floor(n^0.6) Fourier frequencies.

    The increment spectrum behaves like lambda^(1-2H) near zero, so H = (1 - slope)/2.
    The standard error comes from a pairs bootstrap of the regression points.

    Raises:
        ValidationError: For short or constant paths
    """
    values = path.values if isinstance(path, FbmPath) else np.asarray(path, dtype=float)
    if values.size < MIN_HURST_SAMPLES:
        raise ValidationError(f"Hurst estimation needs at least {MIN_HURST_SAMPLES} samples, got {values.size}")
    x = np.diff(values, prepend=0.0)
    if np.ptp(x) == 0:
        raise ValidationError("Path is constant; the Hurst exponent is undefined")

    n = x.size
    m = int(math.floor(n**0.6))
    spectrum = np.abs(np.fft.rfft(x - x.mean())[1 : m + 1]) ** 2 / (2 * math.pi * n)
    log_freq = np.log(2 * math.pi * np.arange(1, m + 1) / n)
    log_power = np.log(spectrum)
    slope = float(np.polyfit(log_freq, log_power, 1)[0])

    rng = np.random.default_rng(seed)
    draws = np.empty(bootstrap)
    for b in range(bootstrap):
        idx = rng.integers(0, m, m)
        draws[b] = np.polyfit(log_freq[idx], log_power[idx], 1)[0]
    stderr = float(np.std((1 - draws) / 2, ddof=1)) if bootstrap > 1 else 0.0
    return HurstEstimate(hurst=(1 - slope) / 2, stderr=stderr, slope=slope, frequencies=m)


def wavenumbers(n: int, spacing: float) -> np.ndarray:
    return 2 * math.pi * np.fft.fftfreq(n, d=spacing)


def fractional_laplacian(f: Union[Sequence[complex], np.ndarray], hurst: float, spacing: float = 1.0) -> np.ndarray:
    """(-Delta)^H f = F^-1{|k|^2H F{f}} on a uniform periodic grid; the zero mode maps to 0."""
    arr = np.asarray(f)
    n = validate_power_of_two(arr, name="f")
    if spacing <= 0:
        raise ValidationError(f"Grid spacing must be positive, got {spacing}")
    k = np.abs(wavenumbers(n, spacing))
    multiplier = np.zeros(n)
    multiplier[1:] = k[1:] ** (2 * hurst)
    out = np.fft.ifft(multiplier * np.fft.fft(arr))
    return out if np.iscomplexobj(arr) else out.real


def quantum_potential(
    rho: Union[Sequence[float], np.ndarray],
    hurst: float,
    spacing: float = 1.0,
    hbar: float = 1.0,
    mass: float = 1.0,
    floor: float = DENSITY_FLOOR,
) -> np.ndarray:
    """
    Q = -(hbar^2 / 2m) (-Delta)^H sqrt(rho) / sqrt(rho).

    rho is normalized to unit sum * spacing; the floor applies to the divisor only.

    Raises:
        ValidationError: For a negative or empty density
    """
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise ValidationError("Density must be non-negative", details={"min": float(rho.min())})
    total = float(np.sum(rho)) * spacing
    if total <= 0:
        raise ValidationError("Density has zero mass")
    rho = rho / total
    amplitude = np.sqrt(rho)
    return -(hbar**2 / (2 * mass)) * fractional_laplacian(amplitude, hurst, spacing) / np.sqrt(np.maximum(rho, floor))


def gaussian_quantum_potential(x: np.ndarray, sigma: float, hbar: float = 1.0, mass: float = 1.0) -> np.ndarray:
    """Closed form at H = 1 for a centred Gaussian density of width sigma."""
    return (hbar**2 / (2 * mass)) * (x**2 / (4 * sigma**4) - 1 / (2 * sigma**2))


class DiagnosticReport(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    delta: np.ndarray = Field(description="Q_meas - Q_expected on the grid")
    norm: float = Field(ge=0.0, description="L2 norm of delta")
    threshold: float = Field(gt=0.0)
    triggered: bool
    grade: Grade
    theta: float = Field(ge=0.0, le=math.pi)
    correction: np.ndarray = Field(description="exp(-i theta n) on the sector number basis")

    @model_validator(mode="after")
    def _trigger_rule(self) -> "DiagnosticReport":
        if self.triggered != (self.norm > self.threshold):
            raise ValueError("triggered must equal norm > threshold")
        return self

    def to_csv(self, target: Union[str, Path, None] = None, spacing: float = 1.0) -> str:
        x = (spacing * np.arange(self.delta.size)).tolist()
        return table_to_csv(["x", "delta_q"], zip(x, self.delta.tolist()), target)

    def summary(self) -> str:
        state = "TRIGGERED" if self.triggered else "quiet"
        return f"sector {self.grade}: |dQ| = {self.norm:.4e} (eps {self.threshold:.2e}) {state}, theta = {self.theta:.6f}"


def correction_unitary(theta: float, levels: int) -> np.ndarray:
    return np.diag(np.exp(-1j * theta * np.arange(levels)))


def diagnostic_and_correct(
    q_meas: Union[Sequence[float], np.ndarray],
    q_expected: Union[Sequence[float], np.ndarray],
    threshold: float,
    grade: Grade,
    spacing: float = 1.0,
    levels: int = 4,
    gain: Optional[float] = None,
) -> DiagnosticReport:
    """
    Compare measured and expected potentials and build the sector correction.

    theta = clamp(gain * ||dQ||, 0, pi) when triggered, 0 otherwise. The gain
    defaults to PARAGRADED_CORRECTION_GAIN.

    Raises:
        ValidationError: For misaligned grids or a non-positive threshold
    """
    q_meas, q_expected = np.asarray(q_meas, dtype=float), np.asarray(q_expected, dtype=float)
    if q_meas.shape != q_expected.shape:
        raise ValidationError(f"Grid mismatch: {q_meas.shape} vs {q_expected.shape}")
    if threshold <= 0:
        raise ValidationError(f"Threshold must be positive, got {threshold}")
    gain = Config(load_env_file=False).correction_gain if gain is None else gain

    delta = q_meas - q_expected
    norm = float(np.sqrt(np.sum(delta**2) * spacing))
    triggered = norm > threshold
    theta = float(np.clip(gain * norm, 0.0, math.pi)) if triggered else 0.0
    if triggered:
        logger.info(f"Delta-Q diagnostic triggered in sector {grade}: norm {norm:.3e}, theta {theta:.4f}")
    return DiagnosticReport(
        delta=delta,
        norm=norm,
        threshold=threshold,
        triggered=triggered,
        grade=grade,
        theta=theta,
        correction=correction_unitary(theta, levels),
    )


def fracnoise_audit(tol: float = 1e-10) -> AuditReport:
    """Deterministic identities of the noise and potential machinery."""
    n, length = 256, 2 * math.pi
    x = length * np.arange(n) / n
    wave = np.exp(3j * x)
    plane = max_abs(fractional_laplacian(wave, 0.7, length / n) - 3**1.4 * wave)

    coeffs = arfima_coeffs(0.7, 64)
    recurrence = max(abs(coeffs.psi[j] - coeffs.psi[j - 1] * (j - 1 + coeffs.d) / j) for j in range(1, 65))

    lags = np.arange(1, 33)
    evenness = max_abs(fgn_autocovariance(lags, 0.3) - fgn_autocovariance(-lags, 0.3))
    brownian = max_abs(fgn_autocovariance(np.arange(0, 8), 0.5) - np.eye(8)[0])

    rho = 2 + np.cos(x)
    uniform = max_abs(quantum_potential(np.ones(n), 0.6, length / n))
    scaled = max_abs(quantum_potential(rho, 0.6, length / n) - quantum_potential(7.5 * rho, 0.6, length / n))

    checks = [
        ResidualCheck(name="plane-wave eigenvalue |k|^2H", residual=plane, tolerance=tol),
        ResidualCheck(name="psi recurrence", residual=recurrence, tolerance=1e-15),
        ResidualCheck(name="increment autocovariance even", residual=evenness, tolerance=1e-15),
        ResidualCheck(name="H=1/2 increments white", residual=brownian, tolerance=1e-15),
        ResidualCheck(name="uniform density Q = 0", residual=uniform, tolerance=tol),
        ResidualCheck(name="Q scale invariance", residual=scaled, tolerance=tol),
        ResidualCheck(
            name="circulant embedding non-negative",
            residual=max(0.0, -float(circulant_eigenvalues(1024, 0.3).min())),
            tolerance=1e-10,
        ),
    ]
    return AuditReport(suite="fracnoise", checks=checks)
