import math

import numpy as np
import pytest

from paragraded.core.exceptions import ValidationError
from paragraded.fracnoise import (
    DiagnosticReport,
    Provenance,
    arfima_autocorrelation,
    arfima_coeffs,
    circulant_eigenvalues,
    correction_unitary,
    diagnostic_and_correct,
    fbm_config,
    fbm_covariance,
    fbm_generate_exact,
    fgn_autocovariance,
    fgn_generate_arfima,
    fgn_generate_circulant,
    fracnoise_audit,
    fractional_laplacian,
    gamma_kernel,
    gaussian_quantum_potential,
    hurst_estimate,
    hurst_from_levy_index,
    quantum_potential,
    sample_paths,
)
from paragraded.grading import G01, G10


@pytest.mark.unit
class TestCovariance:
    @pytest.mark.parametrize("hurst", [0.2, 0.5, 0.8])
    def test_diagonal_is_variance(self, hurst):
        t = np.array([0.5, 1.0, 3.0])
        assert np.allclose(fbm_covariance(t, t, hurst), t ** (2 * hurst))

    def test_brownian_covariance_is_min(self):
        t, s = np.meshgrid(np.arange(1.0, 6.0), np.arange(1.0, 6.0))
        assert np.allclose(fbm_covariance(t, s, 0.5), np.minimum(t, s))

    def test_negative_time_rejected(self):
        with pytest.raises(ValidationError):
            fbm_covariance(-1.0, 1.0, 0.7)

    def test_increment_autocovariance(self):
        assert fgn_autocovariance(0, 0.7) == pytest.approx(1.0)
        assert fgn_autocovariance(1, 0.7) == pytest.approx(0.5 * (2**1.4 - 2))
        assert fgn_autocovariance(3, 0.3) == pytest.approx(fgn_autocovariance(-3, 0.3))

    def test_gamma_kernel(self):
        assert gamma_kernel(2.0, 0.75) == pytest.approx(0.75 * 0.5 * 2**-0.5)
        with pytest.raises(ValidationError):
            gamma_kernel(0.0, 0.75)

    def test_levy_index(self):
        assert hurst_from_levy_index(1.4) == pytest.approx(0.7)
        with pytest.raises(ValidationError):
            hurst_from_levy_index(0.0)


@pytest.mark.unit
class TestGenerators:
    def test_fixed_seed_reproduces_exact_path(self):
        config = fbm_config(0.7, 64, seed=11)
        first = fbm_generate_exact(config)
        second = fbm_generate_exact(config)
        assert np.array_equal(first.values, second.values)
        assert first.provenance == Provenance.EXACT.value

    def test_different_seeds_differ(self):
        a = fbm_generate_exact(fbm_config(0.7, 64, seed=1))
        b = fbm_generate_exact(fbm_config(0.7, 64, seed=2))
        assert not np.array_equal(a.values, b.values)

    def test_invalid_hurst_rejected(self):
        with pytest.raises(ValidationError):
            fbm_config(1.2, 64, seed=0)
        with pytest.raises(ValidationError):
            fbm_config(0.5, 1, seed=0)

    def test_times_and_csv(self):
        path = fbm_generate_exact(fbm_config(0.3, 8, dt=0.5, seed=0))
        assert path.times.tolist() == pytest.approx([0.5 * k for k in range(1, 9)])
        lines = path.to_csv().splitlines()
        assert lines[0] == "t,value"
        assert len(lines) == 9

    def test_increments_rebuild_the_path(self):
        path = fbm_generate_exact(fbm_config(0.6, 32, seed=3))
        assert np.allclose(np.cumsum(path.increments), path.values)

    @pytest.mark.parametrize("hurst", [0.1, 0.3, 0.5, 0.7, 0.9])
    def test_circulant_embedding_non_negative(self, hurst):
        assert circulant_eigenvalues(512, hurst).min() > -1e-10

    def test_circulant_path_shape(self):
        path = fgn_generate_circulant(fbm_config(0.7, 100, seed=4))
        assert path.values.shape == (100,)
        assert path.provenance == "circulant"

    def test_arfima_provenance_names_truncation(self):
        path = fgn_generate_arfima(fbm_config(0.7, 100, seed=4), j_max=256)
        assert path.provenance == "arfima(256)"

    def test_sample_paths_are_independent_and_reproducible(self):
        config = fbm_config(0.4, 32, seed=9)
        first = sample_paths(config, 3)
        again = sample_paths(config, 3)
        assert all(np.array_equal(a.values, b.values) for a, b in zip(first, again))
        assert not np.array_equal(first[0].values, first[1].values)

    def test_sample_paths_needs_a_path(self):
        with pytest.raises(ValidationError):
            sample_paths(fbm_config(0.4, 32, seed=9), 0)

    @pytest.mark.slow
    @pytest.mark.parametrize("method", [Provenance.EXACT, Provenance.CIRCULANT])
    def test_endpoint_variance(self, method):
        config = fbm_config(0.7, 32, seed=5)
        ends = np.array([p.values[-1] for p in sample_paths(config, 4000, method)])
        expected = 32**1.4
        assert np.var(ends) == pytest.approx(expected, rel=0.1)

    @pytest.mark.slow
    @pytest.mark.parametrize("hurst", [0.3, 0.5, 0.7])
    def test_exact_sample_covariance(self, hurst):
        n, count = 128, 20000
        paths = sample_paths(fbm_config(hurst, n, seed=17), count)
        values = np.array([p.values for p in paths])
        pairs = [(0, 0), (0, n - 1), (15, 63), (31, n - 1), (47, 95), (63, 63), (100, 120), (n - 1, n - 1)]
        for i, j in pairs:
            t, s = i + 1.0, j + 1.0
            expected = fbm_covariance(t, s, hurst)
            sample = float(np.mean(values[:, i] * values[:, j]))
            stderr = math.sqrt((t ** (2 * hurst) * s ** (2 * hurst) + expected**2) / count)
            assert abs(sample - expected) <= 4 * stderr, (i, j)


@pytest.mark.unit
class TestArfima:
    def test_recurrence_start(self):
        coeffs = arfima_coeffs(0.7, 64)
        assert coeffs.psi[0] == 1.0
        assert coeffs.psi[1] == pytest.approx(0.2)
        assert coeffs.truncation == 64

    def test_tail_ratio(self):
        hurst = 0.7
        coeffs = arfima_coeffs(hurst, 1024)
        assert coeffs.psi[1024] / coeffs.psi[512] == pytest.approx(2 ** (hurst - 1.5), rel=0.02)

    def test_short_truncation_rejected(self):
        with pytest.raises(ValidationError):
            arfima_coeffs(0.7, 10)

    def test_autocorrelation_lag_one(self):
        d = 0.2
        assert arfima_autocorrelation(4, 0.7)[1] == pytest.approx(d / (1 - d))


@pytest.mark.unit
class TestHurstEstimate:
    def test_short_path_rejected(self):
        with pytest.raises(ValidationError):
            hurst_estimate(np.arange(100.0))

    def test_constant_increments_rejected(self):
        with pytest.raises(ValidationError):
            hurst_estimate(np.zeros(512))

    def test_frequency_count(self):
        path = fgn_generate_circulant(fbm_config(0.5, 1024, seed=2))
        estimate = hurst_estimate(path, bootstrap=20)
        assert estimate.frequencies == int(math.floor(1024**0.6))
        assert estimate.stderr > 0

    def test_white_noise_is_half(self, rng):
        paths = [np.cumsum(rng.standard_normal(4096)) for _ in range(16)]
        mean = np.mean([hurst_estimate(p, bootstrap=0).hurst for p in paths])
        assert mean == pytest.approx(0.5, abs=0.05)

    def test_invariant_under_scaling(self, rng):
        path = np.cumsum(rng.standard_normal(1024))
        base = hurst_estimate(path, bootstrap=0)
        scaled = hurst_estimate(10.0 * path, bootstrap=0)
        assert scaled.hurst == pytest.approx(base.hurst, abs=1e-12)

    @pytest.mark.slow
    @pytest.mark.parametrize("hurst", [0.3, 0.7])
    def test_recovers_hurst(self, hurst):
        paths = sample_paths(fbm_config(hurst, 4096, seed=21), 16, Provenance.CIRCULANT)
        mean = np.mean([hurst_estimate(p, bootstrap=0).hurst for p in paths])
        assert mean == pytest.approx(hurst, abs=0.05)


@pytest.mark.unit
class TestFractionalLaplacian:
    def test_plane_wave_eigenvalue(self):
        n, length = 128, 2 * math.pi
        x = length * np.arange(n) / n
        wave = np.exp(5j * x)
        assert np.allclose(fractional_laplacian(wave, 0.6, length / n), 5**1.2 * wave)

    def test_constant_maps_to_zero(self):
        assert np.allclose(fractional_laplacian(np.full(64, 3.0), 0.8), 0.0)

    def test_real_input_gives_real_output(self):
        out = fractional_laplacian(np.cos(2 * math.pi * np.arange(32) / 32), 0.5)
        assert not np.iscomplexobj(out)

    def test_grid_must_be_power_of_two(self):
        with pytest.raises(ValidationError):
            fractional_laplacian(np.ones(48), 0.5)

    def test_linear(self, rng):
        f, g = rng.standard_normal(64), rng.standard_normal(64)
        combined = fractional_laplacian(2.5 * f - 0.75 * g, 0.7)
        expected = 2.5 * fractional_laplacian(f, 0.7) - 0.75 * fractional_laplacian(g, 0.7)
        assert np.allclose(combined, expected, atol=1e-12)

    @pytest.mark.parametrize("shift", [1, 5, 37])
    def test_commutes_with_translation(self, rng, shift):
        f = rng.standard_normal(64)
        shifted = fractional_laplacian(np.roll(f, shift), 0.3)
        assert np.allclose(shifted, np.roll(fractional_laplacian(f, 0.3), shift), atol=1e-12)

    def test_matches_finite_differences_at_h1(self):
        n = 1024
        dx = 2 * math.pi / n
        f = np.exp(np.sin(dx * np.arange(n)))
        stencil = -(np.roll(f, -1) - 2 * f + np.roll(f, 1)) / dx**2
        assert np.max(np.abs(fractional_laplacian(f, 1.0, dx) - stencil)) <= 1e-3


@pytest.mark.unit
class TestQuantumPotential:
    def test_uniform_density(self):
        assert np.allclose(quantum_potential(np.ones(64), 0.7), 0.0)

    def test_scale_invariance(self):
        x = 2 * math.pi * np.arange(128) / 128
        rho = 1.5 + np.sin(x)
        assert np.allclose(quantum_potential(rho, 0.4, x[1]), quantum_potential(4.0 * rho, 0.4, x[1]))

    def test_gaussian_closed_form_at_h1(self):
        n, length, sigma = 1024, 17.0, 1.0
        x = length * (np.arange(n) / n - 0.5)
        rho = np.exp(-(x**2) / (2 * sigma**2))
        q = quantum_potential(rho, 1.0, length / n)
        interior = np.abs(x) <= 0.4 * length
        assert np.allclose(q[interior], gaussian_quantum_potential(x[interior], sigma), atol=1e-3)

    @pytest.mark.parametrize(
        "density",
        [
            lambda x: 1.5 + np.sin(x),
            lambda x: np.exp(np.cos(x)),
            lambda x: 2.0 + np.cos(2 * x) + 0.5 * np.sin(3 * x),
        ],
    )
    def test_matches_second_derivative_stencil_at_h1(self, density):
        n = 1024
        dx = 2 * math.pi / n
        rho = density(dx * np.arange(n))
        amplitude = np.sqrt(rho / (rho.sum() * dx))
        eye = np.eye(n)
        second = (np.roll(eye, 1, axis=1) - 2 * eye + np.roll(eye, -1, axis=1)) / dx**2
        expected = 0.5 * (second @ amplitude) / amplitude
        assert np.allclose(quantum_potential(rho, 1.0, dx), expected, atol=1e-3)

    def test_negative_density_rejected(self):
        with pytest.raises(ValidationError):
            quantum_potential(np.array([1.0, -0.1, 1.0, 1.0]), 0.5)

    def test_zero_mass_rejected(self):
        with pytest.raises(ValidationError):
            quantum_potential(np.zeros(8), 0.5)


@pytest.mark.unit
class TestDiagnostic:
    def test_quiet_when_equal(self):
        q = np.linspace(0, 1, 8)
        report = diagnostic_and_correct(q, q, 0.1, G01, gain=1.0)
        assert not report.triggered
        assert report.theta == 0.0
        assert np.allclose(report.correction, np.eye(4))

    def test_triggers_at_twice_threshold(self):
        eps = 0.05
        expected = np.zeros(4)
        report = diagnostic_and_correct(expected + eps, expected, eps, G10, gain=1.0)
        assert report.norm == pytest.approx(2 * eps)
        assert report.triggered
        assert report.theta == pytest.approx(2 * eps)
        assert np.allclose(np.diag(report.correction), np.exp(-1j * 2 * eps * np.arange(4)))

    def test_theta_is_clamped(self):
        report = diagnostic_and_correct(np.full(4, 100.0), np.zeros(4), 0.1, G01, gain=10.0)
        assert report.theta == pytest.approx(math.pi)

    def test_gain_from_config(self, clean_env, monkeypatch):
        monkeypatch.setenv("PARAGRADED_CORRECTION_GAIN", "0.5")
        report = diagnostic_and_correct(np.full(4, 0.5), np.zeros(4), 0.1, G01)
        assert report.theta == pytest.approx(0.5)

    def test_grid_mismatch(self):
        with pytest.raises(ValidationError):
            diagnostic_and_correct(np.zeros(4), np.zeros(5), 0.1, G01)

    def test_threshold_must_be_positive(self):
        with pytest.raises(ValidationError):
            diagnostic_and_correct(np.zeros(4), np.zeros(4), 0.0, G01)

    def test_trigger_rule_enforced(self):
        with pytest.raises(Exception):
            DiagnosticReport(
                delta=np.zeros(2),
                norm=0.0,
                threshold=0.1,
                triggered=True,
                grade=G01,
                theta=0.0,
                correction=correction_unitary(0.0, 4),
            )

    def test_csv(self):
        report = diagnostic_and_correct(np.ones(4), np.zeros(4), 0.1, G01, gain=1.0)
        assert report.to_csv().splitlines()[0] == "x,delta_q"
        assert "TRIGGERED" in report.summary()


@pytest.mark.unit
def test_fracnoise_audit_passes():
    report = fracnoise_audit()
    assert report.passed, [c for c in report.checks if not c.passed]
