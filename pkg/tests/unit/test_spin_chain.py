import math

import numpy as np
import pytest

from paragraded.core.exceptions import NumericalError, ValidationError
from paragraded.spin_chain import (
    BilinearHamiltonian,
    Boundary,
    TowerConvention,
    XYChain,
    bilinear_algebra_residual,
    bilinear_audit,
    brute_force_correlations,
    brute_force_entropy,
    central_charge_fit,
    chord_length,
    cyclic_audit,
    cyclic_spectrum,
    diagonalize_bilinear,
    entanglement_entropy,
    ground_state_correlations,
    infinite_chain_correlations,
    jw_hopping_matrix,
    tight_binding_h,
    xy_audit,
)


@pytest.mark.unit
class TestXYChain:
    def test_boundary_sign_follows_half_filling(self):
        assert XYChain(n=8).boundary_sign == -1
        assert XYChain(n=6).boundary_sign == 1

    def test_hopping_matrix(self):
        t = jw_hopping_matrix(XYChain(n=8, j=0.5))
        assert t[0, 1] == 0.5
        assert t[0, 7] == -0.5
        open_t = jw_hopping_matrix(XYChain(n=8, boundary=Boundary.OPEN))
        assert open_t[0, 7] == 0.0

    def test_zero_coupling_rejected(self):
        with pytest.raises(Exception):
            XYChain(n=8, j=0.0)

    def test_half_filled_diagonal(self):
        c = ground_state_correlations(XYChain(n=16))
        assert np.allclose(np.diag(c), 0.5)
        assert np.allclose(c, c.conj().T)

    def test_odd_chain_rejected(self):
        with pytest.raises(ValidationError):
            ground_state_correlations(XYChain(n=7))

    def test_single_site_entropy_is_ln2(self):
        c = ground_state_correlations(XYChain(n=16))
        assert entanglement_entropy(c, 1) == pytest.approx(math.log(2), abs=1e-12)

    def test_entropy_is_symmetric(self):
        c = ground_state_correlations(XYChain(n=12))
        assert entanglement_entropy(c, 3) == pytest.approx(entanglement_entropy(c, 9), abs=1e-10)

    def test_interval_bounds(self):
        c = ground_state_correlations(XYChain(n=8))
        with pytest.raises(ValidationError):
            entanglement_entropy(c, 0)
        with pytest.raises(ValidationError):
            entanglement_entropy(c, 8)

    def test_infinite_chain_correlations(self):
        c = infinite_chain_correlations(5)
        assert np.allclose(np.diag(c), 0.5)
        assert c[0, 1] == pytest.approx(1 / math.pi)
        assert c[0, 2] == pytest.approx(0.0, abs=1e-16)


@pytest.mark.unit
class TestExactDiagonalization:
    def test_correlations_match_ed(self):
        c = ground_state_correlations(XYChain(n=8))
        assert np.max(np.abs(c - brute_force_correlations(8))) <= 1e-10

    @pytest.mark.parametrize("length", range(1, 8))
    def test_entropy_matches_ed(self, length):
        c = ground_state_correlations(XYChain(n=8))
        assert entanglement_entropy(c, length) == pytest.approx(brute_force_entropy(8, length), abs=1e-8)

    def test_n6_periodic_sector(self):
        c = ground_state_correlations(XYChain(n=6))
        assert np.max(np.abs(c - brute_force_correlations(6))) <= 1e-10

    def test_bilinear_relations(self):
        assert bilinear_algebra_residual(3) <= 1e-12

    def test_audit(self):
        report = xy_audit(8)
        assert report.passed, [c for c in report.checks if not c.passed]


@pytest.mark.unit
class TestCentralCharge:
    def test_chord_length(self):
        assert chord_length(8, 4) == pytest.approx(8 / math.pi)

    def test_moderate_chain(self):
        fit = central_charge_fit(64, 4, 32)
        assert 0.9 <= fit.central_charge <= 1.1
        assert fit.lengths == list(range(4, 33))

    @pytest.mark.slow
    def test_large_chain(self):
        fit = central_charge_fit(256, 8, 128)
        assert 0.95 <= fit.central_charge <= 1.05
        assert fit.summary().splitlines()[-1].startswith("c = ")

    def test_short_range_rejected(self):
        with pytest.raises(ValidationError):
            central_charge_fit(64, 4, 7)

    def test_range_beyond_half_rejected(self):
        with pytest.raises(ValidationError):
            central_charge_fit(16, 4, 12)

    def test_lengths_below_four_rejected(self):
        with pytest.raises(ValidationError):
            central_charge_fit(64, 1, 16)

    def test_flat_entropy_is_numerical_error(self):
        with pytest.raises(NumericalError) as info:
            central_charge_fit(32, 4, 12, correlations=np.zeros((32, 32)))
        assert info.value.exit_code == 3

    def test_csv_columns(self):
        fit = central_charge_fit(32, 4, 12)
        lines = fit.to_csv().splitlines()
        assert lines[0] == "l,chord,S"
        assert len(lines) == 10


@pytest.mark.unit
class TestBilinear:
    def test_two_mode_hopping(self):
        spectrum = diagonalize_bilinear(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert spectrum.energies.tolist() == pytest.approx([-1.0, 1.0])

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValidationError):
            diagonalize_bilinear(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_pairing_rejected(self):
        h = BilinearHamiltonian(h=np.eye(2), pairing=np.ones((2, 2)))
        assert not h.quadratic
        with pytest.raises(ValidationError):
            diagonalize_bilinear(h)

    def test_interaction_rejected(self):
        with pytest.raises(ValidationError):
            diagonalize_bilinear(BilinearHamiltonian(h=np.eye(2), interaction=0.5))

    def test_tower_conventions(self):
        spectrum = diagonalize_bilinear(np.diag([1.0, 2.0]), spins=["1/2", 0])
        first, second = spectrum.tower
        assert set(first.matches) == {TowerConvention.PRODUCT, TowerConvention.QUOTIENT}
        assert second.matches == [TowerConvention.QUOTIENT]

    def test_spin_count_checked(self):
        with pytest.raises(ValidationError):
            diagonalize_bilinear(np.eye(2), spins=["1/2"])

    def test_audit_reports_tower_findings(self, rng):
        a = rng.normal(size=(4, 4))
        h = a + a.T
        report = bilinear_audit(h, diagonalize_bilinear(h, spins=[0, "1/2", 1, "3/2"]))
        assert report.passed
        assert len(report.findings) == 4

    def test_tight_binding_doubles_levels(self):
        h = tight_binding_h([0.0, 0.0, 0.0], 1.0)
        energies = diagonalize_bilinear(h).energies
        assert np.allclose(energies[::2], energies[1::2])

    def test_polarization_splitting(self):
        h = tight_binding_h([0.0], 0.0, lam=0.3)
        assert diagonalize_bilinear(h).energies.tolist() == pytest.approx([-0.3, 0.3])


@pytest.mark.unit
class TestCyclicChain:
    def test_pure_hopping(self):
        assert cyclic_spectrum(0.0, 1.0).tolist() == pytest.approx([-2.0, 0.0, 0.0, 2.0], abs=1e-12)

    def test_on_site_and_hopping(self):
        assert cyclic_spectrum(1.0, 0.5).tolist() == pytest.approx([0.0, 1.0, 1.0, 2.0], abs=1e-12)

    def test_no_hopping(self):
        assert cyclic_spectrum(0.7, 0.0).tolist() == pytest.approx([0.7] * 4)

    def test_random_draws(self, rng):
        assert cyclic_audit(rng, samples=50).passed
