import math
from fractions import Fraction

import numpy as np
import pytest

from paragraded.core.exceptions import ValidationError
from paragraded.para_fock import (
    RepKind,
    bosonic_limit_error,
    build_deformed_ladder,
    build_green_paraboson,
    build_parafermion,
    commutator_audit,
    deformed_factorial,
    export_rep_csv,
    ladder_coefficients,
    ladder_invariants_audit,
    number_operator,
    occupancy_weight,
    parafermion_anticommutator_audit,
    trilinear_residual,
    two_mode_factorial,
)
from paragraded.utils.linalg import anticommutator


@pytest.mark.unit
class TestDeformedFactorial:
    def test_small_values(self):
        assert deformed_factorial(0, 3) == 1
        assert deformed_factorial(1, 7) == 1
        assert deformed_factorial(2, 2) == 3

    def test_infinite_order_is_the_factorial(self):
        assert deformed_factorial(3, math.inf) == 6
        assert deformed_factorial(5, math.inf) == math.factorial(5)

    def test_large_order_approaches_factorial(self):
        assert float(deformed_factorial(3, 10**9)) == pytest.approx(6.0, rel=1e-8)

    def test_two_mode_factorial_is_a_product(self):
        assert two_mode_factorial(2, 3, 4) == deformed_factorial(2, 4) * deformed_factorial(3, 4)

    def test_exact_rational(self):
        assert deformed_factorial(3, 4) == Fraction(1) * Fraction(5, 2) * Fraction(9, 2)

    def test_occupancy_weight(self):
        assert occupancy_weight(1, 5) == 1.0
        assert occupancy_weight(3, 4) == pytest.approx((1 - 1 / 4) * (1 - 2 / 4))

    @pytest.mark.parametrize("n, p", [(-1, 2), (2, 0), (2, -3)])
    def test_invalid_arguments(self, n, p):
        with pytest.raises(ValidationError):
            deformed_factorial(n, p)


@pytest.mark.unit
class TestLadderCoefficients:
    def test_vacuum(self):
        raise_coeff, lower_coeff = ladder_coefficients(0, 5)
        assert raise_coeff == 1.0
        assert lower_coeff == 0.0

    @pytest.mark.parametrize("n", range(8))
    @pytest.mark.parametrize("p", [1, 2, 3, 10])
    def test_raise_squared_formula(self, n, p):
        raise_coeff, _ = ladder_coefficients(n, p)
        assert raise_coeff**2 - (n + 1 + n * (n + 1) / p) == pytest.approx(0.0, abs=1e-12)

    def test_lower_is_shifted_raise(self):
        for n in range(1, 10):
            assert ladder_coefficients(n, 3)[1] == pytest.approx(ladder_coefficients(n - 1, 3)[0])

    def test_bosonic_limit(self):
        raise_coeff, lower_coeff = ladder_coefficients(4, math.inf)
        assert raise_coeff == pytest.approx(math.sqrt(5))
        assert lower_coeff == pytest.approx(2.0)


@pytest.mark.unit
class TestRepresentations:
    def test_green_p1_is_the_canonical_boson(self):
        rep = build_green_paraboson(1, cutoff=10)
        assert np.allclose(np.diag(rep.lower, 1), np.sqrt(np.arange(1, 11)))

    def test_green_alternating_coefficients(self):
        rep = build_green_paraboson(3, cutoff=6)
        expected = [math.sqrt(3), math.sqrt(2), math.sqrt(5), math.sqrt(4), math.sqrt(7), math.sqrt(6)]
        assert np.allclose(np.diag(rep.lower, 1), expected)

    def test_parafermion_p1_is_the_fermion(self):
        rep = build_parafermion(1)
        assert rep.lower.shape == (2, 2)
        assert np.allclose(anticommutator(rep.lower, rep.raising), np.eye(2))

    def test_parafermion_occupation_cap(self):
        rep = build_parafermion(4)
        assert rep.kind is RepKind.PARAFERMION
        assert not np.any(np.linalg.matrix_power(rep.raising, 5))
        assert np.any(np.linalg.matrix_power(rep.raising, 4))

    def test_number_operator_is_occupation(self):
        rep = build_green_paraboson(2, cutoff=5)
        assert np.array_equal(np.diag(number_operator(rep)), np.arange(6))

    def test_cutoff_from_config(self, config):
        assert build_deformed_ladder(3, config=config).cutoff == config.cutoff

    def test_small_cutoff_rejected(self):
        with pytest.raises(ValidationError):
            build_green_paraboson(2, cutoff=1)

    def test_lower_matrix_is_read_only(self):
        rep = build_parafermion(2)
        with pytest.raises(ValueError):
            rep.lower[0, 1] = 0.0

    def test_csv_export(self):
        text = export_rep_csv(build_parafermion(2))
        assert text.splitlines()[0] == "# basis: n0 n1 n2"


@pytest.mark.unit
class TestTrilinear:
    @pytest.mark.parametrize("p", [1, 2, 3, 5])
    def test_green_paraboson(self, p):
        assert trilinear_residual(build_green_paraboson(p, cutoff=30)) <= 1e-12

    @pytest.mark.parametrize("p", range(1, 9))
    def test_parafermion_exact(self, p):
        assert trilinear_residual(build_parafermion(p)) <= 1e-12

    def test_deformed_ladder_shrinks_with_p(self):
        coarse = trilinear_residual(build_deformed_ladder(10, cutoff=20))
        fine = trilinear_residual(build_deformed_ladder(20, cutoff=20))
        assert coarse > 0
        assert fine < coarse

    @pytest.mark.parametrize("p", [1, 2, 3, 5])
    def test_green_invariants_audit(self, p):
        report = ladder_invariants_audit(build_green_paraboson(p, cutoff=30))
        assert report.passed, [c for c in report.checks if not c.passed]

    @pytest.mark.parametrize("p", range(1, 9))
    def test_parafermion_invariants_audit(self, p):
        assert ladder_invariants_audit(build_parafermion(p)).passed

    def test_deformed_audit_reports_but_does_not_gate_trilinear(self):
        report = ladder_invariants_audit(build_deformed_ladder(4, cutoff=12))
        trilinear = next(c for c in report.checks if c.name == "trilinear Green relation")
        assert trilinear.residual > 0
        assert report.passed


@pytest.mark.unit
class TestCommutatorAudit:
    def test_printed_prediction_flagged_at_small_p(self):
        audit = commutator_audit(2, cutoff=10)
        first = audit.rows[0]
        assert first.computed == pytest.approx(1.0)
        assert first.eq6_prediction == pytest.approx(2.0)
        assert first.flagged
        assert audit.any_flagged

    def test_p1_diagonal(self):
        audit = commutator_audit(1, cutoff=10)
        assert [r.computed for r in audit.rows] == pytest.approx([1 + 2 * n for n in range(10)])

    def test_large_p_reaches_canonical_commutator(self):
        audit = commutator_audit(10**6, cutoff=12)
        assert all(abs(r.computed - 1.0) < 1e-4 for r in audit.rows if r.n <= 10)

    def test_table_lists_every_row(self):
        audit = commutator_audit(3, cutoff=6)
        assert len(audit.table().splitlines()) == len(audit.rows) + 1


@pytest.mark.unit
class TestLargeP:
    def test_error_roughly_halves_when_p_doubles(self):
        errors = [bosonic_limit_error(p, 20) for p in (100, 200, 400, 800)]
        ratios = [a / b for a, b in zip(errors, errors[1:])]
        assert min(ratios) >= 1.6

    def test_infinite_order_has_no_error(self):
        assert bosonic_limit_error(math.inf, 20) == 0.0

    def test_n_max_beyond_cutoff_rejected(self):
        with pytest.raises(ValidationError):
            bosonic_limit_error(100, 20, cutoff=10)


@pytest.mark.unit
class TestParafermionAnticommutator:
    @pytest.mark.parametrize("p", [1, 2, 4, 8])
    def test_closed_form_holds(self, p):
        assert parafermion_anticommutator_audit(p).passed

    def test_deformed_prediction_reported(self):
        report = parafermion_anticommutator_audit(3)
        assert report.findings
        assert len(report.data["computed"]) == 4
