import itertools

import numpy as np
import pytest

from paragraded.core.exceptions import ValidationError
from paragraded.grading import (
    ALL_GRADES,
    G00,
    G01,
    G10,
    G11,
    GradeBasis,
    exchange_matrix,
    exchange_matrix_audit,
    exchange_sign,
    grade_add,
    grade_dot,
    grade_from_label,
    grade_of_mode,
    grade_of_spin,
    graded_bracket,
    graded_trace,
    klein_group_audit,
    projector,
    projector_audit,
    projector_family,
    spin_grade_table_audit,
)


@pytest.mark.unit
class TestGradeArithmetic:
    def test_multiplication_table_cells(self):
        assert grade_add(G01, G10) == G11
        assert grade_add(G11, G11) == G00
        assert grade_add(G11, G01) == G10

    def test_every_grade_is_self_inverse(self):
        for g in ALL_GRADES:
            assert g + g == G00

    def test_group_laws(self):
        for g, h, k in itertools.product(ALL_GRADES, repeat=3):
            assert g + h == h + g
            assert (g + h) + k == g + (h + k)

    def test_dot_and_sign(self):
        assert grade_dot(G01, G11) == 1
        assert exchange_sign(G01, G11) == -1
        assert grade_dot(G10, G01) == 0
        assert exchange_sign(G10, G01) == 1
        for h in ALL_GRADES:
            assert exchange_sign(G00, h) == 1

    def test_label_round_trip(self):
        for g in ALL_GRADES:
            assert grade_from_label(g.label) == g
        assert G10.index == 2

    @pytest.mark.parametrize("label", ["", "2", "012", "ab"])
    def test_malformed_label_rejected(self, label):
        with pytest.raises(ValidationError):
            grade_from_label(label)

    def test_klein_audit_passes(self):
        assert klein_group_audit().passed


@pytest.mark.unit
class TestExchangeMatrix:
    def test_rows_follow_the_sign_formula(self):
        x = exchange_matrix()
        assert x[0].tolist() == [1, 1, 1, 1]
        assert x[3].tolist() == [1, -1, -1, 1]
        assert x[1].tolist() == [1, -1, 1, -1]

    def test_permuted_basis_permutes_the_matrix(self):
        basis = GradeBasis(ordering=(G11, G10, G01, G00))
        x = exchange_matrix(basis)
        assert x[0, 0] == exchange_sign(G11, G11)
        assert x[1, 2] == exchange_sign(G10, G01)

    def test_bad_ordering_rejected(self):
        with pytest.raises(Exception):
            GradeBasis(ordering=(G00, G00, G01, G10))

    def test_audit_flags_printed_cells(self):
        report = exchange_matrix_audit()

        assert report.passed
        items = {f.item for f in report.findings}
        assert "X[01,10]" in items
        assert "X[01,11]" in items
        assert "X[00,00]" not in items


@pytest.mark.unit
class TestGradeMaps:
    @pytest.mark.parametrize(
        "ell, sigma, expected",
        [(1, 1, G10), (1, "L", G10), (0, "A", G00), (-1, -1, G11), (-1, "R", G11), (2, "B", G01)],
    )
    def test_mode_grades(self, ell, sigma, expected):
        assert grade_of_mode(ell, sigma) == expected

    def test_unknown_sigma_rejected(self):
        with pytest.raises(ValidationError):
            grade_of_mode(0, "Q")

    @pytest.mark.parametrize(
        "spin, expected",
        [(0, G00), ("1/2", G10), (1, G01), ("3/2", G11), (2, G00), ("7/2", G11), (0.5, G10)],
    )
    def test_spin_grades_are_cyclic(self, spin, expected):
        assert grade_of_spin(spin) == expected

    @pytest.mark.parametrize("spin", ["1/3", -1, "x"])
    def test_bad_spin_rejected(self, spin):
        with pytest.raises(ValidationError):
            grade_of_spin(spin)

    def test_printed_spin_rows_audited(self):
        report = spin_grade_table_audit()
        assert len(report.data["rows"]) == 5
        assert [f.item for f in report.findings] == ["dot(s=1/2, s'=1)"]


@pytest.mark.unit
class TestProjectors:
    def test_family_is_complete_and_orthogonal(self):
        family = projector_family()
        assert np.array_equal(sum(p.matrix for p in family.values()), np.eye(4))
        assert not np.any(family[G00].matrix @ family[G11].matrix)
        p = family[G01].matrix
        assert np.array_equal(p @ p, p)

    def test_projector_matrix_is_read_only(self):
        p = projector(G10)
        with pytest.raises(ValueError):
            p.matrix[0, 0] = 1.0

    def test_audit_passes(self):
        assert projector_audit().passed

    def test_graded_bracket_anticommutes_odd_pairs(self):
        x = np.diag([1.0, -1.0, 1.0, -1.0])
        y = np.eye(4)
        assert np.allclose(graded_bracket(x, G01, y, G01), 2 * x)
        assert np.allclose(graded_bracket(x, G01, y, G10), 0)

    def test_graded_trace_default_parity(self):
        x = np.kron(np.diag([1.0, 2.0, 3.0, 5.0]), np.eye(2))
        # parity a xor b: 00 and 11 even, 01 and 10 odd
        assert graded_trace(x) == pytest.approx(2 * (1 - 2 - 3 + 5))

    def test_graded_trace_rejects_bad_dimension(self):
        with pytest.raises(ValidationError):
            graded_trace(np.eye(6))
