"""
Braiding
========

Braid coefficients R^{s'}_s, the deformation theta_{ss'}, the 16x16 braid operator on
grade (x) grade, the braided coproduct, and brute-force Yang-Baxter and 2-cocycle checks
over all 64 grade triples.

The two-site basis is |g> (x) |h> with index 4 * pos(g) + pos(h) in the chosen
GradeBasis; three-site vectors use 16 * pos(g1) + 4 * pos(g2) + pos(g3).
"""

import cmath
import itertools
import logging
import math
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .core.exceptions import ValidationError
from .core.validators import validate_square
from .grading import (
    ALL_GRADES,
    DEFAULT_BASIS,
    PRINTED_SPIN_ROWS,
    Grade,
    GradeBasis,
    SpinLike,
    as_half_integer,
    exchange_sign,
    grade_add,
    grade_dot,
    grade_of_spin,
)
from .models.reports import AuditReport, Finding, ResidualCheck
from .utils.export import matrix_to_csv, table_to_csv
from .utils.linalg import max_abs

logger = logging.getLogger(__name__)

ThetaTable = Dict[Tuple[Grade, Grade], float]

# Lowest tower level carrying each grade.
_SPIN_OF_GRADE: Dict[Grade, Fraction] = {grade_of_spin(s): Fraction(s) for s in ("0", "1/2", "1", "3/2")}


class DeltaConvention(str, Enum):
    """How the diagonal delta of the braid coefficient is read."""
    SIGN_ALWAYS = "sign_always"   # (-1)^{dot} + theta for every pair
    KRONECKER = "kronecker"       # (-1)^{dot} delta_{ss'} + theta, read literally


class BraidParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    q: complex = Field(default=1.0 + 0j, description="Statistical phase, |q| = 1")
    green_limit: bool = Field(default=False, description="Force epsilon = 0 so theta vanishes")
    delta_convention: DeltaConvention = Field(default=DeltaConvention.SIGN_ALWAYS)
    spin_grades: Dict[str, Grade] = Field(
        default_factory=dict, description="Overrides of the spin grade map, keyed by spin string"
    )

    @field_validator("q")
    @classmethod
    def _unit_modulus(cls, value: complex) -> complex:
        if abs(abs(value) - 1.0) > 1e-12:
            raise ValueError(f"|q| must be 1, got {abs(value)}")
        return complex(value)

    def grade_of(self, s: SpinLike) -> Grade:
        value = as_half_integer(s)
        override = self.spin_grades.get(str(value))
        return override if override is not None else grade_of_spin(value)


class BraidOperator(BaseModel):
    """Monomial 16x16 matrix sending |g>|h> to a multiple of |h>|g>."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray
    basis: GradeBasis = Field(default=DEFAULT_BASIS)
    slots: Tuple[int, int] = Field(default=(1, 2), description="Slot pair when embedded in three sites")

    @model_validator(mode="after")
    def _check_monomial_swap(self) -> "BraidOperator":
        if self.matrix.shape != (16, 16):
            raise ValueError(f"braid operator must be 16x16, got {self.matrix.shape}")
        for i, j in itertools.product(range(4), repeat=2):
            column = self.matrix[:, 4 * i + j].copy()
            column[4 * j + i] = 0.0
            if np.any(np.abs(column) > 1e-12):
                raise ValueError(f"column |{i}{j}> does not map onto the swapped vector only")
        self.matrix.setflags(write=False)
        return self

    def coefficient(self, g: Grade, h: Grade) -> complex:
        i, j = self.basis.index_of(g), self.basis.index_of(h)
        return complex(self.matrix[4 * j + i, 4 * i + j])

    def to_csv(self, target: Union[str, Path, None] = None) -> str:
        labels = [f"{g.label}.{h.label}" for g in self.basis.ordering for h in self.basis.ordering]
        return matrix_to_csv(self.matrix, labels, target)


def theta(s: SpinLike, s2: SpinLike, q: complex, green_limit: bool = False) -> complex:
    """
    epsilon_{ss'} (q^{s+s'} - 1) with epsilon = (-1)^{2s * 2s'}.

    q^x uses the principal branch exp(i x arg q).
    """
    if abs(abs(q) - 1.0) > 1e-12:
        raise ValidationError(f"|q| must be 1, got {abs(q)}")
    if green_limit:
        return 0j
    a, b = as_half_integer(s), as_half_integer(s2)
    epsilon = -1 if (int(2 * a) * int(2 * b)) % 2 else 1
    return epsilon * (cmath.exp(1j * float(a + b) * cmath.phase(q)) - 1.0)


def braid_coeff(s: SpinLike, s2: SpinLike, params: Optional[BraidParams] = None) -> complex:
    params = params or BraidParams()
    sign = exchange_sign(params.grade_of(s), params.grade_of(s2))
    if params.delta_convention is DeltaConvention.KRONECKER and as_half_integer(s) != as_half_integer(s2):
        sign = 0
    return sign + theta(s, s2, params.q, params.green_limit)


def _monomial(coeff: Mapping[Tuple[Grade, Grade], complex], basis: GradeBasis) -> np.ndarray:
    matrix = np.zeros((16, 16), dtype=complex)
    for g, h in itertools.product(basis.ordering, repeat=2):
        i, j = basis.index_of(g), basis.index_of(h)
        matrix[4 * j + i, 4 * i + j] = coeff[(g, h)]
    return matrix


def r_operator(params: Optional[BraidParams] = None, basis: GradeBasis = DEFAULT_BASIS) -> BraidOperator:
    """Signed swap deformed by theta, each grade standing for its lowest tower level."""
    params = params or BraidParams()
    coeff = {
        (g, h): braid_coeff(_SPIN_OF_GRADE[g], _SPIN_OF_GRADE[h], params)
        for g, h in itertools.product(ALL_GRADES, repeat=2)
    }
    return BraidOperator(matrix=_monomial(coeff, basis), basis=basis)


def phase_deformed_r(theta_table: ThetaTable, basis: GradeBasis = DEFAULT_BASIS) -> BraidOperator:
    """R|g>|h> = exp(i theta(g,h)) |h>|g>."""
    missing = [pair for pair in itertools.product(ALL_GRADES, repeat=2) if pair not in theta_table]
    if missing:
        raise ValidationError(f"theta table is missing {len(missing)} grade pairs")
    coeff = {pair: cmath.exp(1j * theta_table[pair]) for pair in itertools.product(ALL_GRADES, repeat=2)}
    return BraidOperator(matrix=_monomial(coeff, basis), basis=basis)


def sign_bicharacter() -> ThetaTable:
    """theta(g,h) = pi * dot(g,h): the undeformed exchange phase."""
    return {(g, h): math.pi * grade_dot(g, h) for g, h in itertools.product(ALL_GRADES, repeat=2)}


def random_bicharacter(rng: np.random.Generator) -> ThetaTable:
    """
    Bilinear extension of random generator angles.

    2g = 0 for every grade, so each generator angle is 0 or pi.
    """
    phi = math.pi * rng.integers(0, 2, size=(2, 2))
    table: ThetaTable = {}
    for g, h in itertools.product(ALL_GRADES, repeat=2):
        table[(g, h)] = float(sum(x * y * phi[i, j] for i, x in enumerate((g.a, g.b)) for j, y in enumerate((h.a, h.b))))
    return table


def random_coboundary(rng: np.random.Generator) -> ThetaTable:
    """d phi(g,h) = phi(g) + phi(h) - phi(g+h) with free phases and phi(0) = 0."""
    phi = {g: (0.0 if g == ALL_GRADES[0] else float(rng.uniform(0.0, 2.0 * math.pi))) for g in ALL_GRADES}
    return {(g, h): phi[g] + phi[h] - phi[grade_add(g, h)] for g, h in itertools.product(ALL_GRADES, repeat=2)}


def _wrap(angle: float) -> float:
    """Distance of an angle from 0 mod 2 pi."""
    return abs((angle + math.pi) % (2.0 * math.pi) - math.pi)


def cocycle_residual(theta_table: ThetaTable) -> float:
    """max over triples of |theta(g1,g2) + theta(g1g2,g3) - theta(g2,g3) - theta(g1,g2g3)| mod 2 pi."""
    worst = 0.0
    for g1, g2, g3 in itertools.product(ALL_GRADES, repeat=3):
        lhs = theta_table[(g1, g2)] + theta_table[(grade_add(g1, g2), g3)]
        rhs = theta_table[(g2, g3)] + theta_table[(g1, grade_add(g2, g3))]
        worst = max(worst, _wrap(lhs - rhs))
    return worst


def _as_matrix(r: Union[BraidOperator, np.ndarray]) -> np.ndarray:
    if isinstance(r, BraidOperator):
        return np.asarray(r.matrix)
    return validate_square(r, name="R", size=16)


def _braid_defect(r: np.ndarray) -> np.ndarray:
    """(R x 1)(1 x R)(R x 1) - (1 x R)(R x 1)(1 x R); each strand pair crosses once per side."""
    eye = np.eye(4)
    r12 = np.kron(r, eye)
    r23 = np.kron(eye, r)
    return r12 @ r23 @ r12 - r23 @ r12 @ r23


def _phases(r: np.ndarray, basis: GradeBasis) -> Optional[Dict[Tuple[Grade, Grade], complex]]:
    """Single nonzero entry of each column, or None when R is not monomial."""
    table = {}
    for g, h in itertools.product(basis.ordering, repeat=2):
        column = r[:, 4 * basis.index_of(g) + basis.index_of(h)]
        support = np.flatnonzero(np.abs(column) > 1e-12)
        if len(support) != 1:
            return None
        table[(g, h)] = complex(column[support[0]])
    return table


def _hexagon_defects(c: Mapping[Tuple[Grade, Grade], complex], g1: Grade, g2: Grade, g3: Grade) -> float:
    left = abs(c[(grade_add(g1, g2), g3)] - c[(g1, g3)] * c[(g2, g3)])
    right = abs(c[(g1, grade_add(g2, g3))] - c[(g1, g2)] * c[(g1, g3)])
    return max(left, right)


def hexagon_residual(r: Union[BraidOperator, np.ndarray], basis: GradeBasis = DEFAULT_BASIS) -> float:
    """
    Additivity of the braid phase under fusing two strands.

    Returns 0.0 for non-monomial R, where no phase table exists.
    """
    c = _phases(_as_matrix(r), basis)
    if c is None:
        logger.debug("R is not monomial; hexagon check skipped")
        return 0.0
    return max(_hexagon_defects(c, *triple) for triple in itertools.product(basis.ordering, repeat=3))


class YangBaxterRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    g1: Grade
    g2: Grade
    g3: Grade
    braid_residual: float
    hexagon_residual: float


def yang_baxter_table(r: Union[BraidOperator, np.ndarray], basis: GradeBasis = DEFAULT_BASIS) -> List[YangBaxterRow]:
    """Per-triple residuals over all 64 three-site basis vectors."""
    matrix = _as_matrix(r)
    defect = _braid_defect(matrix)
    c = _phases(matrix, basis)

    rows = []
    for g1, g2, g3 in itertools.product(basis.ordering, repeat=3):
        col = 16 * basis.index_of(g1) + 4 * basis.index_of(g2) + basis.index_of(g3)
        rows.append(
            YangBaxterRow(
                g1=g1,
                g2=g2,
                g3=g3,
                braid_residual=max_abs(defect[:, col]),
                hexagon_residual=_hexagon_defects(c, g1, g2, g3) if c is not None else 0.0,
            )
        )
    return rows


def yang_baxter_residual(r: Union[BraidOperator, np.ndarray], basis: GradeBasis = DEFAULT_BASIS) -> float:
    """Worst of the braid relation and the fused-strand additivity over all 64 triples."""
    return max(max(row.braid_residual, row.hexagon_residual) for row in yang_baxter_table(r, basis))


def yang_baxter_csv(r: Union[BraidOperator, np.ndarray], target: Union[str, Path, None] = None) -> str:
    rows = [
        (row.g1.label, row.g2.label, row.g3.label, row.braid_residual, row.hexagon_residual)
        for row in yang_baxter_table(r)
    ]
    return table_to_csv(["g1", "g2", "g3", "braid_residual", "hexagon_residual"], rows, target)


def shift_operators(basis: GradeBasis = DEFAULT_BASIS) -> Dict[Grade, np.ndarray]:
    """Default single-site operators: psi_g |h> = |h + g>."""
    ops = {}
    for g in ALL_GRADES:
        matrix = np.zeros((4, 4), dtype=complex)
        for h in basis.ordering:
            matrix[basis.index_of(grade_add(h, g)), basis.index_of(h)] = 1.0
        ops[g] = matrix
    return ops


def _check_homogeneous(op: np.ndarray, g: Grade, basis: GradeBasis) -> None:
    for h, k in itertools.product(basis.ordering, repeat=2):
        if k != grade_add(h, g) and abs(op[basis.index_of(k), basis.index_of(h)]) > 1e-12:
            raise ValidationError(f"operator supplied for grade {g} maps sector {h} into {k}")


def braided_coproduct(
    op_grade: Grade,
    r: BraidOperator,
    ops: Optional[Mapping[Grade, np.ndarray]] = None,
) -> np.ndarray:
    """
    Delta(psi_g) = psi_g (x) 1 + sum_h R^h_g (P_h (x) psi_g).

    The sum runs over the sector h of the first slot, weighted by the braid coefficient
    of g past h; with a trivial swap it reduces to the Leibniz rule.
    """
    basis = r.basis
    ops = dict(ops) if ops is not None else shift_operators(basis)
    if op_grade not in ops:
        raise ValidationError(f"No single-site operator supplied for grade {op_grade}")
    psi = validate_square(ops[op_grade], name=f"psi{op_grade.label}", size=4)
    _check_homogeneous(psi, op_grade, basis)

    klein = np.diag([r.coefficient(op_grade, h) for h in basis.ordering])
    return np.kron(psi, np.eye(4)) + np.kron(klein, psi)


def coproduct_covariance_residual(op_grade: Grade, r: BraidOperator, ops: Optional[Mapping[Grade, np.ndarray]] = None) -> float:
    """||R Delta(psi) R^-1 - Delta(psi)||: braiding the two sites maps the coproduct to itself."""
    delta = braided_coproduct(op_grade, r, ops)
    rm = np.asarray(r.matrix)
    return max_abs(rm @ delta @ np.linalg.inv(rm) - delta)


def spin_braid_table_audit(q: complex = 1.0, tol: float = 1e-12) -> AuditReport:
    """Each printed braiding row, (-1)^{printed dot} + theta, against the formula value."""
    params = BraidParams(q=q)
    findings = []
    rows = []
    for s, s2, printed_dot in PRINTED_SPIN_ROWS:
        computed = braid_coeff(s, s2, params)
        printed = (-1) ** printed_dot + theta(s, s2, params.q)
        rows.append({"s": str(s), "s2": str(s2), "printed": str(printed), "computed": str(computed)})
        if abs(computed - printed) > tol:
            findings.append(Finding(item=f"R(s={s}, s'={s2})", printed=str(printed), computed=str(computed)))
    return AuditReport(suite="braid_table", findings=findings, data={"q": str(complex(q)), "rows": rows})


def braiding_audit(rng: np.random.Generator, samples: int = 100, tol: float = 1e-12) -> AuditReport:
    """Signed swap, involution, cocycle and the bicharacter-to-Yang-Baxter implication."""
    r = r_operator()
    matrix = np.asarray(r.matrix)
    worst_implication = 0.0
    for _ in range(samples):
        table = random_bicharacter(rng)
        if cocycle_residual(table) <= 1e-9:
            worst_implication = max(worst_implication, yang_baxter_residual(phase_deformed_r(table)))

    checks = [
        ResidualCheck(name="R^2 = 1 at q=1", residual=max_abs(matrix @ matrix - np.eye(16)), tolerance=tol),
        ResidualCheck(name="Yang-Baxter, signed swap", residual=yang_baxter_residual(r), tolerance=tol),
        ResidualCheck(name="cocycle, pi * dot", residual=cocycle_residual(sign_bicharacter()), tolerance=1e-9),
        ResidualCheck(name="bicharacter => Yang-Baxter", residual=worst_implication, tolerance=1e-9),
    ]
    return AuditReport(suite="braiding", checks=checks)
