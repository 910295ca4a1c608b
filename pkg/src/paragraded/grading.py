"""
Z2 x Z2 grading
===============

The Klein four-group of grades, exchange signs, the mode and spin grade maps, sector
projectors, and the graded bracket. Everything here is exact integer arithmetic;
floating point only appears when a projector or trace is applied to a matrix.
"""

import logging
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .core.exceptions import ValidationError
from .core.validators import build_model, validate_square
from .models.reports import AuditReport, Finding, ResidualCheck

logger = logging.getLogger(__name__)

SpinLike = Union[int, float, Fraction, str]


class Grade(BaseModel):
    """A pair of bits (a, b) with componentwise XOR as the group law."""
    model_config = ConfigDict(frozen=True)

    a: int = Field(ge=0, le=1, description="First grade bit (OAM parity on the ququart)")
    b: int = Field(ge=0, le=1, description="Second grade bit (helicity on the ququart)")

    def __add__(self, other: "Grade") -> "Grade":
        return grade_add(self, other)

    @property
    def label(self) -> str:
        return f"{self.a}{self.b}"

    @property
    def index(self) -> int:
        """Position k = 2a + b in the two-qubit factorization."""
        return 2 * self.a + self.b

    def __str__(self) -> str:
        return f"({self.a},{self.b})"


G00 = Grade(a=0, b=0)
G01 = Grade(a=0, b=1)
G10 = Grade(a=1, b=0)
G11 = Grade(a=1, b=1)
ALL_GRADES: Tuple[Grade, ...] = (G00, G01, G10, G11)


class GradeBasis(BaseModel):
    """Fixed ordering of the four grades used to index every 4x4 output."""
    model_config = ConfigDict(frozen=True)

    ordering: Tuple[Grade, ...] = Field(default=ALL_GRADES, description="Order of basis grades")

    @field_validator("ordering")
    @classmethod
    def _is_permutation(cls, value: Tuple[Grade, ...]) -> Tuple[Grade, ...]:
        if len(value) != 4 or set(value) != set(ALL_GRADES):
            raise ValueError("ordering must be a permutation of the four grades")
        return value

    def index_of(self, grade: Grade) -> int:
        return self.ordering.index(grade)

    def labels(self) -> List[str]:
        return [g.label for g in self.ordering]

    def __len__(self) -> int:
        return 4


DEFAULT_BASIS = GradeBasis()


class Projector(BaseModel):
    """Diagonal 0/1 indicator of one grade sector over a basis."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grade: Grade
    basis: GradeBasis = Field(default=DEFAULT_BASIS)
    matrix: np.ndarray = Field(description="4x4 real diagonal indicator")

    @model_validator(mode="after")
    def _freeze_matrix(self) -> "Projector":
        self.matrix.setflags(write=False)
        return self


def grade_add(g: Grade, h: Grade) -> Grade:
    return Grade(a=g.a ^ h.a, b=g.b ^ h.b)


def grade_dot(g: Grade, h: Grade) -> int:
    """(a a' + b b') mod 2."""
    return (g.a * h.a + g.b * h.b) % 2


def exchange_sign(g: Grade, h: Grade) -> int:
    return -1 if grade_dot(g, h) else 1


def grade_from_label(label: str) -> Grade:
    """Parse the two-character serialization, e.g. "01"."""
    text = label.strip()
    if len(text) != 2 or any(ch not in "01" for ch in text):
        raise ValidationError(f"Malformed grade label '{label}'; expected two bits such as '01'")
    return Grade(a=int(text[0]), b=int(text[1]))


def exchange_matrix(basis: GradeBasis = DEFAULT_BASIS) -> np.ndarray:
    """Integer sign matrix X[i, j] = exchange_sign(basis[i], basis[j])."""
    return np.array(
        [[exchange_sign(g, h) for h in basis.ordering] for g in basis.ordering],
        dtype=int,
    )


# As printed, in the order (00, 01, 10, 11).
PRINTED_EXCHANGE_MATRIX = np.array(
    [
        [1, 1, 1, 1],
        [1, -1, -1, 1],
        [1, -1, -1, 1],
        [1, 1, 1, 1],
    ],
    dtype=int,
)


def exchange_matrix_audit() -> AuditReport:
    """Compare the formula-derived exchange matrix with the printed one, cell by cell."""
    computed = exchange_matrix(DEFAULT_BASIS)
    findings = []
    for i, g in enumerate(ALL_GRADES):
        for j, h in enumerate(ALL_GRADES):
            if computed[i, j] != PRINTED_EXCHANGE_MATRIX[i, j]:
                findings.append(
                    Finding(
                        item=f"X[{g.label},{h.label}]",
                        printed=int(PRINTED_EXCHANGE_MATRIX[i, j]),
                        computed=int(computed[i, j]),
                    )
                )
    if findings:
        logger.info(f"Printed exchange matrix disagrees with the sign formula in {len(findings)} cells")

    symmetric = int(np.max(np.abs(computed - computed.T)))
    return AuditReport(
        suite="exchange_matrix",
        checks=[ResidualCheck(name="X symmetric", residual=float(symmetric), tolerance=0.5)],
        findings=findings,
        data={"basis": DEFAULT_BASIS.labels(), "matrix": computed.tolist()},
    )


_SIGMA_B: Dict[str, int] = {"L": 0, "A": 0, "+1": 0, "+": 0, "R": 1, "B": 1, "-1": 1, "-": 1}


def grade_of_mode(ell: int, sigma: Union[int, str]) -> Grade:
    """
    Grade of a spin-orbit mode: a = ell mod 2, b from the helicity or mode label.

    Args:
        ell: OAM index; any integer, reduced mod 2
        sigma: +1/-1 or one of L, R, A, B

    Raises:
        ValidationError: On an unrecognized sigma label
    """
    key = str(sigma).strip().upper()
    if isinstance(sigma, int) and not isinstance(sigma, bool):
        key = {1: "+1", -1: "-1"}.get(sigma, key)
    if key not in _SIGMA_B:
        raise ValidationError(
            f"Unknown mode label sigma={sigma!r}; expected +1, -1, L, R, A or B",
            details={"sigma": str(sigma)},
        )
    return Grade(a=int(ell) % 2, b=_SIGMA_B[key])


_SPIN_TABLE: Dict[Fraction, Grade] = {
    Fraction(0): G00,
    Fraction(1, 2): G10,
    Fraction(1): G01,
    Fraction(3, 2): G11,
}


def as_half_integer(s: SpinLike) -> Fraction:
    """Coerce a spin value to an exact non-negative half-integer."""
    try:
        value = Fraction(s).limit_denominator(1000) if isinstance(s, float) else Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise ValidationError(f"Cannot read spin {s!r}") from e
    if (2 * value).denominator != 1:
        raise ValidationError(f"Spin {s!r} is not a half-integer")
    if value < 0:
        raise ValidationError(f"Spin must be non-negative, got {s!r}")
    return value


def grade_of_spin(s: SpinLike) -> Grade:
    """Grade of tower level s, cyclic with period 2 (s=2 maps back to (0,0))."""
    value = as_half_integer(s)
    return _SPIN_TABLE[value % 2]


def projector(g: Grade, basis: GradeBasis = DEFAULT_BASIS) -> Projector:
    matrix = np.zeros((4, 4))
    k = basis.index_of(g)
    matrix[k, k] = 1.0
    return build_model(Projector, grade=g, basis=basis, matrix=matrix)


def projector_family(basis: GradeBasis = DEFAULT_BASIS) -> Dict[Grade, Projector]:
    return {g: projector(g, basis) for g in basis.ordering}


def projector_audit(basis: GradeBasis = DEFAULT_BASIS) -> AuditReport:
    """Completeness, orthogonality, idempotence and Hermiticity; all exact."""
    family = projector_family(basis)
    mats = [family[g].matrix for g in basis.ordering]
    completeness = np.max(np.abs(sum(mats) - np.eye(4)))
    idempotence = max(np.max(np.abs(p @ p - p)) for p in mats)
    hermiticity = max(np.max(np.abs(p - p.T)) for p in mats)
    orthogonality = max(
        np.max(np.abs(p @ q)) for i, p in enumerate(mats) for j, q in enumerate(mats) if i != j
    )
    return AuditReport(
        suite="projectors",
        checks=[
            ResidualCheck(name="sum P_g = 1", residual=float(completeness), tolerance=1e-15),
            ResidualCheck(name="P_g P_h = 0", residual=float(orthogonality), tolerance=1e-15),
            ResidualCheck(name="P_g^2 = P_g", residual=float(idempotence), tolerance=1e-15),
            ResidualCheck(name="P_g^dag = P_g", residual=float(hermiticity), tolerance=1e-15),
        ],
    )


def klein_group_audit() -> AuditReport:
    """Exhaustive group laws and dot symmetry over all pairs and triples."""
    failures = 0
    for g in ALL_GRADES:
        failures += int(g + g != G00) + int(g + G00 != g)
        for h in ALL_GRADES:
            failures += int(g + h != h + g)
            failures += int(exchange_sign(g, h) != exchange_sign(h, g))
            if G00 in (g, h):
                failures += int(exchange_sign(g, h) != 1)
            for k in ALL_GRADES:
                failures += int((g + h) + k != g + (h + k))
    return AuditReport(
        suite="klein_group",
        checks=[ResidualCheck(name="group law violations", residual=float(failures), tolerance=0.5)],
    )


def graded_bracket(x: np.ndarray, gx: Grade, y: np.ndarray, gy: Grade) -> np.ndarray:
    """XY - (-1)^{gx.gy} YX for homogeneous operators."""
    return x @ y - exchange_sign(gx, gy) * (y @ x)


def graded_trace(
    x: np.ndarray,
    basis: GradeBasis = DEFAULT_BASIS,
    epsilon: Optional[Union[Mapping[Grade, int], Callable[[Grade], int]]] = None,
) -> complex:
    """
    Signed sum of sector traces for an operator on (grade space) x (k-dim block).

    Args:
        x: 4k x 4k matrix, sector index outermost
        basis: Sector ordering of the outer factor
        epsilon: Sign exponent per grade; defaults to the total parity a xor b

    Returns:
        sum_g (-1)^epsilon(g) Tr[P_g X P_g]
    """
    arr = validate_square(x, name="X")
    if arr.shape[0] % 4:
        raise ValidationError(f"Graded trace needs a dimension divisible by 4, got {arr.shape[0]}")
    k = arr.shape[0] // 4

    if epsilon is None:
        sign_of: Callable[[Grade], int] = lambda g: g.a ^ g.b
    elif callable(epsilon):
        sign_of = epsilon
    else:
        table = dict(epsilon)
        sign_of = lambda g: table[g]

    total = 0j
    for pos, g in enumerate(basis.ordering):
        block = arr[pos * k:(pos + 1) * k, pos * k:(pos + 1) * k]
        total += (-1) ** (sign_of(g) % 2) * np.trace(block)
    return complex(total)


# Printed braiding-table rows: (s, s', printed dot).
PRINTED_SPIN_ROWS: Tuple[Tuple[Fraction, Fraction, int], ...] = (
    (Fraction(0), Fraction(0), 0),
    (Fraction(0), Fraction(1, 2), 0),
    (Fraction(1, 2), Fraction(1, 2), 1),
    (Fraction(1), Fraction(0), 0),
    (Fraction(1, 2), Fraction(1), 1),
)


def spin_grade_table_audit() -> AuditReport:
    """Check each printed (s, s', dot) row against the spin grade map."""
    findings = []
    rows = []
    for s, s2, printed in PRINTED_SPIN_ROWS:
        computed = grade_dot(grade_of_spin(s), grade_of_spin(s2))
        rows.append({"s": str(s), "s2": str(s2), "printed": printed, "computed": computed})
        if computed != printed:
            findings.append(
                Finding(
                    item=f"dot(s={s}, s'={s2})",
                    printed=printed,
                    computed=computed,
                    note=f"grade_of_spin gives {grade_of_spin(s)} and {grade_of_spin(s2)}",
                )
            )
    return AuditReport(suite="spin_grade_table", findings=findings, data={"rows": rows})


def iter_pairs(basis: GradeBasis = DEFAULT_BASIS) -> Iterable[Tuple[Grade, Grade]]:
    for g in basis.ordering:
        for h in basis.ordering:
            yield g, h
