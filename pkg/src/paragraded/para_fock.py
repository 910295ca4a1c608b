"""
Paraparticle Fock representations
=================================

Truncated matrix representations for a single paraparticle mode of order p:

* the interpolating p-deformed ladder, with [n]!_p = prod_k (k + k(k-1)/p);
* the exact Green paraboson, with alternating coefficients sqrt(2m), sqrt(2m+p);
* the exact parafermion, the spin-p/2 lowering operator.

The two exact representations are the trilinear-identity oracles. The deformed
ladder satisfies the Green relations only to O(1/p), and the audits below report how
far it is from the printed closed forms rather than picking one silently.
"""

import logging
import math
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .core.exceptions import ValidationError
from .models.reports import AuditReport, Finding, ResidualCheck
from .utils.config import Config
from .utils.export import matrix_to_csv
from .utils.linalg import anticommutator, commutator, max_abs

logger = logging.getLogger(__name__)

Order = Union[int, float]

DEFAULT_EDGE_WINDOW = 2


class RepKind(str, Enum):
    """Which construction produced a ladder representation."""
    DEFORMED = "deformed"
    GREEN_PARABOSON = "green_paraboson"
    PARAFERMION = "parafermion"


class LadderRep(BaseModel):
    """Truncated (annihilator, creator) pair for one mode of order p."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: RepKind
    p: int = Field(ge=1, description="Green order")
    cutoff: int = Field(ge=1, description="Highest occupation kept")
    lower: np.ndarray = Field(description="(cutoff+1)x(cutoff+1) annihilator")
    edge_window: int = Field(default=DEFAULT_EDGE_WINDOW, ge=0, description="Truncation rows excluded from residuals")

    @model_validator(mode="after")
    def _check_shape(self) -> "LadderRep":
        dim = self.cutoff + 1
        if self.lower.shape != (dim, dim):
            raise ValueError(f"lower must be {dim}x{dim}, got {self.lower.shape}")
        self.lower.setflags(write=False)
        return self

    @property
    def raising(self) -> np.ndarray:
        return self.lower.conj().T

    @property
    def dim(self) -> int:
        return self.cutoff + 1

    @property
    def interior(self) -> slice:
        """Rows unaffected by the truncation edge."""
        return slice(0, self.dim - self.edge_window)


class DeformedLadder(LadderRep):
    kind: RepKind = RepKind.DEFORMED


class GreenParabosonRep(LadderRep):
    kind: RepKind = RepKind.GREEN_PARABOSON


class ParafermionRep(LadderRep):
    """Exact: the occupation cap p means nothing is truncated."""
    kind: RepKind = RepKind.PARAFERMION
    edge_window: int = 0


def _inverse_order(p: Order) -> Fraction:
    if isinstance(p, float) and math.isinf(p):
        return Fraction(0)
    if p <= 0:
        raise ValidationError(f"Order p must be positive, got {p}")
    return Fraction(1, int(p)) if float(p).is_integer() else Fraction(1) / Fraction(p)


def deformed_factorial(n: int, p: Order) -> Fraction:
    """
    [n]!_p as an exact rational; [0]!_p = 1.

    p = math.inf gives the ordinary factorial.
    """
    if n < 0:
        raise ValidationError(f"n must be non-negative, got {n}")
    inv_p = _inverse_order(p)
    result = Fraction(1)
    for k in range(1, n + 1):
        result *= k + k * (k - 1) * inv_p
    return result


def two_mode_factorial(n1: int, n2: int, p: Order) -> Fraction:
    """Normalization [n1]!_p [n2]!_p of a two-mode deformed Fock state."""
    return deformed_factorial(n1, p) * deformed_factorial(n2, p)


def occupancy_weight(k: int, p: Order) -> float:
    """prod_{m=1}^{k-1} (1 - m/p): the large-p suppression of k-fold occupation."""
    inv_p = _inverse_order(p)
    weight = Fraction(1)
    for m in range(1, k):
        weight *= 1 - m * inv_p
    return float(weight)


def ladder_coefficients(n: int, p: Order) -> Tuple[float, float]:
    """
    (raise, lower) coefficients of the deformed ladder at occupation n.

    raise^2 = [n+1]!_p / [n]!_p = n + 1 + n(n+1)/p, and lower(n) = raise(n-1).
    """
    if n < 0:
        raise ValidationError(f"n must be non-negative, got {n}")
    inv_p = _inverse_order(p)
    raise_sq = (n + 1) + n * (n + 1) * inv_p
    lower_sq = n + n * (n - 1) * inv_p
    return math.sqrt(raise_sq), math.sqrt(lower_sq)


def _check_cutoff(cutoff: int) -> None:
    if cutoff < 2:
        raise ValidationError(f"cutoff must be at least 2, got {cutoff}")


def build_deformed_ladder(p: int, cutoff: Optional[int] = None, config: Optional[Config] = None) -> DeformedLadder:
    config = config or Config(load_env_file=False)
    cutoff = config.cutoff if cutoff is None else cutoff
    _check_cutoff(cutoff)
    _inverse_order(p)

    lower = np.zeros((cutoff + 1, cutoff + 1))
    for n in range(1, cutoff + 1):
        lower[n - 1, n] = ladder_coefficients(n, p)[1]
    return DeformedLadder(p=p, cutoff=cutoff, lower=lower, edge_window=config.edge_window)


def build_green_paraboson(p: int, cutoff: Optional[int] = None, config: Optional[Config] = None) -> GreenParabosonRep:
    """b|2m> = sqrt(2m)|2m-1>, b|2m+1> = sqrt(2m+p)|2m>."""
    config = config or Config(load_env_file=False)
    cutoff = config.cutoff if cutoff is None else cutoff
    _check_cutoff(cutoff)
    _inverse_order(p)

    lower = np.zeros((cutoff + 1, cutoff + 1))
    for n in range(1, cutoff + 1):
        lower[n - 1, n] = math.sqrt(n if n % 2 == 0 else n - 1 + p)
    return GreenParabosonRep(p=p, cutoff=cutoff, lower=lower, edge_window=config.edge_window)


def build_parafermion(p: int) -> ParafermionRep:
    """f = J_- of spin p/2 with the vacuum at m = -p/2: f|n> = sqrt(n(p-n+1))|n-1>."""
    _inverse_order(p)
    lower = np.zeros((p + 1, p + 1))
    for n in range(1, p + 1):
        lower[n - 1, n] = math.sqrt(n * (p - n + 1))
    return ParafermionRep(p=p, cutoff=p, lower=lower)


def number_operator(rep: LadderRep) -> np.ndarray:
    """Occupation operator diag(0, 1, ..., cutoff); it differs from x^dag x unless p = 1."""
    return np.diag(np.arange(rep.dim, dtype=float))


def trilinear_residual(rep: LadderRep) -> float:
    """
    Max-norm of the Green trilinear defect over the interior rows.

    [b, {b^dag, b}] = 2b for the bosonic kinds, [f, [f^dag, f]] = 2f for the parafermion.
    """
    x = rep.lower
    inner = commutator(rep.raising, x) if rep.kind is RepKind.PARAFERMION else anticommutator(rep.raising, x)
    defect = commutator(x, inner) - 2.0 * x
    return max_abs(defect[rep.interior, :])


class CommutatorRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    computed: float
    eq6_prediction: float
    diff: float
    flagged: bool


class CommutatorAudit(BaseModel):
    """Diagonal of [b, b^dag] for the deformed ladder beside the printed prediction."""
    model_config = ConfigDict(frozen=True)

    p: int
    cutoff: int
    rows: List[CommutatorRow]

    @property
    def any_flagged(self) -> bool:
        return any(row.flagged for row in self.rows)

    def table(self) -> str:
        lines = [f"{'n':>4} {'computed':>14} {'eq6_prediction':>15} {'|diff|':>12}"]
        for row in self.rows:
            mark = "  *" if row.flagged else ""
            lines.append(f"{row.n:>4} {row.computed:>14.8f} {row.eq6_prediction:>15.8f} {row.diff:>12.3e}{mark}")
        return "\n".join(lines)


def commutator_audit(p: int, cutoff: Optional[int] = None, tol: float = 1e-9) -> CommutatorAudit:
    """
    Evaluate <n|[b, b^dag]|n> from the matrices and compare with 1 + (2/p)(2n+1).

    The matrix value is 1 + 2n/p; the two only meet as p grows.
    """
    ladder = build_deformed_ladder(p, cutoff)
    comm = commutator(ladder.lower, ladder.raising)
    rows = []
    for n in range(ladder.dim - 1):
        computed = float(np.real(comm[n, n]))
        predicted = 1.0 + (2.0 / p) * (2 * n + 1)
        diff = abs(computed - predicted)
        rows.append(CommutatorRow(n=n, computed=computed, eq6_prediction=predicted, diff=diff, flagged=diff > tol))

    report = CommutatorAudit(p=p, cutoff=ladder.cutoff, rows=rows)
    if report.any_flagged:
        logger.info(f"Deformed commutator disagrees with the printed prediction at p={p}")
    return report


def bosonic_limit_error(p: Order, n_max: int, cutoff: Optional[int] = None) -> float:
    """max_{n <= n_max} |raise_coeff(n, p) - sqrt(n+1)|."""
    if cutoff is not None and n_max > cutoff:
        raise ValidationError(f"n_max={n_max} exceeds cutoff={cutoff}")
    return max(abs(ladder_coefficients(n, p)[0] - math.sqrt(n + 1)) for n in range(n_max + 1))


def parafermion_anticommutator_audit(p: int, tol: float = 1e-12) -> AuditReport:
    """
    Diagonal of {f, f^dag} for the exact parafermion.

    Reported beside the spin-p/2 closed form p + 2n(p-n) and the deformed prediction
    1 - (2/p)(2n-1).
    """
    rep = build_parafermion(p)
    diag = np.real(np.diag(anticommutator(rep.lower, rep.raising)))
    closed = np.array([p + 2 * n * (p - n) for n in range(p + 1)], dtype=float)
    deformed = np.array([1.0 - (2.0 / p) * (2 * n - 1) for n in range(p + 1)])

    findings = [
        Finding(item=f"{{f,f^dag}} at n={n}", printed=float(deformed[n]), computed=float(diag[n]))
        for n in range(p + 1)
        if abs(diag[n] - deformed[n]) > tol
    ]
    return AuditReport(
        suite="parafermion_anticommutator",
        checks=[ResidualCheck(name="{f,f^dag} = p + 2n(p-n)", residual=max_abs(diag - closed), tolerance=tol)],
        findings=findings,
        data={"computed": diag.tolist(), "deformed_prediction": deformed.tolist()},
    )


def ladder_invariants_audit(rep: LadderRep, tol: float = 1e-12) -> AuditReport:
    """Structural invariants shared by every representation, plus per-kind identities."""
    x, xd = rep.lower, rep.raising
    gram = xd @ x
    number = number_operator(rep)
    off_band = x - np.diag(np.diag(x, 1), 1)
    inner = rep.interior

    checks = [
        ResidualCheck(name="raise = lower^dag", residual=max_abs(xd - x.conj().T), tolerance=tol),
        ResidualCheck(name="lower |0> = 0", residual=max_abs(x[:, 0]), tolerance=tol),
        ResidualCheck(name="first off-diagonal only", residual=max_abs(off_band), tolerance=tol),
        ResidualCheck(name="x^dag x diagonal >= 0", residual=max(0.0, -float(np.min(np.real(np.diag(gram))))), tolerance=tol),
        ResidualCheck(name="[N, raise] = raise", residual=max_abs((commutator(number, xd) - xd)[inner, :]), tolerance=tol),
    ]

    if rep.kind is RepKind.GREEN_PARABOSON:
        target = 2.0 * number + rep.p * np.eye(rep.dim)
        checks.append(
            ResidualCheck(
                name="{b^dag, b} = 2N + p",
                residual=max_abs((anticommutator(xd, x) - target)[inner, inner]),
                tolerance=tol,
            )
        )
    if rep.kind is RepKind.PARAFERMION:
        powers = [np.linalg.matrix_power(xd, k)[:, 0] for k in range(rep.p + 2)]
        vacuum_chain = 0.0 if all(np.any(v) for v in powers[: rep.p + 1]) else 1.0
        checks.append(ResidualCheck(name="(f^dag)^k |0> != 0 for k <= p", residual=vacuum_chain, tolerance=0.5))
        checks.append(ResidualCheck(name="(f^dag)^(p+1) = 0", residual=max_abs(np.linalg.matrix_power(xd, rep.p + 1)), tolerance=tol))

    checks.append(
        ResidualCheck(
            name="trilinear Green relation",
            residual=trilinear_residual(rep),
            tolerance=tol if rep.kind is not RepKind.DEFORMED else float("inf"),
        )
    )
    return AuditReport(suite=f"ladder_{rep.kind.value}_p{rep.p}", checks=checks)


def export_rep_csv(rep: LadderRep, target: Union[str, Path, None] = None) -> str:
    labels = [f"n{n}" for n in range(rep.dim)]
    return matrix_to_csv(rep.lower, labels, target)
