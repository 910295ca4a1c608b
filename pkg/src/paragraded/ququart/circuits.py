"""
Gate sequences, grade ledgers and circuit application.
"""

import logging
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..core.exceptions import GradeConservationError
from ..grading import G00, Grade, grade_add
from ..utils.config import Config
from .gates import GateOp
from .states import QuquartState

logger = logging.getLogger(__name__)


class Circuit(BaseModel):
    """Gates in time order plus a global phase exp(i * global_phase)."""
    model_config = ConfigDict(frozen=True)

    gates: Tuple[GateOp, ...] = Field(default=())
    global_phase: float = Field(default=0.0)

    def unitary(self) -> np.ndarray:
        u = np.eye(4, dtype=complex)
        for op in self.gates:
            u = op.matrix @ u
        return np.exp(1j * self.global_phase) * u

    def cnot_count(self) -> int:
        return sum(1 for op in self.gates if op.name in ("CNOT_ba", "qplate_pi"))

    def rotation_count(self) -> int:
        return sum(1 for op in self.gates if op.params)

    def labels(self) -> List[str]:
        return [op.label() for op in self.gates]

    def __len__(self) -> int:
        return len(self.gates)


class EntryStatus(str, Enum):
    CONSERVING = "conserving"
    INTERFACE = "interface"
    COMPENSATED = "compensated"
    UNDECLARED = "undeclared"


class LedgerEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int
    gate: str
    delta: Grade
    cumulative: Grade
    status: EntryStatus


class GradeLedger(BaseModel):
    """Running Z2 x Z2 charge of a circuit."""
    model_config = ConfigDict(frozen=True)

    entries: List[LedgerEntry] = Field(default_factory=list)

    @property
    def charge(self) -> Grade:
        return self.entries[-1].cumulative if self.entries else G00

    @property
    def conserving(self) -> bool:
        return self.charge == G00

    @property
    def undeclared(self) -> List[LedgerEntry]:
        return [e for e in self.entries if e.status is EntryStatus.UNDECLARED]

    @property
    def flagged(self) -> bool:
        """Charge not restored and at least one grade change was never declared."""
        return not self.conserving and bool(self.undeclared)

    def table(self) -> str:
        lines = [f"{'#':>3} {'gate':<16} {'delta':>6} {'charge':>7}  status"]
        for e in self.entries:
            lines.append(f"{e.index:>3} {e.gate:<16} {str(e.delta):>6} {str(e.cumulative):>7}  {e.status.value}")
        return "\n".join(lines)


def build_ledger(gates: Sequence[GateOp], declared: Iterable[str] = ()) -> GradeLedger:
    declared_names: Set[str] = set(declared)
    charge = G00
    entries = []
    for i, op in enumerate(gates):
        charge = grade_add(charge, op.grade_delta)
        if not op.changes_grade:
            status = EntryStatus.CONSERVING
        elif op.compensated:
            status = EntryStatus.COMPENSATED
        elif op.interface or op.name in declared_names:
            status = EntryStatus.INTERFACE
        else:
            status = EntryStatus.UNDECLARED
        entries.append(LedgerEntry(index=i, gate=op.label(), delta=op.grade_delta, cumulative=charge, status=status))
    return GradeLedger(entries=entries)


def apply_circuit(
    circuit: Circuit,
    state: QuquartState,
    declared: Iterable[str] = (),
    strict: Optional[bool] = None,
    spans: Optional[Sequence[Tuple[int, int]]] = None,
) -> Tuple[QuquartState, GradeLedger]:
    """
    Apply the gates in order and account for every grade change.

    Args:
        circuit: Gates to apply
        state: Input state
        declared: Gate names declared as grade-changing interfaces
        strict: Reject circuits whose charge is not restored because of an undeclared
            gate; defaults to the PARAGRADED_STRICT_GRADES setting
        spans: Optional source spans per gate, attached to the error

    Raises:
        GradeConservationError: In strict mode, naming the first undeclared gate
    """
    if strict is None:
        strict = Config(load_env_file=False).strict_grades
    ledger = build_ledger(circuit.gates, declared)

    if ledger.flagged:
        first = ledger.undeclared[0]
        span = spans[first.index] if spans is not None and first.index < len(spans) else None
        message = (
            f"Gate {first.index} ({first.gate}) changes the grade by {first.delta} "
            f"without being declared; final charge {ledger.charge}"
        )
        if strict:
            raise GradeConservationError(message, gate_index=first.index, gate_name=first.gate, span=span)
        logger.warning(message)

    out = state
    for op in circuit.gates:
        out = out.evolve(op.matrix)
    if circuit.global_phase:
        out = QuquartState(amplitudes=np.exp(1j * circuit.global_phase) * out.amplitudes)
    return out, ledger
