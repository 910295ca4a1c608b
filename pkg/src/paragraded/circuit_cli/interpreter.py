"""
Executes parsed circuit programs.

Every register starts in |0> and evolves independently. The grade ledger of each
register is checked before anything runs, so a strict-mode violation is reported
without partial output. Assertions and measurements read the state at their
position in the program; measurement reports probabilities and does not collapse.
"""

import logging
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..grading import Grade
from ..ququart.circuits import Circuit, GradeLedger, apply_circuit
from ..ququart.gates import GateOp, gate
from ..ququart.states import BASIS_LABELS, QuquartState
from ..utils.config import Config
from .lexer import Span
from .parser import AssertGrade, GateStmt, Measure, Program, QplateStmt

logger = logging.getLogger(__name__)

ASSERT_TOL = 1e-9


class AssertionOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    register: str
    expected: Grade
    weight: float = Field(description="Probability mass in the expected sector")
    span: Span

    @property
    def passed(self) -> bool:
        return self.weight >= 1.0 - ASSERT_TOL


class MeasurementRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    register: str
    probabilities: Dict[str, float]
    span: Span


class RegisterResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    amplitudes: List[Tuple[float, float]] = Field(description="(re, im) per basis state")
    state: str
    ledger: GradeLedger


class SimulationResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    strict: bool
    registers: List[RegisterResult] = Field(default_factory=list)
    assertions: List[AssertionOutcome] = Field(default_factory=list)
    measurements: List[MeasurementRecord] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    def report(self) -> str:
        lines = []
        for reg in self.registers:
            lines.append(f"register {reg.name}: {reg.state}")
            lines.append(reg.ledger.table())
            lines.append(f"final charge {reg.ledger.charge}")
        for m in self.measurements:
            probs = " ".join(f"|{k}>:{v:.6f}" for k, v in m.probabilities.items())
            lines.append(f"measure {m.register} at {m.span}: {probs}")
        for a in self.assertions:
            status = "ok" if a.passed else "FAILED"
            lines.append(f"assert-grade {a.register} {a.expected} at {a.span}: weight {a.weight:.6f} {status}")
        return "\n".join(lines)


def _op_of(statement) -> GateOp:
    if isinstance(statement, QplateStmt):
        return gate("qplate_pi")
    return gate(statement.gate, *statement.params)


def _sector_weight(state: QuquartState, grade: Grade) -> float:
    return sum(w for g, w in state.sector_weights() if g == grade)


def execute(program: Program, strict: Optional[bool] = None) -> SimulationResult:
    """
    Run a program.

    Args:
        program: Parsed program
        strict: Reject undeclared grade changes that leave the charge unrestored;
            defaults to PARAGRADED_STRICT_GRADES

    Raises:
        GradeConservationError: In strict mode, with the offending gate's span
    """
    if strict is None:
        strict = Config(load_env_file=False).strict_grades
    declared = program.interfaces

    gates: Dict[str, List[Tuple[GateOp, Span]]] = {name: [] for name in program.registers}
    for statement in program.statements:
        if isinstance(statement, (GateStmt, QplateStmt)):
            gates[statement.register].append((_op_of(statement), statement.span))

    finals: Dict[str, Tuple[QuquartState, GradeLedger]] = {}
    for name, entries in gates.items():
        circuit = Circuit(gates=tuple(op for op, _ in entries))
        spans = [span.as_tuple() for _, span in entries]
        finals[name] = apply_circuit(circuit, QuquartState.basis(0), declared=declared, strict=strict, spans=spans)

    states = {name: QuquartState.basis(0) for name in program.registers}
    assertions: List[AssertionOutcome] = []
    measurements: List[MeasurementRecord] = []
    for statement in program.statements:
        if isinstance(statement, (GateStmt, QplateStmt)):
            states[statement.register] = states[statement.register].evolve(_op_of(statement).matrix)
        elif isinstance(statement, AssertGrade):
            weight = _sector_weight(states[statement.register], statement.grade)
            outcome = AssertionOutcome(register=statement.register, expected=statement.grade, weight=weight, span=statement.span)
            if not outcome.passed:
                logger.info(f"assert-grade {statement.register} {statement.grade} failed at {statement.span}")
            assertions.append(outcome)
        elif isinstance(statement, Measure):
            probs = states[statement.register].probabilities()
            measurements.append(
                MeasurementRecord(
                    register=statement.register,
                    probabilities={label: float(p) for label, p in zip(BASIS_LABELS, probs)},
                    span=statement.span,
                )
            )

    registers = []
    for name in program.registers:
        state, ledger = finals[name]
        amps = np.asarray(state.amplitudes)
        registers.append(
            RegisterResult(
                name=name,
                amplitudes=[(float(z.real), float(z.imag)) for z in amps],
                state=state.format(),
                ledger=ledger,
            )
        )
    return SimulationResult(strict=strict, registers=registers, assertions=assertions, measurements=measurements)
