"""
Photonic Ququart
================

Spin-orbit ququart with Q_a = OAM parity and Q_b = helicity: clock/shift algebra,
gate set, grade ledgers, Cartan analysis, SU(4) synthesis and graded truth tables.
"""

from .algebra import (
    CNOT_AB,
    CNOT_BA,
    P_GRADE,
    Q_GRADE,
    SIGMA_C,
    TAU,
    clock_shift,
    clock_shift_hamiltonian,
    grading_ops,
    pauli_reduction_audit,
    phase_hamiltonian,
    shift_decomposition_audit,
)
from .cartan import (
    CartanCoords,
    KakDecomposition,
    cartan_coords,
    cnot_count,
    kak_decomposition,
    makhlin_invariants,
    su2_closure,
)
from .circuits import Circuit, EntryStatus, GradeLedger, LedgerEntry, apply_circuit, build_ledger
from .gates import GateOp, compensated_sigma_flip, gate, gate_names, haar_unitary, hwp, jones_circular, qwp
from .states import BASIS_LABELS, QuquartState, grade_of_index
from .synthesis import EulerAngles, euler_xzx, euler_zxz, synthesis_error, synthesize_su4
from .truth_tables import TruthTable, TruthTableKind, truth_table

__all__ = [
    "BASIS_LABELS",
    "CNOT_AB",
    "CNOT_BA",
    "CartanCoords",
    "Circuit",
    "EntryStatus",
    "EulerAngles",
    "GateOp",
    "GradeLedger",
    "KakDecomposition",
    "LedgerEntry",
    "P_GRADE",
    "Q_GRADE",
    "QuquartState",
    "SIGMA_C",
    "TAU",
    "TruthTable",
    "TruthTableKind",
    "apply_circuit",
    "build_ledger",
    "cartan_coords",
    "clock_shift",
    "clock_shift_hamiltonian",
    "cnot_count",
    "compensated_sigma_flip",
    "euler_xzx",
    "euler_zxz",
    "gate",
    "gate_names",
    "grade_of_index",
    "grading_ops",
    "haar_unitary",
    "hwp",
    "jones_circular",
    "kak_decomposition",
    "makhlin_invariants",
    "pauli_reduction_audit",
    "phase_hamiltonian",
    "qwp",
    "shift_decomposition_audit",
    "su2_closure",
    "synthesis_error",
    "synthesize_su4",
    "truth_table",
]
