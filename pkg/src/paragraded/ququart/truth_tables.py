"""
Graded CNOT and Toffoli truth tables.

The tables are produced by simulating the gates and comparing against the printed
rows. A control acts as logical 1 when its b bit is set, so (0,1) and (1,1) trigger
the CNOT and the Toffoli fires for controls ((0,1), (1,1)).
"""

from enum import Enum
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..core.exceptions import ValidationError
from ..grading import G00, G01, G10, G11, Grade
from ..utils.export import table_to_csv
from ..utils.linalg import I2, PAULI_X

PATH_LABELS = ("A_p", "B_p")


class TruthTableKind(str, Enum):
    CNOT = "cnot"
    TOFFOLI = "toffoli"


# (control, target in, target out, operation); None stands for "t".
PRINTED_CNOT: Tuple[Tuple[Grade, Optional[int], Optional[int], str], ...] = (
    (G00, None, None, "No Flip"),
    (G01, 0, 1, "Flip"),
    (G01, 1, 0, "Flip"),
    (G10, None, None, "No Flip"),
    (G11, 0, 1, "Flip"),
    (G11, 1, 0, "Flip"),
)

# (control 1, control 2, target in, target out, operation)
PRINTED_TOFFOLI: Tuple[Tuple[Grade, Grade, str, str, str], ...] = (
    (G00, G10, "A_p", "A_p", "No Flip"),
    (G00, G11, "A_p", "A_p", "No Flip"),
    (G01, G10, "A_p", "A_p", "No Flip"),
    (G01, G11, "A_p", "B_p", "Flip"),
    (G01, G11, "B_p", "A_p", "Flip"),
    (G00, G10, "B_p", "B_p", "No Flip"),
    (G00, G11, "B_p", "B_p", "No Flip"),
    (G01, G10, "B_p", "B_p", "No Flip"),
)


class TruthRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    controls: Tuple[Grade, ...]
    target_in: str
    target_out: str
    operation: str
    printed_out: str
    printed_operation: str

    @property
    def matches(self) -> bool:
        return self.target_out == self.printed_out and self.operation == self.printed_operation


class TruthTable(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: TruthTableKind
    rows: List[TruthRow]

    @property
    def all_match(self) -> bool:
        return all(row.matches for row in self.rows)

    def _header(self) -> List[str]:
        controls = ["control"] if self.kind is TruthTableKind.CNOT else ["control_1", "control_2"]
        return controls + ["target_in", "target_out", "operation", "printed"]

    def _cells(self, row: TruthRow) -> List[str]:
        return [str(g) for g in row.controls] + [
            row.target_in,
            row.target_out,
            row.operation,
            "ok" if row.matches else f"printed {row.printed_out}",
        ]

    def table(self) -> str:
        header = self._header()
        body = [self._cells(row) for row in self.rows]
        widths = [max(len(h), *(len(r[i]) for r in body)) for i, h in enumerate(header)]
        lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
        lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in body]
        return "\n".join(lines)

    def to_csv(self, target: Union[str, Path, None] = None) -> str:
        return table_to_csv(self._header(), [self._cells(row) for row in self.rows], target)


def graded_cnot_matrix() -> np.ndarray:
    """8x8 on control ququart (x) target qubit: X on the target when the control's b = 1."""
    blocks = [PAULI_X if k & 1 else I2 for k in range(4)]
    out = np.zeros((8, 8), dtype=complex)
    for k, block in enumerate(blocks):
        out[2 * k:2 * k + 2, 2 * k:2 * k + 2] = block
    return out


def graded_toffoli_matrix() -> np.ndarray:
    """8x8 on (control 1 bit, control 2 bit, path): X on the path when both bits are set."""
    out = np.eye(8, dtype=complex)
    out[6:8, 6:8] = PAULI_X
    return out


def _read_out(u: np.ndarray, index: int) -> int:
    column = u[:, index]
    return int(np.argmax(np.abs(column))) & 1


def _cnot_rows() -> List[TruthRow]:
    u = graded_cnot_matrix()
    rows = []
    for control, t_in, t_out, printed_op in PRINTED_CNOT:
        for t in (0, 1) if t_in is None else (t_in,):
            out = _read_out(u, 2 * control.index + t)
            expected = t if t_out is None else t_out
            rows.append(
                TruthRow(
                    controls=(control,),
                    target_in=str(t),
                    target_out=str(out),
                    operation="Flip" if out != t else "No Flip",
                    printed_out=str(expected),
                    printed_operation=printed_op,
                )
            )
    return rows


def _toffoli_rows() -> List[TruthRow]:
    u = graded_toffoli_matrix()
    rows = []
    for c1, c2, t_in, t_out, printed_op in PRINTED_TOFFOLI:
        path = PATH_LABELS.index(t_in)
        out = _read_out(u, 4 * c1.b + 2 * c2.b + path)
        rows.append(
            TruthRow(
                controls=(c1, c2),
                target_in=t_in,
                target_out=PATH_LABELS[out],
                operation="Flip" if out != path else "No Flip",
                printed_out=t_out,
                printed_operation=printed_op,
            )
        )
    return rows


def truth_table(kind: Union[str, TruthTableKind]) -> TruthTable:
    try:
        kind = TruthTableKind(str(kind).lower().replace("graded-", ""))
    except ValueError as e:
        raise ValidationError(f"Unknown truth table '{kind}'; expected cnot or toffoli") from e
    rows = _cnot_rows() if kind is TruthTableKind.CNOT else _toffoli_rows()
    return TruthTable(kind=kind, rows=rows)
