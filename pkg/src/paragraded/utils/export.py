"""
CSV writers for matrices and tables.

Complex matrices are written row-major as ``re,im`` column pairs. Every matrix file
opens with a header naming its basis ordering.
"""

import csv
import io
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, TextIO, Union

import numpy as np

from ..core.exceptions import ValidationError

Target = Union[str, Path, TextIO]


def _open(target: Target) -> tuple[TextIO, bool]:
    if isinstance(target, (str, Path)):
        return open(target, "w", newline="", encoding="utf-8"), True
    return target, False


def matrix_to_csv(
    matrix: np.ndarray,
    basis: Sequence[str],
    target: Optional[Target] = None,
) -> str:
    """
    Write a square matrix as CSV.

    Args:
        matrix: Matrix to export
        basis: Labels for rows and columns, in order
        target: Path or open text stream; when None the CSV text is only returned

    Returns:
        The CSV text
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    complex_valued = np.iscomplexobj(matrix) and bool(np.any(np.imag(matrix)))

    if complex_valued:
        header = ["row"] + [f"{label}_{part}" for label in basis for part in ("re", "im")]
    else:
        header = ["row"] + list(basis)
    writer.writerow([f"# basis: {' '.join(basis)}"])
    writer.writerow(header)

    for label, row in zip(basis, np.asarray(matrix)):
        if complex_valued:
            cells = [f"{v:.17g}" for z in row for v in (z.real, z.imag)]
        else:
            cells = [f"{float(np.real(v)):.17g}" for v in row]
        writer.writerow([label] + cells)

    text = buffer.getvalue()
    if target is not None:
        stream, owned = _open(target)
        try:
            stream.write(text)
        finally:
            if owned:
                stream.close()
    return text


def table_to_csv(
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    target: Optional[Target] = None,
) -> str:
    """Write a header plus rows as CSV; floats use round-trip precision."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])

    text = buffer.getvalue()
    if target is not None:
        stream, owned = _open(target)
        try:
            stream.write(text)
        finally:
            if owned:
                stream.close()
    return text


def matrix_from_csv(source: Union[str, Path, TextIO]) -> np.ndarray:
    """
    Read a square matrix written by ``matrix_to_csv``.

    Headerless files of bare entries are accepted too; every cell then goes through
    ``complex()``, so ``1``, ``-0.5j`` and ``0.7+0.7j`` all parse.

    Raises:
        ValidationError: If the file is empty, ragged or not square
    """
    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8") as stream:
            rows = [row for row in csv.reader(stream) if row]
    else:
        rows = [row for row in csv.reader(source) if row]

    rows = [row for row in rows if not row[0].lstrip().startswith("#")]
    if rows and rows[0][0].strip() == "row":
        header, body = rows[0], rows[1:]
        paired = any(cell.endswith("_im") for cell in header)
        try:
            values = [[float(cell) for cell in row[1:]] for row in body]
        except ValueError as e:
            raise ValidationError(f"Non-numeric matrix entry: {e}") from e
        if paired:
            values = [[complex(r[i], r[i + 1]) for i in range(0, len(r), 2)] for r in values]
    else:
        try:
            values = [[complex(cell.strip().replace(" ", "")) for cell in row] for row in rows]
        except ValueError as e:
            raise ValidationError(f"Non-numeric matrix entry: {e}") from e

    if not values or any(len(r) != len(values) for r in values):
        raise ValidationError(f"Matrix CSV must hold a square matrix, got {len(values)} rows")
    return np.array(values, dtype=complex)
