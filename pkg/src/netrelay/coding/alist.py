"""Reader and writer for the MacKay ``alist`` sparse-matrix format.

Layout::

    n m
    max_col_degree max_row_degree
    <n column degrees>
    <m row degrees>
    <n lines: 1-based row indices of each column, zero padded>
    <m lines: 1-based column indices of each row, zero padded>
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..errors import FormatError
from ..logger import get_logger
from .gf2 import SparseGf2Matrix

logger = get_logger(__name__)


def _index_line(values: np.ndarray, width: int) -> str:
    padded = list(values + 1) + [0] * (width - len(values))
    return " ".join(str(int(value)) for value in padded)


def format_alist(matrix: SparseGf2Matrix) -> str:
    """Render ``matrix`` as alist text with LF line endings."""

    col_weights = matrix.column_weights()
    row_weights = matrix.row_weights()
    max_col = int(col_weights.max()) if col_weights.size else 0
    max_row = int(row_weights.max()) if row_weights.size else 0
    lines = [
        f"{matrix.cols} {matrix.rows}",
        f"{max_col} {max_row}",
        " ".join(str(int(w)) for w in col_weights),
        " ".join(str(int(w)) for w in row_weights),
    ]
    lines.extend(_index_line(matrix.column_support(col), max_col) for col in range(matrix.cols))
    lines.extend(_index_line(matrix.row_support(row), max_row) for row in range(matrix.rows))
    return "\n".join(lines) + "\n"


def parse_alist(text: str) -> SparseGf2Matrix:
    """Parse alist text; zero padding is ignored, and both views must agree."""

    try:
        table = [[int(token) for token in line.split()] for line in text.splitlines() if line.strip()]
    except ValueError as exc:
        raise FormatError(f"non-integer token in alist data: {exc}") from exc
    if len(table) < 4 or len(table[0]) != 2:
        raise FormatError("alist header is incomplete")
    n, m = table[0]
    col_degrees, row_degrees = table[2], table[3]
    if len(col_degrees) != n or len(row_degrees) != m:
        raise FormatError(f"degree lists do not match declared shape {m}x{n}")
    if len(table) != 4 + n + m:
        raise FormatError(f"expected {4 + n + m} non-empty lines, found {len(table)}")

    col_entries = set()
    for col, line in enumerate(table[4 : 4 + n]):
        rows = [value - 1 for value in line if value != 0]
        if len(rows) != col_degrees[col]:
            raise FormatError(f"column {col} lists {len(rows)} rows but declares degree {col_degrees[col]}")
        col_entries.update((row, col) for row in rows)
    row_entries = set()
    for row, line in enumerate(table[4 + n :]):
        cols = [value - 1 for value in line if value != 0]
        if len(cols) != row_degrees[row]:
            raise FormatError(f"row {row} lists {len(cols)} columns but declares degree {row_degrees[row]}")
        row_entries.update((row, col) for col in cols)
    if col_entries != row_entries:
        raise FormatError("column and row index lists describe different matrices")
    return SparseGf2Matrix.from_entries(m, n, sorted(col_entries))


def write_alist(matrix: SparseGf2Matrix, path: str | Path) -> Path:
    target = Path(path)
    with target.open("w", encoding="ascii", newline="\n") as handle:
        handle.write(format_alist(matrix))
    logger.debug("Wrote %dx%d alist matrix to %s", matrix.rows, matrix.cols, target)
    return target


def read_alist(path: str | Path) -> SparseGf2Matrix:
    source = Path(path)
    matrix = parse_alist(source.read_text(encoding="ascii"))
    logger.debug("Read %dx%d alist matrix from %s", matrix.rows, matrix.cols, source)
    return matrix
