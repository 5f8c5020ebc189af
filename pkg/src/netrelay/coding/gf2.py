"""Bit-exact linear algebra over GF(2).

Vectors are stored packed (eight bits per byte, MSB first) and matrices as
compressed sparse rows. Every public operation is defined on logical bit
order, so the packing never leaks out of this module.
"""

from __future__ import annotations

from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from ..errors import DegenerateCodeError, DimensionError, DuplicateEntryError
from ..logger import get_logger

logger = get_logger(__name__)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _as_bits(values: Iterable[int] | np.ndarray) -> np.ndarray:
    bits = np.asarray(values if isinstance(values, np.ndarray) else list(values))
    if bits.ndim != 1:
        raise DimensionError(f"bit sequences must be one-dimensional, got shape {bits.shape}")
    if bits.size and not np.isin(bits, (0, 1)).all():
        raise ValueError("bit sequences may only contain 0 and 1")
    return bits.astype(np.uint8, copy=False)


class BitVector:
    """Immutable fixed-length binary vector."""

    __slots__ = ("_packed", "_length")

    def __init__(self, packed: np.ndarray, length: int) -> None:
        if packed.dtype != np.uint8 or packed.size != (length + 7) // 8:
            raise DimensionError(f"packed buffer of {packed.size} bytes cannot hold {length} bits")
        self._packed = _frozen(packed)
        self._length = int(length)

    @classmethod
    def from_bits(cls, bits: Iterable[int] | np.ndarray) -> "BitVector":
        array = _as_bits(bits)
        return cls(np.packbits(array), array.size)

    @classmethod
    def from_string(cls, text: str) -> "BitVector":
        return cls.from_bits(int(char) for char in text.strip())

    @classmethod
    def zeros(cls, length: int) -> "BitVector":
        return cls(np.zeros((length + 7) // 8, dtype=np.uint8), length)

    @classmethod
    def concat(cls, *vectors: "BitVector") -> "BitVector":
        if not vectors:
            return cls.zeros(0)
        return cls.from_bits(np.concatenate([vector.to_array() for vector in vectors]))

    @property
    def packed(self) -> np.ndarray:
        return self._packed

    def to_array(self) -> np.ndarray:
        """Unpacked copy as a ``uint8`` array of 0/1."""

        return np.unpackbits(self._packed, count=self._length)

    def weight(self) -> int:
        return int(self.to_array().sum())

    def any(self) -> bool:
        return bool(self._packed.any())

    def __len__(self) -> int:
        return self._length

    def __iter__(self) -> Iterator[int]:
        return iter(int(bit) for bit in self.to_array())

    def __getitem__(self, index: int | slice) -> "int | BitVector":
        if isinstance(index, slice):
            return BitVector.from_bits(self.to_array()[index])
        if not -self._length <= index < self._length:
            raise IndexError(f"bit index {index} out of range for length {self._length}")
        return int(self.to_array()[index])

    def __xor__(self, other: "BitVector") -> "BitVector":
        return xor(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self._length == other._length and np.array_equal(self._packed, other._packed)

    def __hash__(self) -> int:
        return hash((self._length, self._packed.tobytes()))

    def __str__(self) -> str:
        return "".join(str(int(bit)) for bit in self.to_array())

    def __repr__(self) -> str:
        if self._length <= 64:
            return f"BitVector('{self}')"
        return f"BitVector(length={self._length}, weight={self.weight()})"


def xor(a: BitVector, b: BitVector) -> BitVector:
    """Bitwise modulo-2 sum of two equal-length vectors."""

    if len(a) != len(b):
        raise DimensionError(f"cannot xor vectors of length {len(a)} and {len(b)}")
    return BitVector(np.bitwise_xor(a.packed, b.packed), len(a))


class SparseGf2Matrix:
    """Immutable binary matrix in compressed sparse row form.

    ``indptr[r]:indptr[r + 1]`` slices ``indices`` to the sorted column
    positions holding a 1 in row ``r``.
    """

    __slots__ = ("_rows", "_cols", "_indptr", "_indices", "_row_ids")

    def __init__(self, rows: int, cols: int, indptr: np.ndarray, indices: np.ndarray) -> None:
        self._rows = int(rows)
        self._cols = int(cols)
        self._indptr = _frozen(np.asarray(indptr, dtype=np.int64))
        self._indices = _frozen(np.asarray(indices, dtype=np.int64))
        self._row_ids = _frozen(np.repeat(np.arange(self._rows, dtype=np.int64), np.diff(self._indptr)))

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[tuple[int, int]] | np.ndarray) -> "SparseGf2Matrix":
        if rows < 0 or cols < 0:
            raise DimensionError(f"invalid matrix shape {rows}x{cols}")
        coords = np.asarray(entries if isinstance(entries, np.ndarray) else list(entries), dtype=np.int64)
        coords = coords.reshape(-1, 2)
        r, c = coords[:, 0], coords[:, 1]
        if coords.size and (r.min() < 0 or r.max() >= rows or c.min() < 0 or c.max() >= cols):
            raise DimensionError(f"entry outside a {rows}x{cols} matrix")
        order = np.lexsort((c, r))
        r, c = r[order], c[order]
        if r.size > 1:
            repeated = (r[1:] == r[:-1]) & (c[1:] == c[:-1])
            if repeated.any():
                position = int(np.flatnonzero(repeated)[0])
                logger.error("Duplicate sparse entry at (%d, %d)", r[position], c[position])
                raise DuplicateEntryError(f"duplicate entry at ({r[position]}, {c[position]})")
        indptr = np.zeros(rows + 1, dtype=np.int64)
        np.cumsum(np.bincount(r, minlength=rows), out=indptr[1:])
        return cls(rows, cols, indptr, c)

    @classmethod
    def from_dense(cls, array: Sequence[Sequence[int]] | np.ndarray) -> "SparseGf2Matrix":
        dense = np.asarray(array)
        if dense.ndim != 2:
            raise DimensionError(f"dense matrix must be two-dimensional, got shape {dense.shape}")
        if dense.size and not np.isin(dense, (0, 1)).all():
            raise ValueError("dense matrix may only contain 0 and 1")
        rows, cols = dense.shape
        return cls.from_entries(rows, cols, np.argwhere(dense != 0))

    @classmethod
    def from_rows(cls, cols: int, supports: Sequence[Iterable[int]]) -> "SparseGf2Matrix":
        """Build from one column-index list per row."""

        entries = [(row, col) for row, support in enumerate(supports) for col in support]
        return cls.from_entries(len(supports), cols, entries)

    @classmethod
    def identity(cls, size: int) -> "SparseGf2Matrix":
        diagonal = np.arange(size, dtype=np.int64)
        return cls(size, size, np.arange(size + 1, dtype=np.int64), diagonal)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "SparseGf2Matrix":
        return cls(rows, cols, np.zeros(rows + 1, dtype=np.int64), np.zeros(0, dtype=np.int64))

    @classmethod
    def block(cls, grid: Sequence[Sequence["SparseGf2Matrix | None"]]) -> "SparseGf2Matrix":
        """Assemble a block matrix; ``None`` stands for a zero block.

        Every block row needs at least one concrete block to fix its height
        and every block column likewise to fix its width.
        """

        if not grid or not grid[0]:
            raise DimensionError("block grid must be non-empty")
        width = len(grid[0])
        if any(len(row) != width for row in grid):
            raise DimensionError("block grid rows must have equal length")
        heights: list[int] = []
        for row in grid:
            sizes = {block.rows for block in row if block is not None}
            if len(sizes) != 1:
                raise DimensionError(f"block row heights disagree or are undetermined: {sorted(sizes)}")
            heights.append(sizes.pop())
        widths: list[int] = []
        for index in range(width):
            sizes = {row[index].cols for row in grid if row[index] is not None}
            if len(sizes) != 1:
                raise DimensionError(f"block column widths disagree or are undetermined: {sorted(sizes)}")
            widths.append(sizes.pop())
        row_offsets = np.concatenate(([0], np.cumsum(heights)))
        col_offsets = np.concatenate(([0], np.cumsum(widths)))
        pieces = [
            block.entries() + (row_offsets[i], col_offsets[j])
            for i, row in enumerate(grid)
            for j, block in enumerate(row)
            if block is not None and block.nnz
        ]
        coords = np.concatenate(pieces) if pieces else np.zeros((0, 2), dtype=np.int64)
        return cls.from_entries(int(row_offsets[-1]), int(col_offsets[-1]), coords)

    @property
    def rows(self) -> int:
        return self._rows

    @property
    def cols(self) -> int:
        return self._cols

    @property
    def shape(self) -> tuple[int, int]:
        return self._rows, self._cols

    @property
    def nnz(self) -> int:
        return int(self._indices.size)

    @property
    def indptr(self) -> np.ndarray:
        return self._indptr

    @property
    def indices(self) -> np.ndarray:
        return self._indices

    @property
    def row_ids(self) -> np.ndarray:
        """Row index of every stored entry, aligned with ``indices``."""

        return self._row_ids

    def entries(self) -> np.ndarray:
        """``(nnz, 2)`` array of (row, col) positions in row-major order."""

        return np.column_stack((self._row_ids, self._indices))

    def row_support(self, row: int) -> np.ndarray:
        return self._indices[self._indptr[row] : self._indptr[row + 1]]

    def column_support(self, col: int) -> np.ndarray:
        return self._row_ids[self._indices == col]

    def row_weights(self) -> np.ndarray:
        return np.diff(self._indptr)

    def column_weights(self) -> np.ndarray:
        return np.bincount(self._indices, minlength=self._cols)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.shape, dtype=np.uint8)
        dense[self._row_ids, self._indices] = 1
        return dense

    def transpose(self) -> "SparseGf2Matrix":
        return SparseGf2Matrix.from_entries(self._cols, self._rows, self.entries()[:, ::-1])

    @property
    def T(self) -> "SparseGf2Matrix":
        return self.transpose()

    def xor(self, other: "SparseGf2Matrix") -> "SparseGf2Matrix":
        """Entry-wise modulo-2 sum (matrix addition over GF(2))."""

        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape} matrices")
        linear = np.concatenate(
            (self._row_ids * self._cols + self._indices, other._row_ids * other._cols + other._indices)
        )
        positions, counts = np.unique(linear, return_counts=True)
        kept = positions[counts % 2 == 1]
        return SparseGf2Matrix.from_entries(self._rows, self._cols, np.column_stack(np.divmod(kept, self._cols)))

    def __xor__(self, other: "SparseGf2Matrix") -> "SparseGf2Matrix":
        return self.xor(other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseGf2Matrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self._indptr, other._indptr)
            and np.array_equal(self._indices, other._indices)
        )

    def __hash__(self) -> int:
        return hash((self.shape, self._indptr.tobytes(), self._indices.tobytes()))

    def __repr__(self) -> str:
        return f"SparseGf2Matrix(rows={self._rows}, cols={self._cols}, nnz={self.nnz})"


def mat_vec_mul(matrix: SparseGf2Matrix, vector: BitVector) -> BitVector:
    """``matrix · vector`` over GF(2); used as the syndrome check ``H c^T``."""

    if matrix.cols != len(vector):
        raise DimensionError(f"matrix has {matrix.cols} columns but vector has length {len(vector)}")
    bits = vector.to_array()
    sums = np.bincount(matrix.row_ids, weights=bits[matrix.indices], minlength=matrix.rows)
    return BitVector.from_bits(sums.astype(np.int64) % 2)


class GaussJordanResult(NamedTuple):
    reduced: SparseGf2Matrix
    rank: int
    pivot_cols: list[int]


def gauss_jordan(matrix: SparseGf2Matrix) -> GaussJordanResult:
    """Reduced row-echelon form over GF(2).

    Rows are packed into bytes so each elimination step is a single XOR of
    whole packed rows. Zero rows collect at the bottom of ``reduced``.
    """

    rows, cols = matrix.shape
    packed = np.packbits(matrix.to_dense(), axis=1) if rows and cols else np.zeros((rows, 0), dtype=np.uint8)
    pivots: list[int] = []
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        byte, shift = divmod(col, 8)
        column_bits = (packed[:, byte] >> (7 - shift)) & 1
        candidates = np.flatnonzero(column_bits[rank:])
        if candidates.size == 0:
            continue
        pivot_row = rank + int(candidates[0])
        if pivot_row != rank:
            packed[[rank, pivot_row]] = packed[[pivot_row, rank]]
            column_bits[[rank, pivot_row]] = column_bits[[pivot_row, rank]]
        targets = np.flatnonzero(column_bits)
        targets = targets[targets != rank]
        if targets.size:
            packed[targets] ^= packed[rank]
        pivots.append(col)
        rank += 1
    dense = np.unpackbits(packed, axis=1, count=cols) if cols else np.zeros((rows, 0), dtype=np.uint8)
    return GaussJordanResult(SparseGf2Matrix.from_dense(dense), rank, pivots)


def rank_gf2(matrix: SparseGf2Matrix) -> int:
    return gauss_jordan(matrix).rank


class DerivedGenerator(NamedTuple):
    """Generator matrix plus the systematic bookkeeping for encoding.

    ``matrix`` is already in the original bit order of ``H``. Message bit
    ``j`` appears verbatim at codeword position ``info_positions[j]``.
    ``permutation`` lists info positions followed by pivot positions, i.e.
    the column order in which ``matrix`` would read ``[I_k | P]``.
    """

    matrix: SparseGf2Matrix
    info_positions: tuple[int, ...]
    permutation: tuple[int, ...]


def derive_generator(parity_check: SparseGf2Matrix) -> DerivedGenerator:
    """Null-space basis of ``parity_check`` as a generator matrix."""

    reduced, rank, pivots = gauss_jordan(parity_check)
    n = parity_check.cols
    k = n - rank
    if k <= 0:
        logger.error("Parity-check matrix %s has full column rank; code is trivial", parity_check.shape)
        raise DegenerateCodeError(f"rank {rank} equals block length {n}; k = 0")
    pivot_set = set(pivots)
    free = [col for col in range(n) if col not in pivot_set]
    dense = reduced.to_dense()[:rank]
    pivot_index = np.asarray(pivots, dtype=np.int64)
    generator = np.zeros((k, n), dtype=np.uint8)
    for row, col in enumerate(free):
        generator[row, col] = 1
        generator[row, pivot_index] = dense[:, col]
    logger.debug("Derived generator: n=%d rank=%d k=%d", n, rank, k)
    return DerivedGenerator(
        SparseGf2Matrix.from_dense(generator),
        tuple(free),
        tuple(free + pivots),
    )
