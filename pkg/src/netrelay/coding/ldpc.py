"""LDPC codes: regular 4-cycle-free construction, encoding and persistence."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Optional

import numpy as np

from ..errors import ConstructionError, DimensionError, FormatError, ParameterError
from ..logger import get_logger
from .alist import read_alist, write_alist
from .decoder import TannerGraph
from .gf2 import BitVector, SparseGf2Matrix, derive_generator, mat_vec_mul

logger = get_logger(__name__)

COLUMN_DRAWS = 20
COLUMN_FAILURES_PER_RESTART = 100
DEFAULT_MAX_RESTARTS = 20
# below this many open rows every combination is enumerated instead of sampled
ENUMERATION_THRESHOLD = 12


@dataclass(frozen=True, eq=False)
class LdpcCode:
    """Binary linear code defined by a sparse parity-check matrix."""

    parity_check: SparseGf2Matrix
    w_c: Optional[int] = None
    w_r: Optional[int] = None
    seed: Optional[int] = None
    generator: SparseGf2Matrix = field(init=False, repr=False)
    info_positions: tuple[int, ...] = field(init=False, repr=False)
    permutation: tuple[int, ...] = field(init=False, repr=False)
    graph: TannerGraph = field(init=False, repr=False)
    _encoder: SparseGf2Matrix = field(init=False, repr=False)

    def __post_init__(self) -> None:
        derived = derive_generator(self.parity_check)
        object.__setattr__(self, "generator", derived.matrix)
        object.__setattr__(self, "info_positions", derived.info_positions)
        object.__setattr__(self, "permutation", derived.permutation)
        object.__setattr__(self, "graph", TannerGraph(self.parity_check))
        object.__setattr__(self, "_encoder", derived.matrix.transpose())

    @property
    def H(self) -> SparseGf2Matrix:
        return self.parity_check

    @property
    def G(self) -> SparseGf2Matrix:
        return self.generator

    @property
    def n(self) -> int:
        return self.parity_check.cols

    @property
    def m(self) -> int:
        return self.parity_check.rows

    @property
    def k(self) -> int:
        return self.generator.rows

    @property
    def rate(self) -> float:
        return self.k / self.n

    def encode(self, message: BitVector) -> BitVector:
        return encode(self, message)

    def extract_message(self, codeword: BitVector) -> BitVector:
        """Read the message back off the systematic positions."""

        if len(codeword) != self.n:
            raise DimensionError(f"codeword length {len(codeword)} does not match n={self.n}")
        return BitVector.from_bits(codeword.to_array()[list(self.info_positions)])

    def syndrome(self, word: BitVector) -> BitVector:
        return mat_vec_mul(self.parity_check, word)

    def is_codeword(self, word: BitVector) -> bool:
        return not self.syndrome(word).any()


def encode(code: LdpcCode, message: BitVector) -> BitVector:
    """``u · G`` in the original bit order of ``H``."""

    if len(message) != code.k:
        raise DimensionError(f"message length {len(message)} does not match k={code.k}")
    return mat_vec_mul(code._encoder, message)


def _validate_regular(n: int, w_c: int, w_r: int) -> int:
    if w_c < 2:
        raise ParameterError(f"column weight must be at least 2, got {w_c}")
    if w_r < 2 or w_r > n:
        raise ParameterError(f"row weight must lie in [2, n], got {w_r}")
    if (n * w_c) % w_r:
        raise ParameterError(f"n*w_c = {n * w_c} is not divisible by w_r = {w_r}")
    m = n * w_c // w_r
    if w_c > m:
        raise ParameterError(f"column weight {w_c} exceeds the {m} available rows")
    return m


class _RegularBuilder:
    """Column-by-column placement that never lets two columns share two rows."""

    def __init__(self, n: int, m: int, w_c: int, w_r: int, rng: np.random.Generator) -> None:
        self.n, self.m, self.w_c = n, m, w_c
        self.rng = rng
        self.capacity = np.full(m, w_r, dtype=np.int64)
        self.pairs: set[tuple[int, int]] = set()
        self.columns: list[tuple[int, ...]] = []

    def _fits(self, rows: tuple[int, ...]) -> bool:
        return not any(pair in self.pairs for pair in combinations(rows, 2))

    def _candidate(self) -> Optional[tuple[int, ...]]:
        open_rows = np.flatnonzero(self.capacity > 0)
        if open_rows.size < self.w_c:
            return None
        if open_rows.size <= ENUMERATION_THRESHOLD:
            options = [rows for rows in combinations(open_rows.tolist(), self.w_c) if self._fits(rows)]
            if not options:
                return None
            return options[int(self.rng.integers(len(options)))]
        weights = self.capacity[open_rows] / self.capacity[open_rows].sum()
        for _ in range(COLUMN_DRAWS):
            rows = tuple(sorted(self.rng.choice(open_rows, size=self.w_c, replace=False, p=weights).tolist()))
            if self._fits(rows):
                return rows
        return None

    def push(self) -> bool:
        rows = self._candidate()
        if rows is None:
            return False
        self.columns.append(rows)
        self.capacity[list(rows)] -= 1
        self.pairs.update(combinations(rows, 2))
        return True

    def pop(self) -> None:
        rows = self.columns.pop()
        self.capacity[list(rows)] += 1
        self.pairs.difference_update(combinations(rows, 2))

    def build(self) -> Optional[SparseGf2Matrix]:
        failures = 0
        while len(self.columns) < self.n:
            if self.push():
                continue
            failures += 1
            if failures >= COLUMN_FAILURES_PER_RESTART:
                return None
            if self.columns:
                self.pop()
        entries = [(row, col) for col, rows in enumerate(self.columns) for row in rows]
        return SparseGf2Matrix.from_entries(self.m, self.n, entries)


def construct_regular(
    n: int,
    w_c: int,
    w_r: int,
    seed: int,
    *,
    max_restarts: int = DEFAULT_MAX_RESTARTS,
) -> LdpcCode:
    """Random ``(w_c, w_r)``-regular code whose Tanner graph has girth at least 6.

    Each column draws ``w_c`` rows with spare capacity, weighted by that
    capacity, and is rejected if it would share two rows with an earlier
    column. A column that cannot be placed backtracks one column; after
    ``COLUMN_FAILURES_PER_RESTART`` such failures the build restarts from a
    generator seeded with ``(seed, restart)``.
    """

    m = _validate_regular(n, w_c, w_r)
    for restart in range(max_restarts):
        rng = np.random.default_rng([seed, restart])
        matrix = _RegularBuilder(n, m, w_c, w_r, rng).build()
        if matrix is None:
            logger.debug("Regular construction n=%d seed=%d restart %d failed", n, seed, restart)
            continue
        code = LdpcCode(matrix, w_c=w_c, w_r=w_r, seed=seed)
        logger.info(
            "Constructed (%d,%d)-regular code n=%d m=%d k=%d seed=%d after %d restarts",
            w_c, w_r, n, m, code.k, seed, restart,
        )
        return code
    logger.error("Giving up on (%d,%d)-regular code n=%d seed=%d", w_c, w_r, n, seed)
    raise ConstructionError(f"no 4-cycle-free ({w_c},{w_r})-regular matrix found for n={n}", attempts=max_restarts)


def construct_correlated_pair(
    h1: SparseGf2Matrix,
    seed: int,
    *,
    strict: bool = True,
    max_restarts: int = DEFAULT_MAX_RESTARTS,
) -> SparseGf2Matrix:
    """Companion matrix whose columns each differ from ``h1`` in one row.

    Column ``i`` keeps all but one row of ``h1``'s column ``i`` and moves the
    dropped entry to a row outside the original support, so ``h1 ⊕ h2`` has
    exactly two ones per column. Among the replacements that keep the
    companion free of 4-cycles, the move that best evens out row degrees
    wins. When some column has no such replacement the pass restarts from a
    generator seeded with ``(seed, restart)``.

    With ``strict`` (the default) running out of restarts raises
    ``ConstructionError``; otherwise the attempt with the fewest offending
    columns is returned and a warning is logged.
    """

    weights = h1.column_weights()
    if weights.size == 0 or weights.min() < 2 or weights.min() != weights.max():
        raise ParameterError("construct_correlated_pair needs a column-regular matrix with weight >= 2")
    w_c = int(weights[0])
    if h1.rows <= w_c:
        raise ConstructionError(f"no row outside a weight-{w_c} column among {h1.rows} rows", attempts=1)
    if max_restarts < 1:
        raise ParameterError(f"max_restarts must be positive, got {max_restarts}")

    best_supports: list[tuple[int, ...]] = []
    fewest = h1.cols + 1
    for restart in range(max_restarts):
        supports, compromised = _correlated_pass(h1, np.random.default_rng([seed, restart]))
        if compromised < fewest:
            best_supports, fewest = supports, compromised
        if not compromised:
            break
        logger.debug("Correlated companion seed=%d restart %d left %d columns on a 4-cycle", seed, restart, compromised)

    if fewest:
        if strict:
            logger.error("No 4-cycle-free correlated companion for %dx%d matrix (seed=%d)", h1.rows, h1.cols, seed)
            raise ConstructionError(
                f"{fewest} columns have no replacement row that avoids a 4-cycle", attempts=max_restarts
            )
        logger.warning("Correlated companion kept %d columns that close a 4-cycle", fewest)
    entries = [(row, col) for col, rows in enumerate(best_supports) for row in rows]
    h2 = SparseGf2Matrix.from_entries(h1.rows, h1.cols, entries)
    logger.info("Built correlated companion for %dx%d matrix (seed=%d)", h1.rows, h1.cols, seed)
    return h2


def _correlated_pass(h1: SparseGf2Matrix, rng: np.random.Generator) -> tuple[list[tuple[int, ...]], int]:
    supports = [tuple(int(row) for row in h1.column_support(col)) for col in range(h1.cols)]
    pair_use: Counter[tuple[int, int]] = Counter()
    for rows in supports:
        pair_use.update(combinations(rows, 2))
    degree = h1.row_weights().astype(np.int64)
    compromised = 0

    for col in rng.permutation(h1.cols).tolist():
        old = supports[col]
        pair_use.subtract(combinations(old, 2))
        outside = [row for row in range(h1.rows) if row not in old]
        best: list[tuple[int, int]] = []
        best_key: Optional[tuple[int, int]] = None
        for dropped in old:
            kept = [row for row in old if row != dropped]
            for added in outside:
                clash = sum(pair_use[tuple(sorted((added, row)))] > 0 for row in kept)
                key = (clash, int(degree[added] - degree[dropped]))
                if best_key is None or key < best_key:
                    best, best_key = [(dropped, added)], key
                elif key == best_key:
                    best.append((dropped, added))
        dropped, added = best[int(rng.integers(len(best)))]
        if best_key is not None and best_key[0]:
            compromised += 1
        new = tuple(sorted([row for row in old if row != dropped] + [added]))
        supports[col] = new
        pair_use.update(combinations(new, 2))
        degree[dropped] -= 1
        degree[added] += 1

    return supports, compromised


def count_4cycles(matrix: SparseGf2Matrix) -> int:
    """Sum over column pairs of C(shared rows, 2)."""

    linear: list[np.ndarray] = []
    for row in range(matrix.rows):
        support = matrix.row_support(row)
        if support.size < 2:
            continue
        left, right = np.triu_indices(support.size, 1)
        linear.append(support[left] * matrix.cols + support[right])
    if not linear:
        return 0
    _, shared = np.unique(np.concatenate(linear), return_counts=True)
    return int((shared * (shared - 1) // 2).sum())


def _header_path(path: Path) -> Path:
    return path.with_name(path.name + ".hdr")


def _field(value: Optional[int]) -> str:
    return "-" if value is None else str(value)


def save_code(code: LdpcCode, path: str | Path) -> Path:
    """Write ``H`` as alist plus a ``<path>.hdr`` line ``n k w_c w_r seed``."""

    target = write_alist(code.parity_check, path)
    header = " ".join([str(code.n), str(code.k), _field(code.w_c), _field(code.w_r), _field(code.seed)])
    _header_path(target).write_text(header + "\n", encoding="ascii", newline="\n")
    logger.info("Saved code n=%d k=%d to %s", code.n, code.k, target)
    return target


def load_code(path: str | Path) -> LdpcCode:
    source = Path(path)
    matrix = read_alist(source)
    header = _header_path(source)
    if not header.exists():
        return LdpcCode(matrix)
    tokens = header.read_text(encoding="ascii").split()
    if len(tokens) != 5:
        raise FormatError(f"code header {header} must hold five fields, found {len(tokens)}")
    try:
        n, k, w_c, w_r, seed = (None if token == "-" else int(token) for token in tokens)
    except ValueError as exc:
        raise FormatError(f"code header {header} is not numeric") from exc
    code = LdpcCode(matrix, w_c=w_c, w_r=w_r, seed=seed)
    if (n, k) != (code.n, code.k):
        raise FormatError(f"header declares n={n} k={k} but the matrix gives n={code.n} k={code.k}")
    return code
