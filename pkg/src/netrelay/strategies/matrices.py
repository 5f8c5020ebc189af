"""Block parity-check matrices that tie channel codes to XOR network constraints."""

from __future__ import annotations

from typing import Mapping, Sequence

from ..coding.gf2 import SparseGf2Matrix
from ..errors import ConfigurationError, DimensionError
from ..logger import get_logger

logger = get_logger(__name__)


def _same_shape(h_a: SparseGf2Matrix, h_b: SparseGf2Matrix) -> None:
    if h_a.shape != h_b.shape:
        logger.error("Parity-check shapes differ: %s vs %s", h_a.shape, h_b.shape)
        raise DimensionError(f"parity-check matrices must share a shape, got {h_a.shape} and {h_b.shape}")


def build_h_joint(h_a: SparseGf2Matrix, h_b: SparseGf2Matrix) -> SparseGf2Matrix:
    """``[[H_A, 0], [H_A ⊕ H_B, H_B]]`` over the bits ``[c_A, c_A ⊕ c_B]``.

    Used as is: no row reduction, no removal of dependent rows.
    """

    _same_shape(h_a, h_b)
    return SparseGf2Matrix.block([[h_a, None], [h_a ^ h_b, h_b]])


def build_extended_matrix(
    parity_checks: Mapping[str, SparseGf2Matrix],
    combinations: Sequence[frozenset[str]],
) -> SparseGf2Matrix:
    """Extended Tanner graph matrix for any number of codes and XOR combinations.

    Bit blocks are one per code (in mapping order) followed by one per
    combination. Each code keeps its own checks on its block; each
    combination adds ``n`` checks asserting that its block equals the XOR of
    its member blocks.
    """

    labels = list(parity_checks)
    if not labels:
        raise ConfigurationError("at least one code is required")
    shapes = {matrix.shape for matrix in parity_checks.values()}
    n = next(iter(shapes))[1]
    if any(shape[1] != n for shape in shapes):
        raise DimensionError(f"all codes must share a block length, got shapes {sorted(shapes)}")
    for combo in combinations:
        unknown = set(combo) - set(labels)
        if len(combo) < 2 or unknown:
            raise ConfigurationError(f"combination {sorted(combo)} must name at least two known codes")

    width = len(labels) + len(combinations)
    identity = SparseGf2Matrix.identity(n)
    grid: list[list[SparseGf2Matrix | None]] = []
    for index, label in enumerate(labels):
        row: list[SparseGf2Matrix | None] = [None] * width
        row[index] = parity_checks[label]
        grid.append(row)
    for offset, combo in enumerate(combinations):
        row = [identity if label in combo else None for label in labels] + [None] * len(combinations)
        row[len(labels) + offset] = identity
        grid.append(row)
    return SparseGf2Matrix.block(grid)


def build_h_extn(h_a: SparseGf2Matrix, h_b: SparseGf2Matrix) -> SparseGf2Matrix:
    """``[[H_A, 0, 0], [0, H_B, 0], [I, I, I]]`` over ``[c_A, c_B, c_A ⊕ c_B]``."""

    _same_shape(h_a, h_b)
    return build_extended_matrix({"A": h_a, "B": h_b}, [frozenset({"A", "B"})])
