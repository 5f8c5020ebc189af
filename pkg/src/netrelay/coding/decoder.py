"""Tanner graphs, channel LLRs and flooding sum-product decoding."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from ..errors import DimensionError, ParameterError
from ..logger import get_logger
from .gf2 import BitVector, SparseGf2Matrix

logger = get_logger(__name__)

MESSAGE_CLAMP = 30.0
_TANH_LIMIT = float(np.tanh(MESSAGE_CLAMP / 2.0))


@dataclass(frozen=True, eq=False)
class TannerGraph:
    """Bipartite check/bit adjacency of a parity-check matrix.

    Edges are numbered in row-major order of ``parity_check`` so that the
    edges of each check node are contiguous (``check_ptr`` delimits them).
    """

    parity_check: SparseGf2Matrix
    edge_check: np.ndarray = field(init=False, repr=False)
    edge_bit: np.ndarray = field(init=False, repr=False)
    check_ptr: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "edge_check", self.parity_check.row_ids)
        object.__setattr__(self, "edge_bit", self.parity_check.indices)
        object.__setattr__(self, "check_ptr", self.parity_check.indptr)

    @classmethod
    def from_matrix(cls, parity_check: SparseGf2Matrix) -> "TannerGraph":
        return cls(parity_check)

    @property
    def bit_count(self) -> int:
        return self.parity_check.cols

    @property
    def check_count(self) -> int:
        return self.parity_check.rows

    @property
    def edge_count(self) -> int:
        return int(self.edge_bit.size)

    def bit_degrees(self) -> np.ndarray:
        return self.parity_check.column_weights()

    def check_degrees(self) -> np.ndarray:
        return self.parity_check.row_weights()

    def syndrome_of(self, bits: np.ndarray) -> np.ndarray:
        """Per-check parity of an unpacked hard decision."""

        sums = np.bincount(self.edge_check, weights=bits[self.edge_bit], minlength=self.check_count)
        return sums.astype(np.int64) % 2


@dataclass(frozen=True, eq=False)
class LlrVector:
    """Per-bit log-likelihood ratios, positive favouring bit 0."""

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise DimensionError(f"LLR vector must be one-dimensional, got shape {values.shape}")
        if not np.isfinite(values).all():
            raise ParameterError("LLR values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.values.size)

    @classmethod
    def concat(cls, parts: Iterable["LlrVector"]) -> "LlrVector":
        return cls(np.concatenate([part.values for part in parts]))


def bsc_llr(received: BitVector, p: float) -> LlrVector:
    """Channel LLRs of a word received over a BSC with crossover ``p``."""

    if not 0.0 < p < 0.5:
        logger.error("Rejected crossover probability %r for LLR initialisation", p)
        raise ParameterError(f"crossover probability must lie in (0, 0.5), got {p}")
    magnitude = np.log((1.0 - p) / p)
    return LlrVector(np.where(received.to_array() == 0, magnitude, -magnitude))


def erased_llr(length: int) -> LlrVector:
    """All-zero prior: nothing is known about any bit."""

    if length < 1:
        raise ParameterError(f"erased segment length must be positive, got {length}")
    return LlrVector(np.zeros(length))


@dataclass(frozen=True, slots=True)
class DecodeResult:
    hard_decision: BitVector
    converged: bool
    iterations_used: int


def _hard(totals: np.ndarray) -> np.ndarray:
    # exact zero decides 0
    return (totals < 0).astype(np.uint8)


def _check_update(graph: TannerGraph, to_check: np.ndarray) -> np.ndarray:
    """Exact tanh-rule extrinsic messages from every check to its bits."""

    t = np.tanh(to_check / 2.0)
    is_zero = t == 0.0
    safe = np.where(is_zero, 1.0, t)

    occupied = graph.check_degrees() > 0
    starts = graph.check_ptr[:-1][occupied]
    product = np.ones(graph.check_count)
    zeros = np.zeros(graph.check_count, dtype=np.int64)
    if starts.size:
        product[occupied] = np.multiply.reduceat(safe, starts)
        zeros[occupied] = np.add.reduceat(is_zero.astype(np.int64), starts)

    edge_product = product[graph.edge_check]
    edge_zeros = zeros[graph.edge_check]
    extrinsic = np.where(
        edge_zeros == 0,
        edge_product / safe,
        np.where(is_zero & (edge_zeros == 1), edge_product, 0.0),
    )
    extrinsic = np.clip(extrinsic, -_TANH_LIMIT, _TANH_LIMIT)
    return np.clip(2.0 * np.arctanh(extrinsic), -MESSAGE_CLAMP, MESSAGE_CLAMP)


def sum_product_decode(
    graph: TannerGraph,
    prior: LlrVector,
    max_iters: int,
    *,
    early_stop: bool = True,
) -> DecodeResult:
    """Flooding-schedule belief propagation in the LLR domain.

    The syndrome of the a-priori hard decision is checked before the first
    iteration and after each one. With ``early_stop`` the decoder returns as
    soon as it is satisfied; otherwise all ``max_iters`` iterations run and
    the final syndrome decides ``converged``.
    """

    if len(prior) != graph.bit_count:
        raise DimensionError(f"prior has {len(prior)} values but the graph has {graph.bit_count} bits")
    if max_iters < 1:
        raise ParameterError(f"max_iters must be at least 1, got {max_iters}")

    channel = prior.values
    hard = _hard(channel)
    satisfied = not graph.syndrome_of(hard).any()
    if satisfied and early_stop:
        return DecodeResult(BitVector.from_bits(hard), True, 0)

    to_bit = np.zeros(graph.edge_count)
    totals = channel.copy()
    iterations = 0
    for iterations in range(1, max_iters + 1):
        to_check = np.clip(totals[graph.edge_bit] - to_bit, -MESSAGE_CLAMP, MESSAGE_CLAMP)
        to_bit = _check_update(graph, to_check)
        totals = channel + np.bincount(graph.edge_bit, weights=to_bit, minlength=graph.bit_count)
        hard = _hard(totals)
        satisfied = not graph.syndrome_of(hard).any()
        if satisfied and early_stop:
            break

    return DecodeResult(BitVector.from_bits(hard), satisfied, iterations)
