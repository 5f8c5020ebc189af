"""Decoding from packets that each carry the XOR of some subset of codewords.

The two-codeword strategies are special cases of the schedules here: a
destination holding ``c̃_1, c̃_{1,2}, c̃_{1,3}`` can resolve networks first
and decode each codeword alone, peel decoded codewords off one packet at a
time, or decode everything at once on an extended Tanner graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Optional, Sequence

import numpy as np

from ..coding.decoder import LlrVector, TannerGraph, bsc_llr, erased_llr, sum_product_decode
from ..coding.gf2 import BitVector
from ..coding.ldpc import LdpcCode
from ..errors import ConfigurationError, DimensionError
from ..logger import get_logger
from ..network.channel import effective_crossover
from .matrices import build_extended_matrix

logger = get_logger(__name__)


@dataclass(frozen=True, slots=True)
class ReceivedPacket:
    labels: frozenset[str]
    word: BitVector
    p: float

    def __post_init__(self) -> None:
        if not self.labels:
            raise ConfigurationError("a packet must carry at least one codeword")
        if not 0.0 < self.p < 0.5:
            raise ConfigurationError(f"packet crossover must lie in (0, 0.5), got {self.p}")


@dataclass(slots=True)
class PacketDecodeResult:
    words: dict[str, BitVector] = field(default_factory=dict)
    converged: dict[str, bool] = field(default_factory=dict)
    iterations: int = 0


def _check_inputs(codes: Mapping[str, LdpcCode], packets: Sequence[ReceivedPacket]) -> int:
    lengths = {code.n for code in codes.values()} | {len(packet.word) for packet in packets}
    if len(lengths) != 1:
        raise DimensionError(f"codes and packets must share one block length, got {sorted(lengths)}")
    for packet in packets:
        unknown = packet.labels - set(codes)
        if unknown:
            raise ConfigurationError(f"packet refers to unknown codewords {sorted(unknown)}")
    return lengths.pop()


def network_decode(packets: Sequence[ReceivedPacket], label: str) -> tuple[BitVector, float]:
    """XOR the fewest packets whose labels cancel down to ``label``.

    Returns the noisy word for ``label`` and the convolved crossover of the
    packets that went into it.
    """

    target = frozenset({label})
    for size in range(1, len(packets) + 1):
        for chosen in combinations(packets, size):
            labels: frozenset[str] = frozenset()
            for packet in chosen:
                labels = labels ^ packet.labels
            if labels == target:
                word = chosen[0].word
                for packet in chosen[1:]:
                    word = word ^ packet.word
                return word, effective_crossover(packet.p for packet in chosen)
    raise ConfigurationError(f"codeword {label} cannot be isolated from the received packets")


def decode_packets_independent(
    codes: Mapping[str, LdpcCode],
    packets: Sequence[ReceivedPacket],
    max_iters: int,
    *,
    early_stop: bool = True,
) -> PacketDecodeResult:
    """Network-then-channel: isolate each codeword by XOR, then decode it on its own."""

    _check_inputs(codes, packets)
    result = PacketDecodeResult()
    for label, code in codes.items():
        word, p = network_decode(packets, label)
        decoded = sum_product_decode(code.graph, bsc_llr(word, p), max_iters, early_stop=early_stop)
        result.words[label] = decoded.hard_decision
        result.converged[label] = decoded.converged
        result.iterations += decoded.iterations_used
    return result


def decode_packets_serial(
    codes: Mapping[str, LdpcCode],
    packets: Sequence[ReceivedPacket],
    max_iters: int,
    *,
    early_stop: bool = True,
) -> PacketDecodeResult:
    """Peel decoded codewords off the remaining packets one decode at a time.

    At each step the packet with a single undecoded codeword and the lowest
    crossover is stripped of the already decoded codewords and decoded.
    Unconverged estimates are still peeled off.
    """

    _check_inputs(codes, packets)
    result = PacketDecodeResult()
    pending = list(packets)
    while len(result.words) < len(codes):
        ready = [packet for packet in pending if len(packet.labels - set(result.words)) == 1]
        if not ready:
            missing = sorted(set(codes) - set(result.words))
            raise ConfigurationError(f"peeling stalls; cannot reach codewords {missing}")
        packet = min(ready, key=lambda candidate: candidate.p)
        pending.remove(packet)
        (label,) = packet.labels - set(result.words)
        word = packet.word
        for known in packet.labels - {label}:
            word = word ^ result.words[known]
        decoded = sum_product_decode(codes[label].graph, bsc_llr(word, packet.p), max_iters, early_stop=early_stop)
        result.words[label] = decoded.hard_decision
        result.converged[label] = decoded.converged
        result.iterations += decoded.iterations_used
        logger.debug("Peeled codeword %s (converged=%s)", label, decoded.converged)
    return result


@dataclass(frozen=True, eq=False)
class ExtendedLayout:
    """Block order and Tanner graph of an extended decoding problem."""

    labels: tuple[str, ...]
    combinations: tuple[frozenset[str], ...]
    graph: TannerGraph
    n: int

    @classmethod
    def build(cls, codes: Mapping[str, LdpcCode], combos: Sequence[frozenset[str]]) -> "ExtendedLayout":
        matrix = build_extended_matrix({label: code.parity_check for label, code in codes.items()}, combos)
        n = next(iter(codes.values())).n
        return cls(tuple(codes), tuple(combos), TannerGraph(matrix), n)

    def blocks(self) -> tuple[frozenset[str], ...]:
        return tuple(frozenset({label}) for label in self.labels) + self.combinations

    def prior(self, packets: Sequence[ReceivedPacket]) -> LlrVector:
        """Channel LLRs per block; independent packets on one block add, empty blocks are erased."""

        segments: list[LlrVector] = []
        for block in self.blocks():
            matching = [packet for packet in packets if packet.labels == block]
            if not matching:
                segments.append(erased_llr(self.n))
                continue
            total = np.sum([bsc_llr(packet.word, packet.p).values for packet in matching], axis=0)
            segments.append(LlrVector(total))
        return LlrVector.concat(segments)


def decode_packets_extended(
    codes: Mapping[str, LdpcCode],
    packets: Sequence[ReceivedPacket],
    max_iters: int,
    *,
    layout: Optional[ExtendedLayout] = None,
    early_stop: bool = True,
) -> PacketDecodeResult:
    """One sum-product pass over every codeword and every received combination."""

    n = _check_inputs(codes, packets)
    if layout is None:
        combos = sorted({packet.labels for packet in packets if len(packet.labels) > 1}, key=sorted)
        layout = ExtendedLayout.build(codes, combos)
    decoded = sum_product_decode(layout.graph, layout.prior(packets), max_iters, early_stop=early_stop)
    bits = decoded.hard_decision.to_array()
    result = PacketDecodeResult(iterations=decoded.iterations_used)
    for index, label in enumerate(layout.labels):
        result.words[label] = BitVector.from_bits(bits[index * n : (index + 1) * n])
        result.converged[label] = decoded.converged
    return result
