"""The four destination strategies for one direct and one XOR observation."""

from __future__ import annotations

from typing import List, Optional

from ..coding.decoder import LlrVector, TannerGraph, bsc_llr, sum_product_decode
from ..coding.gf2 import BitVector
from ..coding.ldpc import LdpcCode
from ..errors import ConfigurationError
from ..logger import get_logger
from .base import CodePair, DecodingStrategy, StrategyOutcome, check_observation
from .matrices import build_h_extn, build_h_joint
from .observation import DestinationObservation
from .packets import (
    ExtendedLayout,
    PacketDecodeResult,
    ReceivedPacket,
    decode_packets_extended,
    decode_packets_independent,
    decode_packets_serial,
)

logger = get_logger(__name__)

STRATEGY_IDS = ("independent", "serial", "joint", "extended")


def _packets(obs: DestinationObservation) -> list[ReceivedPacket]:
    return [
        ReceivedPacket(frozenset({obs.direct_label}), obs.y_direct, obs.p_direct),
        ReceivedPacket(frozenset({obs.direct_label, obs.partner_label}), obs.y_combined, obs.p_combined),
    ]


def _outcome(result: PacketDecodeResult) -> StrategyOutcome:
    return StrategyOutcome(
        result.words["A"],
        result.words["B"],
        result.converged["A"],
        result.converged["B"],
        result.iterations,
    )


def decode_independent(
    code_a: LdpcCode,
    code_b: LdpcCode,
    obs: DestinationObservation,
    max_iters: int,
    *,
    early_stop: bool = True,
) -> StrategyOutcome:
    """Decode the direct word, and separately the XOR of both received words.

    The partner word ``y_direct ⊕ y_combined`` carries the noise of both
    paths, so its LLRs use the convolved crossover.
    """

    codes = CodePair(code_a, code_b)
    check_observation(codes, obs)
    return _outcome(decode_packets_independent(codes.ordered(obs), _packets(obs), max_iters, early_stop=early_stop))


def decode_serial(
    code_a: LdpcCode,
    code_b: LdpcCode,
    obs: DestinationObservation,
    max_iters: int,
    *,
    early_stop: bool = True,
) -> StrategyOutcome:
    """Decode the direct word, then subtract the estimate from the XOR word and decode that."""

    codes = CodePair(code_a, code_b)
    check_observation(codes, obs)
    return _outcome(decode_packets_serial(codes.ordered(obs), _packets(obs), max_iters, early_stop=early_stop))


def joint_graph(codes: CodePair, direct_label: str = "A") -> TannerGraph:
    partner = "B" if direct_label == "A" else "A"
    return TannerGraph(build_h_joint(codes.code(direct_label).parity_check, codes.code(partner).parity_check))


def decode_joint(
    code_a: LdpcCode,
    code_b: LdpcCode,
    obs: DestinationObservation,
    max_iters: int,
    *,
    graph: Optional[TannerGraph] = None,
    early_stop: bool = True,
) -> StrategyOutcome:
    """Single decode over ``[c_direct, c_A ⊕ c_B]`` with ``H_joint``; the partner is recovered by XOR."""

    codes = CodePair(code_a, code_b)
    check_observation(codes, obs)
    graph = graph or joint_graph(codes, obs.direct_label)
    prior = LlrVector.concat([bsc_llr(obs.y_direct, obs.p_direct), bsc_llr(obs.y_combined, obs.p_combined)])
    decoded = sum_product_decode(graph, prior, max_iters, early_stop=early_stop)
    bits = decoded.hard_decision.to_array()
    direct = BitVector.from_bits(bits[: codes.n])
    partner = direct ^ BitVector.from_bits(bits[codes.n :])
    words = {obs.direct_label: direct, obs.partner_label: partner}
    return StrategyOutcome(words["A"], words["B"], decoded.converged, decoded.converged, decoded.iterations_used)


def extended_layout(codes: CodePair, direct_label: str = "A") -> ExtendedLayout:
    partner = "B" if direct_label == "A" else "A"
    ordered = {direct_label: codes.code(direct_label), partner: codes.code(partner)}
    return ExtendedLayout.build(ordered, [frozenset({"A", "B"})])


def decode_extended(
    code_a: LdpcCode,
    code_b: LdpcCode,
    obs: DestinationObservation,
    max_iters: int,
    *,
    layout: Optional[ExtendedLayout] = None,
    early_stop: bool = True,
) -> StrategyOutcome:
    """Single decode over ``[c_direct, c_partner, c_A ⊕ c_B]`` with the partner block erased."""

    codes = CodePair(code_a, code_b)
    check_observation(codes, obs)
    layout = layout or extended_layout(codes, obs.direct_label)
    result = decode_packets_extended(codes.ordered(obs), _packets(obs), max_iters, layout=layout, early_stop=early_stop)
    return _outcome(result)


class IndependentStrategy(DecodingStrategy):
    id = "independent"
    name = "Independent network-then-channel"
    description = "XOR the two received words to isolate the partner, then decode both words separately."

    def decode(
        self, codes: CodePair, obs: DestinationObservation, max_iters: int, *, early_stop: bool = True
    ) -> StrategyOutcome:
        return decode_independent(codes.code_a, codes.code_b, obs, max_iters, early_stop=early_stop)

    def nnz(self, codes: CodePair) -> int:
        return codes.code_a.parity_check.nnz + codes.code_b.parity_check.nnz


class SerialStrategy(IndependentStrategy):
    id = "serial"
    name = "Serial network-then-channel"
    description = "Decode the direct word, subtract it from the XOR word, then decode the partner."

    def decode(
        self, codes: CodePair, obs: DestinationObservation, max_iters: int, *, early_stop: bool = True
    ) -> StrategyOutcome:
        return decode_serial(codes.code_a, codes.code_b, obs, max_iters, early_stop=early_stop)


class JointStrategy(DecodingStrategy):
    id = "joint"
    name = "Joint decoding"
    description = "One sum-product decode over the direct word and the XOR word using H_joint."

    def prepare(self, codes: CodePair) -> None:
        for label in ("A", "B"):
            self._graph(codes, label)

    def _graph(self, codes: CodePair, direct_label: str) -> TannerGraph:
        return self._cached((codes, direct_label), lambda: joint_graph(codes, direct_label))

    def decode(
        self, codes: CodePair, obs: DestinationObservation, max_iters: int, *, early_stop: bool = True
    ) -> StrategyOutcome:
        graph = self._graph(codes, obs.direct_label)
        return decode_joint(codes.code_a, codes.code_b, obs, max_iters, graph=graph, early_stop=early_stop)

    def nnz(self, codes: CodePair) -> int:
        return build_h_joint(codes.code_a.parity_check, codes.code_b.parity_check).nnz


class ExtendedStrategy(DecodingStrategy):
    id = "extended"
    name = "Extended joint decoding"
    description = "One sum-product decode over both codewords and their XOR on the extended Tanner graph."

    def prepare(self, codes: CodePair) -> None:
        for label in ("A", "B"):
            self._layout(codes, label)

    def _layout(self, codes: CodePair, direct_label: str) -> ExtendedLayout:
        return self._cached((codes, direct_label), lambda: extended_layout(codes, direct_label))

    def decode(
        self, codes: CodePair, obs: DestinationObservation, max_iters: int, *, early_stop: bool = True
    ) -> StrategyOutcome:
        layout = self._layout(codes, obs.direct_label)
        return decode_extended(codes.code_a, codes.code_b, obs, max_iters, layout=layout, early_stop=early_stop)

    def nnz(self, codes: CodePair) -> int:
        return build_h_extn(codes.code_a.parity_check, codes.code_b.parity_check).nnz


def default_strategies() -> List[DecodingStrategy]:
    return [IndependentStrategy(), SerialStrategy(), JointStrategy(), ExtendedStrategy()]


def nnz_accounting(strategy: str, code_a: LdpcCode, code_b: LdpcCode) -> int:
    """Non-zero parity-check entries the named strategy decodes over."""

    for candidate in default_strategies():
        if candidate.id == strategy:
            return candidate.nnz(CodePair(code_a, code_b))
    raise ConfigurationError(f"unknown strategy {strategy!r}; expected one of {', '.join(STRATEGY_IDS)}")
