"""Destination decoding strategies and the matrices behind them."""

from .base import CodePair, DecodingStrategy, StrategyOutcome
from .builtin import (
    STRATEGY_IDS,
    ExtendedStrategy,
    IndependentStrategy,
    JointStrategy,
    SerialStrategy,
    decode_extended,
    decode_independent,
    decode_joint,
    decode_serial,
    default_strategies,
    nnz_accounting,
)
from .matrices import build_extended_matrix, build_h_extn, build_h_joint
from .observation import DestinationObservation, TapLayout, observation_from_transcript, resolve_taps
from .packets import (
    ExtendedLayout,
    PacketDecodeResult,
    ReceivedPacket,
    decode_packets_extended,
    decode_packets_independent,
    decode_packets_serial,
    network_decode,
)
from .registry import StrategyRegistry, default_registry

__all__ = [
    "STRATEGY_IDS",
    "CodePair",
    "DecodingStrategy",
    "DestinationObservation",
    "ExtendedLayout",
    "ExtendedStrategy",
    "IndependentStrategy",
    "JointStrategy",
    "PacketDecodeResult",
    "ReceivedPacket",
    "SerialStrategy",
    "StrategyOutcome",
    "StrategyRegistry",
    "TapLayout",
    "build_extended_matrix",
    "build_h_extn",
    "build_h_joint",
    "decode_extended",
    "decode_independent",
    "decode_joint",
    "decode_packets_extended",
    "decode_packets_independent",
    "decode_packets_serial",
    "decode_serial",
    "default_registry",
    "default_strategies",
    "network_decode",
    "nnz_accounting",
    "observation_from_transcript",
    "resolve_taps",
]
