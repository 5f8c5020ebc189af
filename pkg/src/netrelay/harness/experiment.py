"""Experiment configuration and single-frame simulation."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, Literal, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..coding.gf2 import BitVector
from ..coding.ldpc import LdpcCode, construct_correlated_pair, construct_regular
from ..config import get_settings
from ..errors import ConfigurationError
from ..logger import get_logger
from ..network.channel import SeededRng
from ..network.simulate import simulate
from ..network.topology import NetworkTopology, butterfly, fig1_network, load_topology
from ..strategies.base import CodePair, DecodingStrategy, StrategyOutcome
from ..strategies.builtin import STRATEGY_IDS
from ..strategies.observation import TapLayout

logger = get_logger(__name__)


class CodePairMode(str, Enum):
    """How the code of packet B relates to the code of packet A."""

    INDEPENDENT = "independent"
    SHARED = "shared"
    CORRELATED = "correlated"


class ExperimentConfig(BaseModel):
    """Everything needed to reproduce a BER sweep."""

    model_config = ConfigDict(extra="forbid")

    network: Literal["butterfly", "fig1"] = "butterfly"
    topology_path: Optional[Path] = Field(
        default=None,
        description="JSON topology used instead of a built-in network; its link crossovers are used unchanged.",
    )
    p_list: list[float] = Field(default_factory=lambda: [0.01, 0.02, 0.03])
    mult_26: float = Field(default=3.0, ge=0.0, description="Crossover multiplier of the direct link.")
    n: int = Field(default=500, ge=2)
    w_c: int = Field(default=3, ge=2)
    w_r: int = Field(default=6, ge=2)
    seed_a: int = 1
    seed_b: int = 2
    code_pair: CodePairMode = CodePairMode.INDEPENDENT
    strategies: list[str] = Field(default_factory=lambda: list(STRATEGY_IDS))
    max_iters: int = Field(default_factory=lambda: get_settings().max_iters, ge=1)
    early_stop: bool = True
    min_bit_errors: int = Field(default_factory=lambda: get_settings().min_bit_errors, ge=1)
    max_frames: int = Field(default_factory=lambda: get_settings().max_frames, ge=1)
    seed: int = Field(default=0, ge=0, description="Master seed for messages and link noise.")
    destination: Optional[int] = Field(default=None, description="Destination node; 6 for the butterfly, 4 for fig1.")
    p_direct_override: Optional[float] = Field(default=None, gt=0.0, lt=0.5)
    p_combined_override: Optional[float] = Field(default=None, gt=0.0, lt=0.5)
    out: Optional[Path] = None

    @field_validator("p_list")
    @classmethod
    def _check_probabilities(cls, value: list[float]) -> list[float]:
        if any(not 0.0 <= p < 0.5 for p in value):
            raise ValueError(f"sweep probabilities must lie in [0, 0.5), got {value}")
        return value

    @field_validator("strategies")
    @classmethod
    def _check_strategies(cls, value: list[str]) -> list[str]:
        unknown = [name for name in value if name not in STRATEGY_IDS]
        if unknown:
            raise ValueError(f"unknown strategies {unknown}; expected a subset of {list(STRATEGY_IDS)}")
        if not value:
            raise ValueError("at least one strategy is required")
        return value

    @model_validator(mode="after")
    def _check_consistency(self) -> "ExperimentConfig":
        if (self.n * self.w_c) % self.w_r:
            raise ValueError(f"n*w_c = {self.n * self.w_c} is not divisible by w_r = {self.w_r}")
        if self.topology_path is None:
            if not self.p_list:
                raise ValueError("p_list must not be empty")
            worst = max(self.p_list) * max(1.0, self.mult_26)
            if worst >= 0.5:
                raise ValueError(f"p * multiplier reaches {worst}, links need crossover below 0.5")
        return self

    def destination_node(self) -> int:
        if self.destination is not None:
            return self.destination
        return 4 if self.network == "fig1" and self.topology_path is None else 6

    @classmethod
    def from_json_file(cls, path: str | Path) -> "ExperimentConfig":
        return cls.model_validate_json(Path(path).read_text(encoding="utf-8"))

    def sweep_points(self) -> list[tuple[float, NetworkTopology]]:
        """``(p, topology)`` for every sweep point."""

        if self.topology_path is not None:
            topology = load_topology(self.topology_path)
            return [(max(link.p for link in topology.links), topology)]
        if self.network == "fig1":
            # the multiplier sits on the direct link 1→4
            return [(p, fig1_network(p, p, p, self.mult_26 * p)) for p in self.p_list]
        return [(p, butterfly(p, self.mult_26)) for p in self.p_list]


def build_codes(cfg: ExperimentConfig) -> CodePair:
    code_a = construct_regular(cfg.n, cfg.w_c, cfg.w_r, cfg.seed_a)
    if cfg.code_pair is CodePairMode.SHARED:
        code_b = code_a
    elif cfg.code_pair is CodePairMode.CORRELATED:
        code_b = LdpcCode(construct_correlated_pair(code_a.parity_check, cfg.seed_b), w_c=cfg.w_c, seed=cfg.seed_b)
    else:
        code_b = construct_regular(cfg.n, cfg.w_c, cfg.w_r, cfg.seed_b)
    logger.info("Code pair ready (%s): n=%d k_a=%d k_b=%d", cfg.code_pair.value, cfg.n, code_a.k, code_b.k)
    return CodePair(code_a, code_b)


@dataclass(frozen=True, slots=True)
class StrategyTally:
    """One strategy's result on one frame."""

    bit_errors_a: int
    bit_errors_b: int
    iterations: int
    converged: bool


@dataclass(slots=True)
class FrameResult:
    trial: int
    tallies: Dict[str, StrategyTally] = field(default_factory=dict)


def draw_message(rng: SeededRng, label: str, trial: int, k: int) -> BitVector:
    return BitVector.from_bits(rng.stream(f"message:{label}", trial).integers(0, 2, size=k, dtype=np.uint8))


def message_errors(code: LdpcCode, message: BitVector, estimate: BitVector) -> int:
    return (code.extract_message(estimate) ^ message).weight()


@dataclass(frozen=True)
class FrameSimulator:
    """Runs paired frames: every strategy decodes the same noisy observation."""

    codes: CodePair
    topology: NetworkTopology
    layout: TapLayout
    rng: SeededRng
    max_iters: int
    early_stop: bool = True

    def __post_init__(self) -> None:
        labels = set(self.topology.labels)
        if labels != {"A", "B"}:
            raise ConfigurationError(f"two-codeword strategies need sources labelled A and B, got {sorted(labels)}")

    def run(self, trial: int, strategies: Sequence[DecodingStrategy]) -> FrameResult:
        u_a = draw_message(self.rng, "A", trial, self.codes.code_a.k)
        u_b = draw_message(self.rng, "B", trial, self.codes.code_b.k)
        inputs = {"A": self.codes.code_a.encode(u_a), "B": self.codes.code_b.encode(u_b)}
        transcript = simulate(self.topology, inputs, self.rng, trial)
        obs = self.layout.observe(transcript)
        result = FrameResult(trial)
        for strategy in strategies:
            outcome: StrategyOutcome = strategy.decode(self.codes, obs, self.max_iters, early_stop=self.early_stop)
            result.tallies[strategy.id] = StrategyTally(
                message_errors(self.codes.code_a, u_a, outcome.c_hat_a),
                message_errors(self.codes.code_b, u_b, outcome.c_hat_b),
                outcome.iterations,
                outcome.converged_a and outcome.converged_b,
            )
        return result


def simulate_frames(
    simulator: FrameSimulator,
    strategies: Sequence[DecodingStrategy],
    trials: Iterable[int],
) -> list[FrameResult]:
    """Paired per-frame tallies for ``strategies`` over the given trial indices."""

    return [simulator.run(trial, strategies) for trial in trials]
