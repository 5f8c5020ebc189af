"""Base classes shared by the destination decoding strategies."""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass
from threading import Lock
from typing import Any, Callable, Dict, Hashable, TypeVar

from ..coding.gf2 import BitVector
from ..coding.ldpc import LdpcCode
from ..errors import ConfigurationError
from ..logger import get_logger
from .observation import DestinationObservation

logger = get_logger(__name__)

T = TypeVar("T")

# two destinations for each of the two most recent code pairs
CACHE_LIMIT = 4


@dataclass(frozen=True, eq=False)
class CodePair:
    """The channel codes of packets A and B."""

    code_a: LdpcCode
    code_b: LdpcCode

    def __post_init__(self) -> None:
        if self.code_a.n != self.code_b.n:
            raise ConfigurationError(f"codes differ in block length ({self.code_a.n} vs {self.code_b.n})")

    @property
    def n(self) -> int:
        return self.code_a.n

    def code(self, label: str) -> LdpcCode:
        if label == "A":
            return self.code_a
        if label == "B":
            return self.code_b
        raise ConfigurationError(f"unknown codeword label {label!r}")

    def ordered(self, obs: DestinationObservation) -> Dict[str, LdpcCode]:
        """Codes keyed by label, direct codeword first."""

        return {obs.direct_label: self.code(obs.direct_label), obs.partner_label: self.code(obs.partner_label)}


@dataclass(frozen=True, slots=True)
class StrategyOutcome:
    c_hat_a: BitVector
    c_hat_b: BitVector
    converged_a: bool
    converged_b: bool
    iterations: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "c_hat_a": str(self.c_hat_a),
            "c_hat_b": str(self.c_hat_b),
            "converged_a": self.converged_a,
            "converged_b": self.converged_b,
            "iterations": self.iterations,
        }


def check_observation(codes: CodePair, obs: DestinationObservation) -> None:
    if obs.length != codes.n:
        logger.error("Observation length %d does not match code length %d", obs.length, codes.n)
        raise ConfigurationError(f"observation length {obs.length} does not match code length {codes.n}")


class DecodingStrategy:
    """Base class for destination decoders."""

    id: str = "base"
    name: str = "Unnamed Strategy"
    description: str = "No description provided."

    def __init__(self) -> None:
        self._cache: OrderedDict[Hashable, Any] = OrderedDict()
        self._cache_lock = Lock()

    def prepare(self, codes: CodePair) -> None:
        """Build any per-code-pair structures ahead of concurrent decoding."""

    def decode(
        self,
        codes: CodePair,
        obs: DestinationObservation,
        max_iters: int,
        *,
        early_stop: bool = True,
    ) -> StrategyOutcome:
        raise NotImplementedError

    def nnz(self, codes: CodePair) -> int:
        """Parity-check entries touched by this strategy's decoder(s)."""

        raise NotImplementedError

    def _cached(self, key: Hashable, factory: Callable[[], T]) -> T:
        """Least-recently-used memo holding at most ``CACHE_LIMIT`` structures."""

        with self._cache_lock:
            if key in self._cache:
                self._cache.move_to_end(key)
                return self._cache[key]
            logger.debug("Building cached structure for strategy %s", self.id)
            value = self._cache[key] = factory()
            while len(self._cache) > CACHE_LIMIT:
                self._cache.popitem(last=False)
            return value

    def to_metadata(self) -> Dict[str, str]:
        return {"id": self.id, "name": self.name, "description": self.description}
