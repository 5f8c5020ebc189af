"""Registry of destination decoding strategies."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence

from ..logger import get_logger
from .base import CodePair, DecodingStrategy
from .builtin import default_strategies

logger = get_logger(__name__)


@dataclass
class StrategyRegistry:
    """In-memory registry of decoding strategies keyed by id."""

    strategies: Dict[str, DecodingStrategy] = field(default_factory=dict)

    def register(self, *strategies: DecodingStrategy) -> None:
        for strategy in strategies:
            if strategy.id in self.strategies:
                logger.warning("Replacing existing strategy registration: %s", strategy.id)
            self.strategies[strategy.id] = strategy
            logger.debug("Registered strategy: %s", strategy.id)

    def extend(self, strategies: Iterable[DecodingStrategy]) -> None:
        for strategy in strategies:
            self.register(strategy)

    def ids(self) -> List[str]:
        return list(self.strategies)

    def list_strategies(self) -> List[dict]:
        return [strategy.to_metadata() for strategy in self.strategies.values()]

    def get(self, strategy_id: str) -> DecodingStrategy:
        """Return a registered strategy or raise KeyError."""

        try:
            return self.strategies[strategy_id]
        except KeyError as exc:
            logger.error("Requested unknown strategy: %s", strategy_id)
            raise KeyError(f"No strategy registered with id '{strategy_id}'") from exc

    def select(self, strategy_ids: Sequence[str]) -> List[DecodingStrategy]:
        return [self.get(strategy_id) for strategy_id in strategy_ids]

    def prepare_all(self, codes: CodePair, strategy_ids: Sequence[str] | None = None) -> None:
        selected = self.select(strategy_ids) if strategy_ids is not None else list(self.strategies.values())
        for strategy in selected:
            strategy.prepare(codes)
        logger.debug("Prepared %d strategies for n=%d", len(selected), codes.n)


def default_registry() -> StrategyRegistry:
    registry = StrategyRegistry()
    registry.extend(default_strategies())
    return registry
