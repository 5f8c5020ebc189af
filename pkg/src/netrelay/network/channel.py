"""Binary symmetric channels and reproducible per-link noise streams."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import reduce
from typing import Iterable

import numpy as np

from ..coding.gf2 import BitVector
from ..errors import ParameterError

_SEED_MASK = (1 << 64) - 1


def _label_digest(label: str) -> int:
    return int.from_bytes(hashlib.blake2b(label.encode("utf-8"), digest_size=8).digest(), "little")


@dataclass(frozen=True, slots=True)
class SeededRng:
    """Master seed from which every (stream label, trial) pair gets its own generator.

    Streams are PCG64 generators seeded with ``SeedSequence([seed, blake2b64(label), trial])``,
    so a stream never depends on which other streams were drawn or in what order.
    """

    seed: int

    def stream(self, label: str, trial: int) -> np.random.Generator:
        if trial < 0:
            raise ParameterError(f"trial index must be non-negative, got {trial}")
        entropy = [self.seed & _SEED_MASK, _label_digest(label), int(trial)]
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def bsc_transmit(
    sent: BitVector,
    p: float,
    rng: SeededRng,
    link_id: str,
    trial: int,
) -> tuple[BitVector, BitVector]:
    """Pass ``sent`` through a BSC; returns ``(received, error)``."""

    if not 0.0 <= p < 0.5:
        raise ParameterError(f"link crossover must lie in [0, 0.5), got {p}")
    if p == 0.0:
        return sent, BitVector.zeros(len(sent))
    flips = rng.stream(link_id, trial).random(len(sent)) < p
    error = BitVector.from_bits(flips)
    return sent ^ error, error


def _check_probability(p: float) -> None:
    if not 0.0 <= p <= 0.5:
        raise ParameterError(f"crossover probability must lie in [0, 0.5], got {p}")


def bsc_convolve(p1: float, p2: float) -> float:
    """Crossover of two cascaded BSCs."""

    _check_probability(p1)
    _check_probability(p2)
    return p1 * (1.0 - p2) + (1.0 - p1) * p2


def effective_crossover(path: Iterable[float]) -> float:
    """Left fold of :func:`bsc_convolve`; an empty path is noiseless."""

    return reduce(bsc_convolve, path, 0.0)
