"""What a destination sees, and how it is read off a simulated transcript."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..coding.gf2 import BitVector
from ..config import get_settings
from ..errors import ConfigurationError, ParameterError
from ..logger import get_logger
from ..network.simulate import Transcript
from ..network.topology import NetworkTopology, tap_composition, tap_crossover

logger = get_logger(__name__)


@dataclass(frozen=True, slots=True)
class DestinationObservation:
    """A noisy direct word and a noisy XOR word, with their crossover estimates.

    At node 6 of the butterfly the direct word is ``c_A``; at node 7 it is
    ``c_B`` and the labels swap.
    """

    y_direct: BitVector
    y_combined: BitVector
    p_direct: float
    p_combined: float
    direct_label: str = "A"
    partner_label: str = "B"

    def __post_init__(self) -> None:
        if len(self.y_direct) != len(self.y_combined):
            raise ConfigurationError(
                f"direct and combined words differ in length ({len(self.y_direct)} vs {len(self.y_combined)})"
            )
        for name in ("p_direct", "p_combined"):
            value = getattr(self, name)
            if not 0.0 < value < 0.5:
                raise ParameterError(f"{name} must lie in (0, 0.5), got {value}")
        if self.direct_label == self.partner_label:
            raise ConfigurationError("direct and partner labels must differ")

    @property
    def length(self) -> int:
        return len(self.y_direct)


@dataclass(frozen=True, slots=True)
class TapLayout:
    """Resolved taps of one destination, reusable across trials."""

    destination: int
    direct_link: str
    combined_link: str
    direct_label: str
    partner_label: str
    p_direct: float
    p_combined: float

    def observe(self, transcript: Transcript) -> DestinationObservation:
        return DestinationObservation(
            transcript.received(self.direct_link),
            transcript.received(self.combined_link),
            self.p_direct,
            self.p_combined,
            self.direct_label,
            self.partner_label,
        )


def resolve_taps(
    topology: NetworkTopology,
    destination: int,
    *,
    probability_floor: Optional[float] = None,
    p_direct: Optional[float] = None,
    p_combined: Optional[float] = None,
) -> TapLayout:
    """Identify the direct and combined taps of ``destination`` and their crossovers.

    Crossovers default to the analytic marginal of each tap (cross-path
    correlation ignored), clamped below by ``probability_floor``. Explicit
    ``p_direct`` / ``p_combined`` replace the analytic values.
    """

    taps = topology.destination_taps.get(destination)
    if not taps or len(taps) != 2:
        raise ConfigurationError(f"destination {destination} must have exactly two taps, has {taps}")
    compositions = {tap: tap_composition(topology, tap) for tap in taps}
    direct = [tap for tap, labels in compositions.items() if len(labels) == 1]
    combined = [tap for tap, labels in compositions.items() if len(labels) == 2]
    if len(direct) != 1 or len(combined) != 1 or not compositions[direct[0]] < compositions[combined[0]]:
        raise ConfigurationError(
            f"destination {destination} needs one plain tap and one XOR tap containing it, got {compositions}"
        )
    direct_label = next(iter(compositions[direct[0]]))
    partner_label = next(iter(compositions[combined[0]] - compositions[direct[0]]))

    floor = get_settings().probability_floor if probability_floor is None else probability_floor
    resolved_direct = p_direct if p_direct is not None else max(floor, tap_crossover(topology, direct[0]))
    resolved_combined = p_combined if p_combined is not None else max(floor, tap_crossover(topology, combined[0]))
    logger.debug(
        "Destination %d: direct %s (%s, p=%.6g) combined %s (p=%.6g)",
        destination, direct[0], direct_label, resolved_direct, combined[0], resolved_combined,
    )
    return TapLayout(
        destination, direct[0], combined[0], direct_label, partner_label, resolved_direct, resolved_combined
    )


def observation_from_transcript(
    topology: NetworkTopology,
    transcript: Transcript,
    destination: int = 6,
    **overrides: Optional[float],
) -> DestinationObservation:
    return resolve_taps(topology, destination, **overrides).observe(transcript)
