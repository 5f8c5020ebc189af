"""Hard-decision packet transport over a relay topology."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from ..coding.gf2 import BitVector
from ..errors import ConfigurationError
from ..logger import get_logger
from .channel import SeededRng, bsc_transmit
from .topology import NetworkTopology, NodeRole

logger = get_logger(__name__)


@dataclass(frozen=True, slots=True)
class LinkRecord:
    sent: BitVector
    received: BitVector
    error: BitVector


@dataclass(frozen=True)
class Transcript:
    """Everything that crossed every link during one trial."""

    trial: int
    records: Mapping[str, LinkRecord]

    def sent(self, link_id: str) -> BitVector:
        return self._record(link_id).sent

    def received(self, link_id: str) -> BitVector:
        return self._record(link_id).received

    def error(self, link_id: str) -> BitVector:
        return self._record(link_id).error

    def _record(self, link_id: str) -> LinkRecord:
        try:
            return self.records[link_id]
        except KeyError as exc:
            raise ConfigurationError(f"transcript has no link {link_id}") from exc

    def verify_consistency(self, topology: NetworkTopology) -> list[str]:
        """Re-derive every relayed word from the recorded outputs; returns the mismatches."""

        problems: list[str] = []
        for link_id, record in self.records.items():
            if record.received != record.sent ^ record.error:
                problems.append(f"{link_id}: received != sent xor error")
        by_label: dict[str, BitVector] = {}
        for link in topology.links:
            record = self.records.get(link.id)
            if record is None:
                problems.append(f"{link.id}: missing from transcript")
                continue
            role = topology.node(link.source).role
            if role is NodeRole.SOURCE:
                label = topology.source_assignments[link.id]
                first = by_label.setdefault(label, record.sent)
                if first != record.sent:
                    problems.append(f"{link.id}: differs from other links carrying {label}")
                continue
            expected = _relay_output(topology, link.source, self.records)
            if expected is not None and record.sent != expected:
                problems.append(f"{link.id}: sent word is not the relay function of its inputs")
        return problems


def _relay_output(topology: NetworkTopology, node_id: int, records: Mapping[str, LinkRecord]) -> BitVector | None:
    inputs = [records[link.id].received for link in topology.incoming(node_id) if link.id in records]
    role = topology.node(node_id).role
    if role is NodeRole.FORWARD and len(inputs) == 1:
        return inputs[0]
    if role is NodeRole.XOR and len(inputs) == 2:
        return inputs[0] ^ inputs[1]
    return None


def _source_words(topology: NetworkTopology, inputs: Mapping[str, BitVector]) -> dict[str, BitVector]:
    """Word for every source link; links sharing a label must carry the same word."""

    source_links = topology.source_assignments
    unknown = sorted(key for key in inputs if key not in source_links and key not in set(source_links.values()))
    if unknown:
        logger.error("Inputs %s match no source link or codeword label", unknown)
        raise ConfigurationError(f"inputs {unknown} match no source link or codeword label")

    words: dict[str, BitVector] = {}
    by_label: dict[str, tuple[str, BitVector]] = {}
    for link_id, label in source_links.items():
        candidates = [inputs[key] for key in (link_id, label) if key in inputs]
        if not candidates:
            logger.error("No input supplied for source link %s (label %s)", link_id, label)
            raise ConfigurationError(f"missing input for source link {link_id} (label {label!r})")
        word = candidates[0]
        if any(candidate != word for candidate in candidates[1:]):
            logger.error("Inputs for %s and its label %s disagree", link_id, label)
            raise ConfigurationError(f"inputs {link_id!r} and {label!r} give different words for the same link")
        first_link, first_word = by_label.setdefault(label, (link_id, word))
        if first_word != word:
            logger.error("Source links %s and %s both carry %s but were given different words", first_link, link_id, label)
            raise ConfigurationError(
                f"source links {first_link} and {link_id} carry codeword {label!r} and must send the same word"
            )
        words[link_id] = word
    return words


def simulate(
    topology: NetworkTopology,
    inputs: Mapping[str, BitVector],
    rng: SeededRng,
    trial: int,
) -> Transcript:
    """Push one set of source words through the network.

    ``inputs`` is keyed by codeword label (``"A"``) or by source link id
    (``"1->2"``). Every source link of one label sends the same word;
    conflicting entries are rejected before anything is transmitted.
    Forward nodes copy their received word onto every outgoing link and
    XOR nodes emit the sum of their two received words.
    """

    lengths = {len(word) for word in inputs.values()}
    if len(lengths) > 1:
        raise ConfigurationError(f"source words have differing lengths {sorted(lengths)}")
    source_words = _source_words(topology, inputs)

    records: dict[str, LinkRecord] = {}
    for node_id in topology.topological_order():
        role = topology.node(node_id).role
        for link in topology.outgoing(node_id):
            if role is NodeRole.SOURCE:
                word = source_words[link.id]
            else:
                word = _relay_output(topology, node_id, records)
                if word is None:
                    raise ConfigurationError(f"node {node_id} has no complete input set")
            received, error = bsc_transmit(word, link.p, rng, link.id, trial)
            records[link.id] = LinkRecord(word, received, error)
    return Transcript(trial, records)
