from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError

from netrelay.coding.gf2 import BitVector
from netrelay.errors import ConfigurationError, ParameterError
from netrelay.network.channel import SeededRng, bsc_convolve, bsc_transmit, effective_crossover
from netrelay.network.simulate import simulate
from netrelay.network.topology import (
    NetworkTopology,
    NodeRole,
    butterfly,
    fig1_network,
    load_topology,
    save_topology,
    tap_composition,
    tap_crossover,
    tap_path,
)
from netrelay.regions import LinkParams, p_double_prime, p_prime


def random_word(seed: int, length: int = 64) -> BitVector:
    return BitVector.from_bits(np.random.default_rng(seed).integers(0, 2, size=length))


def test_seeded_streams_are_reproducible_and_independent() -> None:
    rng = SeededRng(7)
    first = rng.stream("1->2", 3).random(5)
    assert np.array_equal(first, SeededRng(7).stream("1->2", 3).random(5))
    assert not np.array_equal(first, rng.stream("1->3", 3).random(5))
    assert not np.array_equal(first, rng.stream("1->2", 4).random(5))
    assert not np.array_equal(first, SeededRng(8).stream("1->2", 3).random(5))
    with pytest.raises(ParameterError):
        rng.stream("1->2", -1)


def test_bsc_transmit_noiseless_and_reproducible() -> None:
    rng = SeededRng(1)
    word = random_word(0)
    received, error = bsc_transmit(word, 0.0, rng, "a", 0)
    assert received == word and not error.any()
    received_1, error_1 = bsc_transmit(word, 0.2, rng, "a", 0)
    received_2, error_2 = bsc_transmit(word, 0.2, rng, "a", 0)
    assert received_1 == received_2 and error_1 == error_2
    assert received_1 == word ^ error_1
    with pytest.raises(ParameterError):
        bsc_transmit(word, 0.5, rng, "a", 0)


def test_bsc_transmit_flip_rate() -> None:
    rng = SeededRng(3)
    flips = sum(bsc_transmit(BitVector.zeros(1000), 0.1, rng, "x", trial)[1].weight() for trial in range(50))
    assert flips / 50_000 == pytest.approx(0.1, abs=0.01)


def test_bsc_convolution() -> None:
    assert bsc_convolve(0.1, 0.2) == pytest.approx(0.26)
    assert bsc_convolve(0.0, 0.3) == pytest.approx(0.3)
    assert bsc_convolve(0.5, 0.1) == pytest.approx(0.5)
    assert effective_crossover([]) == 0.0
    assert effective_crossover([0.1, 0.2, 0.3]) == pytest.approx(bsc_convolve(0.26, 0.3))
    with pytest.raises(ParameterError):
        bsc_convolve(0.6, 0.1)


def test_butterfly_layout() -> None:
    topology = butterfly(0.02, 3.0)
    assert len(topology.nodes) == 7 and len(topology.links) == 9
    assert topology.node(4).role is NodeRole.XOR
    assert topology.link("2->6").p == pytest.approx(0.06)
    assert topology.link("5->6").p == pytest.approx(0.02)
    assert topology.labels == ["A", "B"]
    assert topology.destination_taps == {6: ["2->6", "5->6"], 7: ["3->7", "5->7"]}
    order = topology.topological_order()
    assert order.index(4) > order.index(2) and order.index(4) > order.index(3)


@pytest.mark.parametrize(("p", "mult"), [(-0.01, 3.0), (0.5, 1.0), (0.05, 12.0)])
def test_butterfly_rejects_bad_crossovers(p: float, mult: float) -> None:
    with pytest.raises(ParameterError):
        butterfly(p, mult)


def test_tap_analysis_on_butterfly() -> None:
    topology = butterfly(0.02, 3.0)
    assert tap_composition(topology, "2->6") == frozenset({"A"})
    assert tap_composition(topology, "5->6") == frozenset({"A", "B"})
    assert tap_path(topology, "2->6") == pytest.approx([0.02, 0.06])
    assert len(tap_path(topology, "5->6")) == 6
    expected = effective_crossover([0.02] * 6)
    assert tap_crossover(topology, "5->6") == pytest.approx(expected)


def test_fig1_xor_tap_matches_closed_form() -> None:
    topology = fig1_network(0.05, 0.05, 0.05, 0.05)
    lp = LinkParams.uniform(0.05)
    assert tap_composition(topology, "3->4") == frozenset({"A", "B"})
    assert tap_crossover(topology, "3->4") == pytest.approx(p_prime(lp))
    assert bsc_convolve(p_prime(lp), 0.05) == pytest.approx(p_double_prime(lp))


def test_simulate_butterfly_transcript_is_consistent() -> None:
    topology = butterfly(0.05, 3.0)
    a, b = random_word(1), random_word(2)
    transcript = simulate(topology, {"A": a, "B": b}, SeededRng(4), 0)
    assert transcript.verify_consistency(topology) == []
    assert transcript.sent("1->2") == a and transcript.sent("1->3") == b
    assert transcript.sent("4->5") == transcript.received("2->4") ^ transcript.received("3->4")
    assert transcript.sent("2->6") == transcript.received("1->2")


def test_simulate_noiseless_delivers_exact_words() -> None:
    topology = butterfly(0.0, 3.0)
    a, b = random_word(1), random_word(2)
    transcript = simulate(topology, {"A": a, "B": b}, SeededRng(0), 0)
    assert transcript.received("2->6") == a
    assert transcript.received("5->6") == a ^ b
    assert transcript.received("3->7") == b


def test_simulate_fig1_shares_the_word_of_node_one() -> None:
    topology = fig1_network(0.1, 0.1, 0.1, 0.1)
    a, b = random_word(5), random_word(6)
    transcript = simulate(topology, {"A": a, "B": b}, SeededRng(9), 2)
    assert transcript.sent("1->3") == transcript.sent("1->4") == a
    assert transcript.error("1->3") != transcript.error("1->4")


def test_simulate_is_reproducible_per_trial() -> None:
    topology = butterfly(0.1, 3.0)
    inputs = {"A": random_word(1), "B": random_word(2)}
    first = simulate(topology, inputs, SeededRng(4), 10)
    again = simulate(topology, inputs, SeededRng(4), 10)
    other = simulate(topology, inputs, SeededRng(4), 11)
    assert all(first.received(link.id) == again.received(link.id) for link in topology.links)
    assert any(first.received(link.id) != other.received(link.id) for link in topology.links)


def test_simulate_rejects_missing_or_mismatched_inputs() -> None:
    topology = butterfly(0.1, 3.0)
    with pytest.raises(ConfigurationError):
        simulate(topology, {"A": random_word(1)}, SeededRng(0), 0)
    with pytest.raises(ConfigurationError):
        simulate(topology, {"A": random_word(1, 64), "B": random_word(2, 32)}, SeededRng(0), 0)


def test_simulate_accepts_link_keyed_inputs() -> None:
    topology = butterfly(0.0, 3.0)
    a, b = random_word(1), random_word(2)
    transcript = simulate(topology, {"1->2": a, "1->3": b}, SeededRng(0), 0)
    assert transcript.received("5->7") == a ^ b


def _payload() -> dict:
    return {
        "nodes": [{"id": 1, "role": "source"}, {"id": 2, "role": "forward"}, {"id": 3, "role": "destination"}],
        "links": [{"from": 1, "to": 2, "p": 0.1}, {"from": 2, "to": 3, "p": 0.1}],
        "source_assignments": {"1->2": "A"},
        "destination_taps": {3: ["2->3"]},
    }


def test_topology_validation_accepts_chain() -> None:
    topology = NetworkTopology.model_validate(_payload())
    assert topology.labels == ["A"]
    assert tap_crossover(topology, "2->3") == pytest.approx(bsc_convolve(0.1, 0.1))


@pytest.mark.parametrize(
    "mutate",
    [
        lambda payload: payload["links"].append({"from": 3, "to": 1, "p": 0.1}),
        lambda payload: payload["links"].append({"from": 2, "to": 9, "p": 0.1}),
        lambda payload: payload["links"].__setitem__(0, {"from": 1, "to": 2, "p": 0.5}),
        lambda payload: payload["source_assignments"].clear(),
        lambda payload: payload["destination_taps"].__setitem__(3, ["1->2"]),
        lambda payload: payload["nodes"].append({"id": 1, "role": "forward"}),
        lambda payload: payload["nodes"].__setitem__(1, {"id": 2, "role": "xor"}),
    ],
)
def test_topology_validation_rejects_bad_structures(mutate) -> None:
    payload = _payload()
    mutate(payload)
    with pytest.raises(ValidationError):
        NetworkTopology.model_validate(payload)


def test_topology_rejects_cycles() -> None:
    payload = {
        "nodes": [
            {"id": 1, "role": "source"},
            {"id": 2, "role": "xor"},
            {"id": 3, "role": "forward"},
            {"id": 4, "role": "destination"},
        ],
        "links": [
            {"from": 1, "to": 2, "p": 0.1},
            {"from": 3, "to": 2, "p": 0.1},
            {"from": 2, "to": 3, "p": 0.1},
            {"from": 2, "to": 4, "p": 0.1},
        ],
        "source_assignments": {"1->2": "A"},
        "destination_taps": {4: ["2->4"]},
    }
    with pytest.raises(ValidationError):
        NetworkTopology.model_validate(payload)


def test_topology_json_round_trip(tmp_path: Path) -> None:
    topology = butterfly(0.03, 12.0)
    target = save_topology(topology, tmp_path / "butterfly.json")
    assert '"from"' in target.read_text(encoding="utf-8")
    assert load_topology(target) == topology


def test_with_link_probability() -> None:
    topology = fig1_network(0.05, 0.05, 0.05, 0.05)
    changed = topology.with_link_probability("1->4", 0.2)
    assert changed.link("1->4").p == pytest.approx(0.2)
    assert topology.link("1->4").p == pytest.approx(0.05)
    with pytest.raises(ConfigurationError):
        topology.with_link_probability("4->1", 0.1)


@pytest.mark.parametrize(
    ("topology", "inputs"),
    [
        (fig1_network(0.0, 0.0, 0.0, 0.0), {"A": "1010", "1->3": "0101", "B": "0000"}),
        (butterfly(0.0, 3.0), {"A": "1010", "1->2": "0101", "B": "0000"}),
        (butterfly(0.0, 3.0), {"A": "1010", "B": "0000", "C": "1111"}),
    ],
)
def test_simulate_rejects_conflicting_source_words(topology: NetworkTopology, inputs: dict) -> None:
    words = {key: BitVector.from_string(bits) for key, bits in inputs.items()}
    with pytest.raises(ConfigurationError):
        simulate(topology, words, SeededRng(0), 0)


def test_simulate_fig1_link_keyed_inputs_must_agree() -> None:
    topology = fig1_network(0.0, 0.0, 0.0, 0.0)
    a, b = BitVector.from_string("1010"), BitVector.from_string("0000")
    transcript = simulate(topology, {"1->3": a, "1->4": a, "2->3": b}, SeededRng(0), 0)
    assert transcript.sent("1->3") == transcript.sent("1->4") == a
    assert transcript.verify_consistency(topology) == []
