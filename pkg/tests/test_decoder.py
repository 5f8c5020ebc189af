import numpy as np
import pytest

from netrelay.coding.decoder import (
    MESSAGE_CLAMP,
    LlrVector,
    TannerGraph,
    bsc_llr,
    erased_llr,
    sum_product_decode,
)
from netrelay.coding.gf2 import BitVector, SparseGf2Matrix
from netrelay.coding.ldpc import LdpcCode, construct_regular
from netrelay.errors import DimensionError, ParameterError
from netrelay.harness.verify import ml_decode, tree_code

HAMMING = SparseGf2Matrix.from_dense(
    [
        [1, 1, 0, 1, 1, 0, 0],
        [1, 0, 1, 1, 0, 1, 0],
        [0, 1, 1, 1, 0, 0, 1],
    ]
)


def test_tanner_graph_layout() -> None:
    graph = TannerGraph(HAMMING)
    assert (graph.bit_count, graph.check_count, graph.edge_count) == (7, 3, 12)
    assert graph.check_ptr.tolist() == [0, 4, 8, 12]
    assert graph.edge_bit[:4].tolist() == [0, 1, 3, 4]
    assert graph.bit_degrees().tolist() == [2, 2, 2, 3, 1, 1, 1]
    assert graph.syndrome_of(np.array([0, 0, 0, 0, 0, 0, 1])).tolist() == [0, 0, 1]


def test_bsc_llr_signs_and_magnitude() -> None:
    llr = bsc_llr(BitVector.from_string("0110"), 0.1)
    magnitude = np.log(9.0)
    assert llr.values.tolist() == pytest.approx([magnitude, -magnitude, -magnitude, magnitude])


@pytest.mark.parametrize("p", [0.0, 0.5, -0.1, 0.7])
def test_bsc_llr_rejects_degenerate_probabilities(p: float) -> None:
    with pytest.raises(ParameterError):
        bsc_llr(BitVector.zeros(4), p)


def test_llr_vector_validation() -> None:
    assert len(erased_llr(5)) == 5
    assert not erased_llr(5).values.any()
    with pytest.raises(ParameterError):
        erased_llr(0)
    with pytest.raises(ParameterError):
        LlrVector(np.array([0.0, np.inf]))
    with pytest.raises(DimensionError):
        LlrVector(np.zeros((2, 2)))
    assert len(LlrVector.concat([erased_llr(2), erased_llr(3)])) == 5


def test_codeword_is_accepted_before_first_iteration() -> None:
    code = LdpcCode(HAMMING)
    codeword = code.encode(BitVector.from_string("1011"))
    result = sum_product_decode(code.graph, bsc_llr(codeword, 0.05), 20)
    assert result.converged
    assert result.iterations_used == 0
    assert result.hard_decision == codeword


def test_single_flip_on_degree_one_bit_is_corrected() -> None:
    code = LdpcCode(HAMMING)
    received = BitVector.from_string("0000001")
    result = sum_product_decode(code.graph, bsc_llr(received, 0.05), 20)
    assert result.converged
    assert result.hard_decision == BitVector.zeros(7)
    assert result.iterations_used == 2


def test_without_early_stop_all_iterations_run() -> None:
    code = LdpcCode(HAMMING)
    result = sum_product_decode(code.graph, bsc_llr(BitVector.zeros(7), 0.05), 7, early_stop=False)
    assert result.converged
    assert result.iterations_used == 7
    assert result.hard_decision == BitVector.zeros(7)


def test_all_zero_prior_decides_zero() -> None:
    code = LdpcCode(HAMMING)
    result = sum_product_decode(code.graph, erased_llr(7), 5)
    assert result.hard_decision == BitVector.zeros(7)
    assert result.converged and result.iterations_used == 0


def test_decoder_matches_maximum_likelihood_on_a_tree() -> None:
    code = tree_code()
    assert code.k == 2
    for value in range(4):
        codeword = code.encode(BitVector.from_bits([value & 1, value >> 1]))
        for flip in range(code.n):
            word = codeword.to_array()
            word[flip] ^= 1
            received = BitVector.from_bits(word)
            decoded = sum_product_decode(code.graph, bsc_llr(received, 0.05), 20)
            assert decoded.hard_decision == ml_decode(code, received) == codeword


def test_strong_priors_are_clamped() -> None:
    code = LdpcCode(HAMMING)
    prior = LlrVector(np.array([1e6, -1e6, 1e6, 1e6, 1e6, 1e6, 1e6]))
    result = sum_product_decode(code.graph, prior, 10)
    assert len(result.hard_decision) == 7
    assert MESSAGE_CLAMP == 30.0


def test_low_noise_decoding_of_regular_code() -> None:
    code = construct_regular(96, 3, 6, seed=1)
    rng = np.random.default_rng(11)
    codeword = code.encode(BitVector.from_bits(rng.integers(0, 2, size=code.k)))
    error = np.zeros(96, dtype=np.uint8)
    error[[5, 50]] = 1
    received = codeword ^ BitVector.from_bits(error)
    result = sum_product_decode(code.graph, bsc_llr(received, 0.02), 20)
    assert result.converged
    assert result.hard_decision == codeword


def test_decoder_rejects_bad_inputs() -> None:
    graph = TannerGraph(HAMMING)
    with pytest.raises(DimensionError):
        sum_product_decode(graph, erased_llr(6), 5)
    with pytest.raises(ParameterError):
        sum_product_decode(graph, erased_llr(7), 0)
