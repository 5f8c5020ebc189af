import numpy as np
import pytest

pytest.importorskip("numpy")

from netrelay.coding.gf2 import (
    BitVector,
    SparseGf2Matrix,
    derive_generator,
    gauss_jordan,
    mat_vec_mul,
    rank_gf2,
    xor,
)
from netrelay.errors import DegenerateCodeError, DimensionError, DuplicateEntryError
from netrelay.harness.verify import brute_force_rank

HAMMING = [
    [1, 1, 0, 1, 1, 0, 0],
    [1, 0, 1, 1, 0, 1, 0],
    [0, 1, 1, 1, 0, 0, 1],
]


def test_bitvector_basics() -> None:
    vector = BitVector.from_string("1011001")
    assert len(vector) == 7
    assert str(vector) == "1011001"
    assert vector.weight() == 4
    assert vector[0] == 1 and vector[1] == 0
    assert vector[-1] == 1
    assert str(vector[2:5]) == "110"
    assert list(vector) == [1, 0, 1, 1, 0, 0, 1]


def test_bitvector_xor_and_concat() -> None:
    a = BitVector.from_string("1100")
    b = BitVector.from_string("1010")
    assert str(a ^ b) == "0110"
    assert xor(a, a) == BitVector.zeros(4)
    assert not (a ^ a).any()
    assert str(BitVector.concat(a, b)) == "11001010"
    assert BitVector.concat() == BitVector.zeros(0)


def test_bitvector_equality_and_hash() -> None:
    a = BitVector.from_bits([1, 0, 1, 0, 1, 0, 1, 0, 1])
    b = BitVector.from_string("101010101")
    assert a == b
    assert hash(a) == hash(b)
    assert a != BitVector.from_string("10101010")


def test_xor_rejects_length_mismatch() -> None:
    with pytest.raises(DimensionError):
        xor(BitVector.zeros(3), BitVector.zeros(4))


def test_bitvector_rejects_non_binary() -> None:
    with pytest.raises(ValueError):
        BitVector.from_bits([0, 2, 1])


def test_from_entries_validates() -> None:
    with pytest.raises(DuplicateEntryError):
        SparseGf2Matrix.from_entries(2, 2, [(0, 1), (1, 0), (0, 1)])
    with pytest.raises(DimensionError):
        SparseGf2Matrix.from_entries(2, 2, [(0, 2)])


def test_dense_round_trip_and_supports() -> None:
    matrix = SparseGf2Matrix.from_dense(HAMMING)
    assert matrix.shape == (3, 7)
    assert matrix.nnz == 12
    assert np.array_equal(matrix.to_dense(), np.array(HAMMING))
    assert matrix.row_support(0).tolist() == [0, 1, 3, 4]
    assert matrix.column_support(3).tolist() == [0, 1, 2]
    assert matrix.column_weights().tolist() == [2, 2, 2, 3, 1, 1, 1]
    assert matrix.row_weights().tolist() == [4, 4, 4]


def test_transpose_and_xor() -> None:
    matrix = SparseGf2Matrix.from_dense(HAMMING)
    assert np.array_equal(matrix.T.to_dense(), np.array(HAMMING).T)
    assert (matrix ^ matrix).nnz == 0
    identity = SparseGf2Matrix.identity(3)
    other = SparseGf2Matrix.from_dense([[1, 1, 0], [0, 0, 0], [0, 0, 1]])
    assert (identity ^ other).to_dense().tolist() == [[0, 1, 0], [0, 1, 0], [0, 0, 0]]
    with pytest.raises(DimensionError):
        identity ^ SparseGf2Matrix.identity(2)


def test_block_assembly() -> None:
    a = SparseGf2Matrix.from_dense([[1, 0], [1, 1]])
    b = SparseGf2Matrix.identity(2)
    assembled = SparseGf2Matrix.block([[a, None], [b, a]])
    assert assembled.to_dense().tolist() == [
        [1, 0, 0, 0],
        [1, 1, 0, 0],
        [1, 0, 1, 0],
        [0, 1, 1, 1],
    ]
    with pytest.raises(DimensionError):
        SparseGf2Matrix.block([[a, None], [None, None]])


def test_mat_vec_mul() -> None:
    matrix = SparseGf2Matrix.from_dense([[1, 1, 0], [0, 1, 1]])
    assert str(mat_vec_mul(matrix, BitVector.from_string("110"))) == "01"
    with pytest.raises(DimensionError):
        mat_vec_mul(matrix, BitVector.zeros(4))


def test_gauss_jordan_hamming() -> None:
    result = gauss_jordan(SparseGf2Matrix.from_dense(HAMMING))
    assert result.rank == 3
    assert result.pivot_cols == [0, 1, 3]
    assert result.reduced.to_dense().tolist() == [
        [1, 0, 1, 0, 1, 0, 1],
        [0, 1, 1, 0, 1, 1, 0],
        [0, 0, 0, 1, 1, 1, 1],
    ]


def test_gauss_jordan_moves_zero_rows_down() -> None:
    result = gauss_jordan(SparseGf2Matrix.from_dense([[1, 1, 0], [1, 1, 0], [0, 0, 1]]))
    assert result.rank == 2
    assert result.pivot_cols == [0, 2]
    assert result.reduced.to_dense().tolist() == [[1, 1, 0], [0, 0, 1], [0, 0, 0]]


@pytest.mark.parametrize("seed", range(8))
def test_rank_matches_span_dimension(seed: int) -> None:
    rng = np.random.default_rng(seed)
    for _ in range(20):
        dense = rng.integers(0, 2, size=(int(rng.integers(1, 7)), int(rng.integers(1, 9))))
        matrix = SparseGf2Matrix.from_dense(dense)
        assert rank_gf2(matrix) == brute_force_rank(matrix)


def test_derive_generator_hamming() -> None:
    parity_check = SparseGf2Matrix.from_dense(HAMMING)
    derived = derive_generator(parity_check)
    assert derived.matrix.shape == (4, 7)
    assert derived.info_positions == (2, 4, 5, 6)
    assert derived.permutation == (2, 4, 5, 6, 0, 1, 3)
    product = derived.matrix.to_dense().astype(int) @ np.array(HAMMING).T % 2
    assert not product.any()
    assert rank_gf2(derived.matrix) == 4
    submatrix = derived.matrix.to_dense()[:, list(derived.info_positions)]
    assert np.array_equal(submatrix, np.eye(4, dtype=np.uint8))


def test_derive_generator_rejects_full_rank() -> None:
    with pytest.raises(DegenerateCodeError):
        derive_generator(SparseGf2Matrix.identity(3))
