"""Binary algebra, LDPC codes and sum-product decoding."""

from .alist import format_alist, parse_alist, read_alist, write_alist
from .decoder import DecodeResult, LlrVector, TannerGraph, bsc_llr, erased_llr, sum_product_decode
from .gf2 import (
    BitVector,
    DerivedGenerator,
    GaussJordanResult,
    SparseGf2Matrix,
    derive_generator,
    gauss_jordan,
    mat_vec_mul,
    rank_gf2,
    xor,
)
from .ldpc import (
    LdpcCode,
    construct_correlated_pair,
    construct_regular,
    count_4cycles,
    encode,
    load_code,
    save_code,
)

__all__ = [
    "BitVector",
    "DecodeResult",
    "DerivedGenerator",
    "GaussJordanResult",
    "LdpcCode",
    "LlrVector",
    "SparseGf2Matrix",
    "TannerGraph",
    "bsc_llr",
    "construct_correlated_pair",
    "construct_regular",
    "count_4cycles",
    "derive_generator",
    "encode",
    "erased_llr",
    "format_alist",
    "gauss_jordan",
    "load_code",
    "mat_vec_mul",
    "parse_alist",
    "rank_gf2",
    "read_alist",
    "save_code",
    "sum_product_decode",
    "write_alist",
    "xor",
]
