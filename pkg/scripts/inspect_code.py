#!/usr/bin/env python3
"""Print degree, rank, 4-cycle and nnz statistics for one code or a code pair."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from _paths import add_project_src_to_path

add_project_src_to_path()

from netrelay.coding import LdpcCode, count_4cycles, rank_gf2, read_alist
from netrelay.errors import NetrelayError
from netrelay.strategies import build_h_extn, build_h_joint, nnz_accounting


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Inspect alist parity-check matrices.")
    parser.add_argument("code_a", type=Path, help="alist file of code A.")
    parser.add_argument("code_b", type=Path, nargs="?", default=None, help="Optional alist file of code B.")
    return parser.parse_args()


def describe(label: str, code: LdpcCode) -> None:
    h = code.parity_check
    col, row = np.unique(h.column_weights()), np.unique(h.row_weights())
    print(f"{label}: {h.rows}x{h.cols} nnz={h.nnz} rank={rank_gf2(h)} k={code.k} rate={code.rate:.4f}")
    print(f"  column weights {col.tolist()}  row weights {row.tolist()}  4-cycles {count_4cycles(h)}")


def main() -> int:
    args = parse_args()
    try:
        code_a = LdpcCode(read_alist(args.code_a))
        describe("A", code_a)
        if args.code_b is None:
            return 0
        code_b = LdpcCode(read_alist(args.code_b))
        describe("B", code_b)
        h_joint = build_h_joint(code_a.parity_check, code_b.parity_check)
        h_extn = build_h_extn(code_a.parity_check, code_b.parity_check)
    except (OSError, NetrelayError) as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return 1
    print(f"H_joint: nnz={h_joint.nnz} 4-cycles={count_4cycles(h_joint)}")
    print(f"H_extn: nnz={h_extn.nnz} 4-cycles={count_4cycles(h_extn)}")
    for strategy in ("independent", "serial", "joint", "extended"):
        print(f"  {strategy:<12} decodes over {nnz_accounting(strategy, code_a, code_b)} non-zeros")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
