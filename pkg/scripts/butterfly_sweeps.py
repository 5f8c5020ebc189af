#!/usr/bin/env python3
"""Run the two butterfly BER protocols: direct link at 3p and at 12p."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from _paths import add_project_src_to_path

add_project_src_to_path()

from netrelay.errors import NetrelayError
from netrelay.harness import ExperimentConfig, run_ber_sweep, write_ber_csv
from _args import parse_float_sequence

PROTOCOLS = {"mult3": 3.0, "mult12": 12.0}


def parse_args() -> tuple[argparse.ArgumentParser, argparse.Namespace]:
    parser = argparse.ArgumentParser(description="BER of all four strategies on the butterfly network.")
    parser.add_argument("--out-dir", type=Path, default=Path("results"), help="Directory for the CSV files.")
    parser.add_argument(
        "--p-list",
        nargs="+",
        default=["0.01,0.02,0.03"],
        help="Base crossover probabilities (default: 0.01,0.02,0.03).",
    )
    parser.add_argument("--n", type=int, default=500, help="Block length (default: 500).")
    parser.add_argument("--seed", type=int, default=7, help="Master seed (default: 7).")
    parser.add_argument("--max-frames", type=int, default=100_000, help="Frame cap per point (default: 100000).")
    parser.add_argument(
        "--only",
        choices=sorted(PROTOCOLS),
        default=None,
        help="Run a single protocol instead of both.",
    )
    return parser, parser.parse_args()


def main() -> int:
    parser, args = parse_args()
    try:
        p_list = parse_float_sequence(args.p_list, "crossover probability")
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))
    args.out_dir.mkdir(parents=True, exist_ok=True)
    selected = [args.only] if args.only else list(PROTOCOLS)
    for name in selected:
        try:
            cfg = ExperimentConfig(
                network="butterfly",
                p_list=p_list,
                mult_26=PROTOCOLS[name],
                n=args.n,
                seed=args.seed,
                max_frames=args.max_frames,
            )
            records = run_ber_sweep(cfg)
        except (NetrelayError, ValueError) as exc:
            print(f"ERROR: {name} sweep failed: {exc}", file=sys.stderr)
            return 1
        target = args.out_dir / f"butterfly_{name}.csv"
        write_ber_csv(records, target)
        print(f"{name}: {len(records)} records -> {target}")
        for record in records:
            print(f"  p={record.p:<6g} {record.strategy:<12} BER_A={record.ber_a:.3e} BER_B={record.ber_b:.3e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
