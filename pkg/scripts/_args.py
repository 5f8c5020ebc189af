"""Argument parsing helpers shared by the manual scripts."""

from __future__ import annotations

import argparse
from typing import Iterable, List


def parse_float_sequence(values: Iterable[str], value_name: str) -> List[float]:
    """Parse floats given either as separate arguments or comma-separated."""

    parsed: List[float] = []
    for raw in values:
        for item in raw.split(","):
            if not item.strip():
                continue
            try:
                parsed.append(float(item))
            except ValueError as exc:
                raise argparse.ArgumentTypeError(f"Invalid {value_name}: {item}") from exc
    return parsed
