"""Monte-Carlo BER sweeps with paired frames across strategies."""

from __future__ import annotations

import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, TextIO

from ..config import AppSettings, get_settings
from ..logger import get_logger
from ..network.channel import SeededRng
from ..strategies.base import CodePair, DecodingStrategy
from ..strategies.observation import resolve_taps
from ..strategies.registry import default_registry
from .experiment import ExperimentConfig, FrameResult, FrameSimulator, build_codes

logger = get_logger(__name__)

CSV_HEADER = "strategy,p,frames,bit_errors_a,bit_errors_b,ber_a,ber_b,mean_iters,conv_rate"


@dataclass(frozen=True, slots=True)
class BerRecord:
    strategy: str
    p: float
    frames: int
    bit_errors_a: int
    bit_errors_b: int
    ber_a: float
    ber_b: float
    mean_iterations: float
    convergence_rate: float

    def to_csv_row(self) -> str:
        fields = (
            self.strategy,
            repr(float(self.p)),
            str(self.frames),
            str(self.bit_errors_a),
            str(self.bit_errors_b),
            repr(self.ber_a),
            repr(self.ber_b),
            repr(self.mean_iterations),
            repr(self.convergence_rate),
        )
        return ",".join(fields)


class _Accumulator:
    """Running totals for one strategy at one sweep point."""

    def __init__(self, strategy: str, k_a: int, k_b: int, min_bit_errors: int) -> None:
        self.strategy = strategy
        self.k_a, self.k_b = k_a, k_b
        self.min_bit_errors = min_bit_errors
        self.frames = 0
        self.errors_a = 0
        self.errors_b = 0
        self.iterations = 0
        self.converged = 0
        self.done = False

    def add(self, frame: FrameResult) -> None:
        if self.done:
            return
        tally = frame.tallies[self.strategy]
        self.frames += 1
        self.errors_a += tally.bit_errors_a
        self.errors_b += tally.bit_errors_b
        self.iterations += tally.iterations
        self.converged += int(tally.converged)
        if max(self.errors_a, self.errors_b) >= self.min_bit_errors:
            self.done = True

    def record(self, p: float) -> BerRecord:
        frames = max(self.frames, 1)
        return BerRecord(
            self.strategy,
            p,
            self.frames,
            self.errors_a,
            self.errors_b,
            self.errors_a / (frames * self.k_a),
            self.errors_b / (frames * self.k_b),
            self.iterations / frames,
            self.converged / frames,
        )


def _batches(total: int, size: int) -> Iterable[range]:
    for start in range(0, total, size):
        yield range(start, min(start + size, total))


def run_ber_sweep(
    cfg: ExperimentConfig,
    *,
    codes: Optional[CodePair] = None,
    strategies: Optional[Sequence[DecodingStrategy]] = None,
    settings: Optional[AppSettings] = None,
) -> List[BerRecord]:
    """BER per (strategy, p), each strategy stopping once its worse stream reaches ``min_bit_errors``.

    Frames are decoded on a thread pool in batches but folded into the
    totals strictly in trial order, so the records do not depend on the
    number of workers or the batch size.
    """

    settings = settings or get_settings()
    codes = codes or build_codes(cfg)
    if strategies is None:
        strategies = default_registry().select(cfg.strategies)
    for strategy in strategies:
        strategy.prepare(codes)
    rng = SeededRng(cfg.seed)
    workers = settings.worker_count()
    records: List[BerRecord] = []

    with ThreadPoolExecutor(max_workers=workers) as pool:
        for p, topology in cfg.sweep_points():
            layout = resolve_taps(
                topology,
                cfg.destination_node(),
                probability_floor=settings.probability_floor,
                p_direct=cfg.p_direct_override,
                p_combined=cfg.p_combined_override,
            )
            simulator = FrameSimulator(codes, topology, layout, rng, cfg.max_iters, cfg.early_stop)
            totals: Dict[str, _Accumulator] = {
                strategy.id: _Accumulator(strategy.id, codes.code_a.k, codes.code_b.k, cfg.min_bit_errors)
                for strategy in strategies
            }
            logger.info("Sweep point p=%g: %d strategies, up to %d frames", p, len(strategies), cfg.max_frames)
            for batch in _batches(cfg.max_frames, settings.batch_frames):
                active = [strategy for strategy in strategies if not totals[strategy.id].done]
                if not active:
                    break
                for frame in pool.map(lambda trial: simulator.run(trial, active), batch):
                    for strategy in active:
                        totals[strategy.id].add(frame)
                logger.debug("p=%g: processed trials up to %d", p, batch[-1])
            for strategy in strategies:
                record = totals[strategy.id].record(p)
                records.append(record)
                logger.info(
                    "p=%g %s: frames=%d BER_A=%.3e BER_B=%.3e",
                    p, record.strategy, record.frames, record.ber_a, record.ber_b,
                )
    return records


def format_ber_csv(records: Iterable[BerRecord]) -> str:
    buffer = io.StringIO(newline="")
    write_ber_csv(records, buffer)
    return buffer.getvalue()


def write_ber_csv(records: Iterable[BerRecord], target: str | Path | TextIO) -> None:
    lines = [CSV_HEADER] + [record.to_csv_row() for record in records]
    text = "\n".join(lines) + "\n"
    if isinstance(target, (str, Path)):
        Path(target).write_text(text, encoding="utf-8", newline="\n")
    else:
        target.write(text)
