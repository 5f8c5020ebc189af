"""Experiment runner: BER sweeps, region reports and verification suites."""

from .experiment import (
    CodePairMode,
    ExperimentConfig,
    FrameResult,
    FrameSimulator,
    StrategyTally,
    build_codes,
    simulate_frames,
)
from .regions_report import REGION_CSV_HEADER, RegionReport, run_region_report
from .sweep import CSV_HEADER, BerRecord, format_ber_csv, run_ber_sweep, write_ber_csv
from .verify import CheckRegistry, CheckResult, CheckStatus, InvariantCheck, default_checks

__all__ = [
    "BerRecord",
    "CSV_HEADER",
    "CheckRegistry",
    "CheckResult",
    "CheckStatus",
    "CodePairMode",
    "ExperimentConfig",
    "FrameResult",
    "FrameSimulator",
    "InvariantCheck",
    "REGION_CSV_HEADER",
    "RegionReport",
    "StrategyTally",
    "build_codes",
    "default_checks",
    "format_ber_csv",
    "run_ber_sweep",
    "run_region_report",
    "simulate_frames",
    "write_ber_csv",
]
