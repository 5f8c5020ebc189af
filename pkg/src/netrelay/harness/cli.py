"""Command-line interface for netrelay."""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import click
import typer
from pydantic import ValidationError

from ..coding.ldpc import LdpcCode, construct_correlated_pair, construct_regular, count_4cycles, save_code
from ..config import get_settings
from ..errors import NetrelayError
from ..logger import configure_logging, get_logger
from ..regions import LinkParams
from .experiment import CodePairMode, ExperimentConfig
from .regions_report import run_region_report
from .sweep import format_ber_csv, run_ber_sweep, write_ber_csv
from .verify import CheckRegistry, CheckStatus, default_checks

app = typer.Typer(add_completion=False, help="LDPC coding over XOR relay networks.")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VERIFY = 2


def _split(value: str) -> List[str]:
    return [item.strip() for item in value.replace(" ", ",").split(",") if item.strip()]


def _parse_floats(value: str) -> List[float]:
    try:
        return [float(item) for item in _split(value)]
    except ValueError as exc:
        raise typer.BadParameter(f"expected comma-separated numbers, got {value!r}") from exc


def experiment_from_options(config: Optional[Path], overrides: Dict[str, Any]) -> ExperimentConfig:
    """File values first, then every flag that was actually given."""

    base = ExperimentConfig.from_json_file(config) if config is not None else ExperimentConfig()
    given = {key: value for key, value in overrides.items() if value is not None}
    return ExperimentConfig.model_validate({**base.model_dump(), **given})


@app.callback()
def _root_callback() -> None:
    """netrelay command group."""

    configure_logging(get_settings())


@app.command()
def ber(
    network: Optional[str] = typer.Option(None, help="Built-in network: butterfly or fig1."),
    p_list: Optional[str] = typer.Option(None, "--p-list", help="Comma-separated base crossover probabilities."),
    mult_26: Optional[float] = typer.Option(None, "--mult-26", help="Crossover multiplier of the direct link."),
    n: Optional[int] = typer.Option(None, "--n", help="Block length of both codes."),
    wc: Optional[int] = typer.Option(None, "--wc", help="Column weight."),
    wr: Optional[int] = typer.Option(None, "--wr", help="Row weight."),
    seed_a: Optional[int] = typer.Option(None, "--seed-a", help="Construction seed of code A."),
    seed_b: Optional[int] = typer.Option(None, "--seed-b", help="Construction seed of code B."),
    code_pair: Optional[CodePairMode] = typer.Option(None, "--code-pair", case_sensitive=False),
    shared_code: bool = typer.Option(False, "--shared-code", help="Use the same code for A and B."),
    strategies: Optional[str] = typer.Option(None, help="Comma-separated strategy ids."),
    max_iters: Optional[int] = typer.Option(None, "--max-iters"),
    early_stop: Optional[bool] = typer.Option(None, "--early-stop/--no-early-stop"),
    min_errors: Optional[int] = typer.Option(None, "--min-errors", help="Bit errors that end a strategy's sweep point."),
    max_frames: Optional[int] = typer.Option(None, "--max-frames"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed for messages and link noise."),
    destination: Optional[int] = typer.Option(None, "--destination", help="Destination node to decode at."),
    topology: Optional[Path] = typer.Option(None, "--topology", help="JSON topology used instead of a built-in network."),
    config: Optional[Path] = typer.Option(None, "--config", help="JSON experiment file; flags override its values."),
    out: Optional[Path] = typer.Option(None, "--out", help="CSV destination; stdout when omitted."),
) -> None:
    """Monte-Carlo BER sweep of the selected decoding strategies."""

    logger = get_logger(__name__)
    overrides: Dict[str, Any] = {
        "network": network,
        "p_list": _parse_floats(p_list) if p_list is not None else None,
        "mult_26": mult_26,
        "n": n,
        "w_c": wc,
        "w_r": wr,
        "seed_a": seed_a,
        "seed_b": seed_b,
        "code_pair": CodePairMode.SHARED if shared_code else code_pair,
        "strategies": _split(strategies) if strategies is not None else None,
        "max_iters": max_iters,
        "early_stop": early_stop,
        "min_bit_errors": min_errors,
        "max_frames": max_frames,
        "seed": seed,
        "destination": destination,
        "topology_path": topology,
        "out": out,
    }
    cfg = experiment_from_options(config, overrides)
    logger.info("BER sweep: network=%s p_list=%s strategies=%s", cfg.network, cfg.p_list, cfg.strategies)
    records = run_ber_sweep(cfg)
    if cfg.out is not None:
        write_ber_csv(records, cfg.out)
        logger.info("Wrote %d BER records to %s", len(records), cfg.out)
    else:
        typer.echo(format_ber_csv(records), nl=False)


@app.command()
def regions(
    p13: float = typer.Option(0.05, "--p13"),
    p23: float = typer.Option(0.05, "--p23"),
    p34: float = typer.Option(0.05, "--p34"),
    p14: float = typer.Option(0.05, "--p14"),
    samples: int = typer.Option(101, "--samples", help="Boundary points per region."),
    out: Optional[Path] = typer.Option(None, "--out", help="CSV destination; stdout when omitted."),
) -> None:
    """Rate regions of the four-node network and the inclusion check."""

    report = run_region_report(LinkParams(p13=p13, p23=p23, p34=p34, p14=p14), samples)
    if out is not None:
        report.write(out)
    else:
        typer.echo(report.to_csv(), nl=False)
    if not report.passed:
        raise typer.Exit(EXIT_VERIFY)


@app.command("make-code")
def make_code(
    n: int = typer.Option(500, "--n"),
    wc: int = typer.Option(3, "--wc"),
    wr: int = typer.Option(6, "--wr"),
    seed: int = typer.Option(1, "--seed"),
    out: Path = typer.Option(..., "--out", help="alist destination; a .hdr sidecar is written next to it."),
    correlated_out: Optional[Path] = typer.Option(None, "--correlated-out", help="Also write a companion code sharing one check per column."),
    companion_seed: int = typer.Option(2, "--companion-seed"),
) -> None:
    """Construct a regular 4-cycle-free code and save it."""

    logger = get_logger(__name__)
    code = construct_regular(n, wc, wr, seed)
    save_code(code, out)
    typer.echo(f"{out}: n={code.n} k={code.k} rate={code.rate:.4f}")
    if correlated_out is not None:
        companion = LdpcCode(construct_correlated_pair(code.parity_check, companion_seed), w_c=wc, seed=companion_seed)
        save_code(companion, correlated_out)
        cycles = count_4cycles(companion.parity_check)
        typer.echo(f"{correlated_out}: n={companion.n} k={companion.k} four_cycles={cycles}")
    logger.info("make-code finished (n=%d w_c=%d w_r=%d seed=%d)", n, wc, wr, seed)


@app.command()
def verify(
    include_ber: bool = typer.Option(False, "--ber", help="Also run the paired BER ordering checks (slow)."),
    ber_frames: int = typer.Option(10_000, "--ber-frames", min=1),
    seed: int = typer.Option(0, "--seed"),
) -> None:
    """Run the invariant suites; exit 2 when any check fails."""

    registry = CheckRegistry()
    registry.extend(default_checks(seed, include_ber=include_ber, ber_frames=ber_frames))
    results = registry.run_all()
    for result in results:
        typer.echo(f"[{result.status.value}] {result.id}: {result.summary}")
    if any(result.status is CheckStatus.ERROR for result in results):
        raise typer.Exit(EXIT_VERIFY)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit code instead of exiting."""

    logger = get_logger(__name__)
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        rv = app(args=args, prog_name="netrelay", standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return EXIT_CONFIG
    except click.exceptions.Abort:
        return EXIT_CONFIG
    except (NetrelayError, ValidationError) as exc:
        logger.error("%s", exc)
        typer.echo(f"Error: {exc}", err=True)
        return EXIT_CONFIG
    return rv if isinstance(rv, int) else EXIT_OK


def run() -> None:
    """Entrypoint for the ``netrelay`` console script."""

    sys.exit(main())
