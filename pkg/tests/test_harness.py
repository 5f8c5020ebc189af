import json
from pathlib import Path
from threading import Lock

import pytest
from pydantic import ValidationError

from netrelay.coding.gf2 import BitVector
from netrelay.coding.ldpc import load_code
from netrelay.config import AppSettings, reload_settings
from netrelay.harness import cli
from netrelay.harness.experiment import CodePairMode, ExperimentConfig, build_codes
from netrelay.harness.regions_report import REGION_CSV_HEADER, run_region_report
from netrelay.harness.sweep import CSV_HEADER, format_ber_csv, run_ber_sweep
from netrelay.harness.verify import (
    BerOrderingCheck,
    ChannelAgreementCheck,
    CheckRegistry,
    CheckResult,
    CheckStatus,
    ClosedFormCheck,
    DegenerateIdentityCheck,
    EncodeDecodeCheck,
    InvariantCheck,
    MatrixAlgebraCheck,
    MlOracleCheck,
    OrderingClaim,
    RankCheck,
    SubsetChainCheck,
    sign_test,
)
from netrelay.regions import LinkParams
from netrelay.strategies.base import CodePair, DecodingStrategy, StrategyOutcome
from netrelay.strategies.observation import DestinationObservation

SMALL = {"n": 48, "p_list": [0.02], "max_frames": 12, "min_bit_errors": 10_000, "seed": 7}


class FlakyStrategy(DecodingStrategy):
    """Perfect on a noiseless network except that the first ``bad_frames`` frames flip every message bit."""

    id = "flaky"
    name = "Flaky"

    def __init__(self, bad_frames: int) -> None:
        super().__init__()
        self.bad_frames = bad_frames
        self.calls = 0
        self._lock = Lock()

    def decode(
        self, codes: CodePair, obs: DestinationObservation, max_iters: int, *, early_stop: bool = True
    ) -> StrategyOutcome:
        with self._lock:
            frame = self.calls
            self.calls += 1
        c_a, c_b = obs.y_direct, obs.y_direct ^ obs.y_combined
        if frame < self.bad_frames:
            c_a, c_b = _flip_info(codes.code_a, c_a), _flip_info(codes.code_b, c_b)
        return StrategyOutcome(c_a, c_b, True, True, 0)


def _flip_info(code, word: BitVector) -> BitVector:
    bits = word.to_array()
    bits[list(code.info_positions)] ^= 1
    return BitVector.from_bits(bits)


def test_experiment_config_defaults_and_destination() -> None:
    cfg = ExperimentConfig()
    assert cfg.n == 500 and cfg.mult_26 == 3.0
    assert cfg.strategies == ["independent", "serial", "joint", "extended"]
    assert cfg.destination_node() == 6
    assert ExperimentConfig(network="fig1").destination_node() == 4
    assert ExperimentConfig(network="fig1", destination=4).destination_node() == 4


@pytest.mark.parametrize(
    "payload",
    [
        {"strategies": ["magic"]},
        {"strategies": []},
        {"n": 49},
        {"p_list": [0.05], "mult_26": 12.0},
        {"p_list": [0.6]},
        {"p_list": []},
        {"unexpected": 1},
    ],
)
def test_experiment_config_rejects(payload: dict) -> None:
    with pytest.raises(ValidationError):
        ExperimentConfig(**payload)


def test_sweep_points_for_fig1_scale_the_direct_link() -> None:
    points = ExperimentConfig(network="fig1", p_list=[0.01, 0.02], mult_26=3.0).sweep_points()
    assert [p for p, _ in points] == [0.01, 0.02]
    topology = points[1][1]
    assert topology.link("1->4").p == pytest.approx(0.06)
    assert topology.link("3->4").p == pytest.approx(0.02)


def test_config_from_json_file(tmp_path: Path) -> None:
    path = tmp_path / "experiment.json"
    path.write_text(json.dumps({"n": 96, "p_list": [0.01], "code_pair": "shared"}), encoding="utf-8")
    cfg = ExperimentConfig.from_json_file(path)
    assert cfg.n == 96 and cfg.code_pair is CodePairMode.SHARED


@pytest.mark.parametrize("mode", list(CodePairMode))
def test_build_codes_modes(mode: CodePairMode) -> None:
    codes = build_codes(ExperimentConfig(n=48, code_pair=mode))
    assert codes.n == 48
    if mode is CodePairMode.SHARED:
        assert codes.code_a is codes.code_b
    else:
        assert codes.code_a.parity_check != codes.code_b.parity_check


def test_sweep_counts_errors_and_stops_per_strategy() -> None:
    cfg = ExperimentConfig(n=48, p_list=[0.0], max_frames=10, min_bit_errors=10_000, seed=1)
    codes = build_codes(cfg)
    (record,) = run_ber_sweep(cfg, codes=codes, strategies=[FlakyStrategy(bad_frames=3)])
    assert record.frames == 10
    assert record.bit_errors_a == 3 * codes.code_a.k
    assert record.bit_errors_b == 3 * codes.code_b.k
    assert record.ber_a == pytest.approx(0.3)
    assert record.convergence_rate == 1.0

    stop_early = cfg.model_copy(update={"min_bit_errors": 2 * codes.code_a.k + 1})
    (record,) = run_ber_sweep(stop_early, codes=codes, strategies=[FlakyStrategy(bad_frames=5)])
    assert record.frames == 3
    assert record.bit_errors_a == 3 * codes.code_a.k


def test_sweep_is_deterministic_across_worker_counts() -> None:
    cfg = ExperimentConfig(**SMALL)
    codes = build_codes(cfg)
    serial_run = format_ber_csv(run_ber_sweep(cfg, codes=codes))
    threaded_run = format_ber_csv(
        run_ber_sweep(cfg, codes=codes, settings=AppSettings(threads=3, batch_frames=5))
    )
    assert serial_run == threaded_run
    lines = serial_run.splitlines()
    assert lines[0] == CSV_HEADER
    assert [line.split(",")[0] for line in lines[1:]] == ["independent", "serial", "joint", "extended"]
    assert all(line.split(",")[2] == "12" for line in lines[1:])


def test_region_report_rows() -> None:
    report = run_region_report(LinkParams.uniform(0.05), samples=5)
    csv_text = report.to_csv()
    lines = csv_text.splitlines()
    assert lines[0] == REGION_CSV_HEADER
    assert len(lines) == 1 + 3 * 5 + 3 + 1
    assert lines[-1] == "check,subset_chain,,,,,PASS"
    summary = [line for line in lines if line.startswith("summary,joint")]
    ra, rb, total = (float(value) for value in summary[0].split(",")[3:6])
    assert (ra, rb, total) == (pytest.approx(0.8034, abs=2e-4), pytest.approx(0.4276, abs=1e-4), pytest.approx(1.1412, abs=1e-4))
    assert "summary,nc,," in csv_text and report.passed


def test_sign_test_directions() -> None:
    worse = [3, 2, 5, 1, 4, 2, 3, 1, 2, 6, 2, 3]
    better = [0] * len(worse)
    assert sign_test(worse, better, strict=True)[0]
    assert sign_test(worse, better, strict=False)[0]
    assert not sign_test(better, worse, strict=False)[0]
    assert not sign_test(better, better, strict=True)[0]
    assert sign_test(better, better, strict=False)[0]


def test_fast_invariant_checks_pass() -> None:
    registry = CheckRegistry()
    registry.extend(
        [
            RankCheck(draws=40),
            EncodeDecodeCheck(messages=10, n=48),
            MlOracleCheck(),
            ClosedFormCheck(),
            SubsetChainCheck(draws=200),
            MatrixAlgebraCheck(pairs=1, words=20, n=48),
            ChannelAgreementCheck(trials=200),
            DegenerateIdentityCheck(frames=5, n=48),
        ]
    )
    results = registry.run_all()
    assert [result.status for result in results] == [CheckStatus.OK] * 8, [r.summary for r in results]


def test_ordering_check_on_identical_streams() -> None:
    claims = [OrderingClaim("serial", "independent", "a"), OrderingClaim("independent", "serial", "a")]
    check = BerOrderingCheck("tiny", 3.0, claims, p_list=[0.02], frames=20, n=48)
    result = check.run()
    assert result.status is CheckStatus.OK
    assert len(result.details["outcomes"]) == 2


def test_ordering_check_skips_points_where_every_strategy_fails() -> None:
    claims = [OrderingClaim("independent", "serial", "b", strict=True)]
    check = BerOrderingCheck("saturated", 3.0, claims, p_list=[0.1], frames=10, n=48)
    result = check.run()
    assert result.status is CheckStatus.OK
    (outcome,) = result.details["outcomes"]
    assert outcome.endswith("skipped (every strategy fails on A)")
    assert result.summary == "0 paired comparisons, 1 skipped"


def test_direct_link_at_12p_orders_strategies() -> None:
    cfg = ExperimentConfig(n=200, p_list=[0.003], mult_26=12.0, max_frames=300, min_bit_errors=1_000_000, seed=3)
    records = {record.strategy: record for record in run_ber_sweep(cfg)}
    assert records["independent"].ber_b > records["serial"].ber_b
    assert records["joint"].ber_a <= records["serial"].ber_a
    assert records["extended"].ber_a <= records["serial"].ber_a
    assert min(records["joint"].ber_a, records["extended"].ber_a) < records["serial"].ber_a


class _Fixed(InvariantCheck):
    def __init__(self, check_id: str, status: CheckStatus) -> None:
        self.id = check_id
        self.status = status

    def run(self) -> CheckResult:
        return CheckResult(self.id, self.name, self.status, "fixed")


class _Crashing(InvariantCheck):
    id = "crash"

    def run(self) -> CheckResult:
        raise RuntimeError("boom")


def test_registry_reports_crashes_and_unknown_ids() -> None:
    registry = CheckRegistry()
    registry.register(_Crashing())
    (result,) = registry.run_all()
    assert result.status is CheckStatus.ERROR and "boom" in result.summary
    assert registry.run_check("crash").status is CheckStatus.ERROR
    with pytest.raises(KeyError):
        registry.get_check("missing")
    assert registry.list_checks()[0]["id"] == "crash"


def test_cli_regions_to_stdout_and_file(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert cli.main(["regions", "--samples", "3"]) == 0
    assert capsys.readouterr().out.startswith(REGION_CSV_HEADER + "\n")
    target = tmp_path / "regions.csv"
    assert cli.main(["regions", "--p14", "0.1", "--out", str(target)]) == 0
    assert target.read_text(encoding="utf-8").splitlines()[-1] == "check,subset_chain,,,,,PASS"


def test_cli_ber_is_reproducible(tmp_path: Path) -> None:
    args = ["ber", "--n", "48", "--p-list", "0.02", "--max-frames", "6", "--seed", "7", "--strategies", "serial,joint"]
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main([*args, "--out", str(first)]) == 0
    assert cli.main([*args, "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    assert len(first.read_text(encoding="utf-8").splitlines()) == 3


def test_cli_ber_flags_override_config_file(tmp_path: Path) -> None:
    config = tmp_path / "experiment.json"
    config.write_text(json.dumps({"n": 48, "p_list": [0.01, 0.02], "max_frames": 50, "strategies": ["serial"]}))
    out = tmp_path / "out.csv"
    assert cli.main(["ber", "--config", str(config), "--max-frames", "3", "--shared-code", "--out", str(out)]) == 0
    rows = out.read_text(encoding="utf-8").splitlines()[1:]
    assert [row.split(",")[2] for row in rows] == ["3", "3"]


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["ber", "--strategies", "magic"],
        ["ber", "--n", "49"],
        ["ber", "--p-list", "a,b"],
        ["regions", "--p13", "0.7"],
        ["make-code", "--n", "8", "--wc", "2", "--wr", "3", "--out", "x.alist"],
    ],
)
def test_cli_configuration_errors_exit_one(argv: list[str]) -> None:
    assert cli.main(argv) == 1


def test_cli_make_code(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    out, companion = tmp_path / "a.alist", tmp_path / "b.alist"
    argv = ["make-code", "--n", "48", "--seed", "3", "--out", str(out), "--correlated-out", str(companion)]
    assert cli.main(argv) == 0
    code = load_code(out)
    assert (code.n, code.w_c, code.w_r, code.seed) == (48, 3, 6, 3)
    assert load_code(companion).n == 48
    assert "four_cycles=" in capsys.readouterr().out


def test_cli_verify_exit_codes(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr(cli, "default_checks", lambda *args, **kwargs: [_Fixed("good", CheckStatus.OK)])
    assert cli.main(["verify"]) == 0
    monkeypatch.setattr(
        cli,
        "default_checks",
        lambda *args, **kwargs: [_Fixed("good", CheckStatus.OK), _Fixed("bad", CheckStatus.ERROR)],
    )
    assert cli.main(["verify", "--seed", "3"]) == 2


def test_experiment_defaults_follow_settings(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("NETRELAY_MAX_FRAMES", "3")
    monkeypatch.setenv("NETRELAY_MIN_BIT_ERRORS", "1")
    monkeypatch.setenv("NETRELAY_MAX_ITERS", "7")
    reload_settings()
    cfg = ExperimentConfig()
    assert (cfg.max_frames, cfg.min_bit_errors, cfg.max_iters) == (3, 1, 7)
    explicit = ExperimentConfig(max_frames=50, min_bit_errors=20, max_iters=30)
    assert (explicit.max_frames, explicit.min_bit_errors, explicit.max_iters) == (50, 20, 30)


def test_cli_sweep_uses_frame_cap_from_environment(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    monkeypatch.setenv("NETRELAY_MAX_FRAMES", "4")
    monkeypatch.setenv("NETRELAY_MIN_BIT_ERRORS", "1000000")
    reload_settings()
    out = tmp_path / "env.csv"
    assert cli.main(["ber", "--n", "48", "--p-list", "0.02", "--strategies", "serial", "--out", str(out)]) == 0
    (row,) = out.read_text(encoding="utf-8").splitlines()[1:]
    assert row.split(",")[2] == "4"
