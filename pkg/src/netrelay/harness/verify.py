"""Self-verification suites run by ``netrelay verify``.

Each check is a small object with an id and a ``run()`` returning a
:class:`CheckResult`; the registry runs them in order. The statistical
ordering checks are slow and only run on request.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np
from scipy.stats import binomtest

from ..coding.decoder import bsc_llr, sum_product_decode
from ..coding.gf2 import BitVector, SparseGf2Matrix, gauss_jordan, mat_vec_mul
from ..coding.ldpc import LdpcCode, construct_regular, count_4cycles
from ..config import get_settings
from ..logger import get_logger
from ..network.channel import SeededRng
from ..network.simulate import simulate
from ..network.topology import butterfly, fig1_network
from ..regions import LinkParams, bsc_capacity, p_double_prime, p_prime, region_joint, verify_subset_chain
from ..strategies.base import CodePair
from ..strategies.builtin import decode_joint, nnz_accounting
from ..strategies.matrices import build_h_extn, build_h_joint
from ..strategies.observation import resolve_taps
from ..strategies.registry import default_registry
from .experiment import FrameSimulator, simulate_frames

logger = get_logger(__name__)


class CheckStatus(str, Enum):
    OK = "ok"
    ERROR = "error"
    SKIPPED = "skipped"


@dataclass(slots=True)
class CheckResult:
    """Result returned by a verification check."""

    id: str
    name: str
    status: CheckStatus
    summary: str
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status is not CheckStatus.ERROR

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "name": self.name,
            "status": self.status.value,
            "summary": self.summary,
            "details": self.details,
        }


# all links at 0.05, rounded; the exact evaluation is compared at 1e-12
REFERENCE_VALUES = {
    "c14": 0.71360,
    "p_prime": 0.13550,
    "c_prime": 0.42760,
    "p_double_prime": 0.17195,
    "c_double_prime": 0.33770,
    "joint_ra": 0.80350,
    "joint_rb": 0.42760,
    "joint_sum": 1.14120,
}
REFERENCE_TOLERANCE = 5e-4


def tree_code() -> LdpcCode:
    """Length-8 code: a 5-bit and a 3-bit repetition code side by side (cycle-free)."""

    return LdpcCode(SparseGf2Matrix.from_rows(8, [[0, 1], [1, 2], [2, 3], [3, 4], [5, 6], [6, 7]]))


def brute_force_rank(matrix: SparseGf2Matrix) -> int:
    dense = matrix.to_dense().astype(np.int64)
    span = set()
    for mask in product((0, 1), repeat=matrix.rows):
        combo = (np.asarray(mask, dtype=np.int64) @ dense) % 2
        span.add(tuple(int(bit) for bit in combo))
    return int(round(math.log2(len(span))))


def ml_decode(code: LdpcCode, received: BitVector) -> BitVector:
    """Nearest codeword by exhaustive search over all 2^k messages."""

    best: Optional[BitVector] = None
    best_distance = len(received) + 1
    for bits in product((0, 1), repeat=code.k):
        candidate = code.encode(BitVector.from_bits(bits))
        distance = (candidate ^ received).weight()
        if distance < best_distance:
            best, best_distance = candidate, distance
    assert best is not None
    return best


class InvariantCheck:
    """Base class for verification checks."""

    id: str = "base"
    name: str = "Unnamed Check"
    description: str = "No description provided."

    def run(self) -> CheckResult:
        raise NotImplementedError

    def result(self, ok: bool, summary: str, **details: Any) -> CheckResult:
        status = CheckStatus.OK if ok else CheckStatus.ERROR
        return CheckResult(self.id, self.name, status, summary, details)

    def to_metadata(self) -> Dict[str, str]:
        return {"id": self.id, "name": self.name, "description": self.description}


class RankCheck(InvariantCheck):
    id = "gf2-rank"
    name = "GF(2) rank"
    description = "Gauss-Jordan rank equals brute-force span dimension on small random matrices."

    def __init__(self, seed: int = 0, draws: int = 300) -> None:
        self.seed, self.draws = seed, draws

    def run(self) -> CheckResult:
        rng = np.random.default_rng(self.seed)
        mismatches = []
        for _ in range(self.draws):
            rows, cols = int(rng.integers(1, 7)), int(rng.integers(1, 9))
            matrix = SparseGf2Matrix.from_dense(rng.integers(0, 2, size=(rows, cols)))
            reduced = gauss_jordan(matrix)
            if reduced.rank != brute_force_rank(matrix) or gauss_jordan(reduced.reduced).reduced != reduced.reduced:
                mismatches.append(matrix.to_dense().tolist())
        return self.result(not mismatches, f"{self.draws - len(mismatches)}/{self.draws} matrices agree", mismatches=mismatches[:3])


class EncodeDecodeCheck(InvariantCheck):
    id = "encode-noiseless"
    name = "Noiseless encode/decode"
    description = "Encoded words satisfy H and decode unchanged at iteration 0."

    def __init__(self, seed: int = 0, messages: int = 200, n: int = 100) -> None:
        self.seed, self.messages, self.n = seed, messages, n

    def run(self) -> CheckResult:
        code = construct_regular(self.n, 3, 6, self.seed)
        rng = np.random.default_rng(self.seed)
        failures = 0
        for _ in range(self.messages):
            codeword = code.encode(BitVector.from_bits(rng.integers(0, 2, size=code.k)))
            decoded = sum_product_decode(code.graph, bsc_llr(codeword, 0.05), 20)
            if not code.is_codeword(codeword) or decoded.hard_decision != codeword or decoded.iterations_used != 0:
                failures += 1
        return self.result(failures == 0, f"{self.messages - failures}/{self.messages} messages round-trip")


class MlOracleCheck(InvariantCheck):
    id = "ml-oracle"
    name = "Maximum-likelihood oracle"
    description = "Sum-product matches exhaustive ML for every word within one flip of a codeword."

    def run(self) -> CheckResult:
        code = tree_code()
        disagreements = []
        total = 0
        for bits in product((0, 1), repeat=code.k):
            codeword = code.encode(BitVector.from_bits(bits))
            base = codeword.to_array()
            for flip in [None, *range(code.n)]:
                word = base.copy()
                if flip is not None:
                    word[flip] ^= 1
                received = BitVector.from_bits(word)
                decoded = sum_product_decode(code.graph, bsc_llr(received, 0.05), 20)
                total += 1
                if decoded.hard_decision != ml_decode(code, received):
                    disagreements.append(str(received))
        return self.result(not disagreements, f"{total - len(disagreements)}/{total} received words agree", words=disagreements)


class ClosedFormCheck(InvariantCheck):
    id = "closed-forms"
    name = "Rate-region closed forms"
    description = "Capacities and region bounds at 0.05 on every link match reference values."

    def run(self) -> CheckResult:
        p = Fraction(1, 20)
        exact_p_prime = ((1 - p) ** 2 + p * p) * p + 2 * p * (1 - p) * (1 - p)
        exact_p_double = exact_p_prime * (1 - p) + (1 - exact_p_prime) * p

        def capacity(q: Fraction) -> float:
            x = float(q)
            return 1.0 + x * math.log2(x) + (1.0 - x) * math.log2(1.0 - x)

        lp = LinkParams.uniform(0.05)
        joint = region_joint(lp)
        computed = {
            "c14": bsc_capacity(lp.p14),
            "p_prime": p_prime(lp),
            "c_prime": bsc_capacity(p_prime(lp)),
            "p_double_prime": p_double_prime(lp),
            "c_double_prime": bsc_capacity(p_double_prime(lp)),
            "joint_ra": joint.ra_max,
            "joint_rb": joint.rb_max,
            "joint_sum": joint.sum_max,
        }
        independent = {
            "c14": capacity(p),
            "p_prime": float(exact_p_prime),
            "c_prime": capacity(exact_p_prime),
            "p_double_prime": float(exact_p_double),
            "c_double_prime": capacity(exact_p_double),
        }
        independent["joint_ra"] = independent["c14"] + independent["c_prime"] - independent["c_double_prime"]
        independent["joint_rb"] = independent["c_prime"]
        independent["joint_sum"] = independent["c14"] + independent["c_prime"]
        off = {
            key: value
            for key, value in computed.items()
            if abs(value - REFERENCE_VALUES[key]) > REFERENCE_TOLERANCE or abs(value - independent[key]) > 1e-12
        }
        return self.result(not off, f"{len(computed) - len(off)}/{len(computed)} quantities match", computed=computed, off=off)


class SubsetChainCheck(InvariantCheck):
    id = "subset-chain"
    name = "Region inclusion chain"
    description = "nc inside serial inside joint, and the p'' - p' product identity, on random link parameters."

    def __init__(self, seed: int = 0, draws: int = 10_000) -> None:
        self.seed, self.draws = seed, draws

    def run(self) -> CheckResult:
        rng = np.random.default_rng(self.seed)
        failures: List[str] = []
        for values in rng.uniform(0.0, 0.5, size=(self.draws, 4)):
            p13, p23, p34, p14 = (float(v) for v in values)
            report = verify_subset_chain(LinkParams(p13=p13, p23=p23, p34=p34, p14=p14))
            failures.extend(report.failures)
        return self.result(not failures, f"{self.draws} parameter draws, {len(failures)} failures", failures=failures[:5])


class MatrixAlgebraCheck(InvariantCheck):
    id = "matrix-algebra"
    name = "Joint and extended matrix algebra"
    description = "Codeword pairs satisfy H_joint and H_extn; H_extn is 4-cycle free; nnz accounting holds."

    def __init__(self, seed: int = 0, pairs: int = 10, words: int = 1000, n: int = 100) -> None:
        self.seed, self.pairs, self.words, self.n = seed, pairs, words, n

    def run(self) -> CheckResult:
        rng = np.random.default_rng(self.seed)
        problems: List[str] = []
        for index in range(self.pairs):
            code_a = construct_regular(self.n, 3, 6, self.seed + 2 * index + 1)
            code_b = construct_regular(self.n, 3, 6, self.seed + 2 * index + 2)
            h_joint = build_h_joint(code_a.parity_check, code_b.parity_check)
            h_extn = build_h_extn(code_a.parity_check, code_b.parity_check)
            if count_4cycles(h_extn):
                problems.append(f"pair {index}: H_extn has 4-cycles")
            counts = {name: nnz_accounting(name, code_a, code_b) for name in ("independent", "joint", "extended")}
            if counts["independent"] != 6 * self.n or counts["extended"] != 9 * self.n:
                problems.append(f"pair {index}: nnz {counts}")
            if not 6 * self.n <= counts["joint"] <= 12 * self.n:
                problems.append(f"pair {index}: joint nnz {counts['joint']}")
            for _ in range(self.words):
                c_a = code_a.encode(BitVector.from_bits(rng.integers(0, 2, size=code_a.k)))
                c_b = code_b.encode(BitVector.from_bits(rng.integers(0, 2, size=code_b.k)))
                c_ab = c_a ^ c_b
                if mat_vec_mul(h_joint, BitVector.concat(c_a, c_ab)).any():
                    problems.append(f"pair {index}: H_joint syndrome")
                if mat_vec_mul(h_extn, BitVector.concat(c_a, c_b, c_ab)).any():
                    problems.append(f"pair {index}: H_extn syndrome")
        return self.result(not problems, f"{self.pairs} code pairs x {self.words} words, {len(problems)} problems", problems=problems[:5])


class ChannelAgreementCheck(InvariantCheck):
    id = "channel-agreement"
    name = "Simulated vs analytic XOR-path crossover"
    description = "Flip rate of Y_34 against X_13 xor X_23 on the four-node network stays within 3 sigma of p'."

    def __init__(self, seed: int = 0, trials: int = 1000, length: int = 100, p: float = 0.05) -> None:
        self.seed, self.trials, self.length, self.p = seed, trials, length, p

    def run(self) -> CheckResult:
        topology = fig1_network(self.p, self.p, self.p, self.p)
        rng = SeededRng(self.seed)
        flips = 0
        for trial in range(self.trials):
            inputs = {
                label: BitVector.from_bits(rng.stream(f"message:{label}", trial).integers(0, 2, size=self.length))
                for label in ("A", "B")
            }
            transcript = simulate(topology, inputs, rng, trial)
            x_prime = transcript.sent("1->3") ^ transcript.sent("2->3")
            flips += (transcript.received("3->4") ^ x_prime).weight()
        bits = self.trials * self.length
        expected = p_prime(LinkParams.uniform(self.p))
        sigma = math.sqrt(expected * (1 - expected) / bits)
        rate = flips / bits
        ok = abs(rate - expected) <= 3 * sigma
        return self.result(ok, f"flip rate {rate:.5f} vs p' {expected:.5f} (3 sigma = {3 * sigma:.5f})", rate=rate)


class DegenerateIdentityCheck(InvariantCheck):
    id = "degenerate-identity"
    name = "Shared-code joint decoding"
    description = "With H_A == H_B, joint decoding equals separate decodes of the direct and XOR words."

    def __init__(self, seed: int = 0, frames: int = 1000, n: int = 100, p: float = 0.03) -> None:
        self.seed, self.frames, self.n, self.p = seed, frames, n, p

    def run(self) -> CheckResult:
        code = construct_regular(self.n, 3, 6, self.seed + 1)
        topology = butterfly(self.p, 3.0)
        layout = resolve_taps(topology, 6)
        rng = SeededRng(self.seed)
        max_iters = get_settings().max_iters
        mismatched = 0
        for trial in range(self.frames):
            u = {label: BitVector.from_bits(rng.stream(f"message:{label}", trial).integers(0, 2, size=code.k)) for label in "AB"}
            transcript = simulate(topology, {label: code.encode(word) for label, word in u.items()}, rng, trial)
            obs = layout.observe(transcript)
            joint = decode_joint(code, code, obs, max_iters, early_stop=False)
            direct = sum_product_decode(code.graph, bsc_llr(obs.y_direct, obs.p_direct), max_iters, early_stop=False)
            combined = sum_product_decode(code.graph, bsc_llr(obs.y_combined, obs.p_combined), max_iters, early_stop=False)
            if joint.c_hat_a != direct.hard_decision or joint.c_hat_b != direct.hard_decision ^ combined.hard_decision:
                mismatched += 1
        return self.result(mismatched == 0, f"{self.frames - mismatched}/{self.frames} frames bit-identical")


@dataclass(frozen=True, slots=True)
class OrderingClaim:
    """``worse`` has at least (or, if strict, significantly more) errors than ``better`` on one stream."""

    worse: str
    better: str
    stream: str
    strict: bool = False
    min_serial_ber_a: float = 0.0


@dataclass(slots=True)
class _PairedErrors:
    errors: Dict[str, Dict[str, List[int]]] = field(default_factory=dict)

    def add(self, strategy: str, stream: str, value: int) -> None:
        self.errors.setdefault(strategy, {}).setdefault(stream, []).append(value)


def sign_test(worse: Sequence[int], better: Sequence[int], strict: bool, alpha: float = 0.01) -> tuple[bool, float]:
    """Paired one-sided sign test over frames where the two error counts differ."""

    above = sum(w > b for w, b in zip(worse, better))
    below = sum(w < b for w, b in zip(worse, better))
    trials = above + below
    if trials == 0:
        return (not strict), 1.0
    if strict:
        pvalue = binomtest(above, trials, 0.5, alternative="greater").pvalue
        return pvalue < alpha, float(pvalue)
    pvalue = binomtest(below, trials, 0.5, alternative="greater").pvalue
    return pvalue >= alpha, float(pvalue)


class BerOrderingCheck(InvariantCheck):
    """Paired-frame orderings between strategies on the butterfly network."""

    def __init__(
        self,
        check_id: str,
        mult_26: float,
        claims: Sequence[OrderingClaim],
        *,
        p_list: Sequence[float] = (0.01, 0.02, 0.03),
        frames: int = 10_000,
        n: int = 500,
        seed: int = 0,
    ) -> None:
        self.id = check_id
        self.name = f"BER ordering at direct-link multiplier {mult_26:g}"
        self.description = "Paired sign tests between strategies over simulated butterfly frames."
        self.mult_26, self.claims, self.p_list = mult_26, list(claims), list(p_list)
        self.frames, self.n, self.seed = frames, n, seed

    def run(self) -> CheckResult:
        settings = get_settings()
        codes = CodePair(construct_regular(self.n, 3, 6, self.seed + 1), construct_regular(self.n, 3, 6, self.seed + 2))
        registry = default_registry()
        strategies = registry.select(sorted({name for claim in self.claims for name in (claim.worse, claim.better)} | {"serial"}))
        registry.prepare_all(codes, [strategy.id for strategy in strategies])
        rng = SeededRng(self.seed)
        outcomes: List[str] = []
        ok = True
        for p in self.p_list:
            topology = butterfly(p, self.mult_26)
            layout = resolve_taps(topology, 6, probability_floor=settings.probability_floor)
            simulator = FrameSimulator(codes, topology, layout, rng, settings.max_iters)
            paired = _PairedErrors()
            for frame in simulate_frames(simulator, strategies, range(self.frames)):
                for strategy_id, tally in frame.tallies.items():
                    paired.add(strategy_id, "a", tally.bit_errors_a)
                    paired.add(strategy_id, "b", tally.bit_errors_b)
            serial_ber_a = sum(paired.errors["serial"]["a"]) / (self.frames * codes.code_a.k)
            saturated = all(all(paired.errors[strategy.id]["a"]) for strategy in strategies)
            if saturated:
                logger.warning("Ordering check %s: every strategy fails on every frame at p=%g", self.id, p)
            for claim in self.claims:
                label = f"p={p:g} {claim.stream.upper()}: {claim.worse} {'>' if claim.strict else '>='} {claim.better}"
                if saturated:
                    outcomes.append(f"{label}: skipped (every strategy fails on A)")
                    continue
                if serial_ber_a < claim.min_serial_ber_a:
                    outcomes.append(f"{label}: skipped (serial BER_A {serial_ber_a:.2e})")
                    continue
                holds, pvalue = sign_test(
                    paired.errors[claim.worse][claim.stream], paired.errors[claim.better][claim.stream], claim.strict
                )
                ok &= holds
                outcomes.append(f"{label}: {'ok' if holds else 'FAILED'} (p-value {pvalue:.3g})")
            logger.info("Ordering check %s finished p=%g", self.id, p)
        skipped = sum("skipped" in outcome for outcome in outcomes)
        return self.result(
            ok, f"{len(outcomes) - skipped} paired comparisons, {skipped} skipped", outcomes=outcomes
        )


def ordering_checks(frames: int = 10_000, seed: int = 0) -> List[InvariantCheck]:
    direct_3p_claims = [
        OrderingClaim("independent", "serial", "b", strict=True),
        OrderingClaim("serial", "extended", "b"),
        OrderingClaim("serial", "extended", "a"),
        OrderingClaim("independent", "serial", "a"),
        OrderingClaim("serial", "independent", "a"),
    ]
    direct_12p_claims = [
        OrderingClaim("serial", "joint", "a", strict=True, min_serial_ber_a=1e-3),
        OrderingClaim("serial", "extended", "a", strict=True, min_serial_ber_a=1e-3),
    ]
    return [
        BerOrderingCheck("ber-ordering-3p", 3.0, direct_3p_claims, frames=frames, seed=seed),
        BerOrderingCheck("ber-ordering-12p", 12.0, direct_12p_claims, frames=frames, seed=seed),
    ]


def default_checks(seed: int = 0, *, include_ber: bool = False, ber_frames: int = 10_000) -> List[InvariantCheck]:
    checks: List[InvariantCheck] = [
        RankCheck(seed),
        EncodeDecodeCheck(seed),
        MlOracleCheck(),
        ClosedFormCheck(),
        SubsetChainCheck(seed),
        MatrixAlgebraCheck(seed),
        ChannelAgreementCheck(seed),
        DegenerateIdentityCheck(seed),
    ]
    if include_ber:
        checks.extend(ordering_checks(ber_frames, seed))
    return checks


@dataclass
class CheckRegistry:
    """Ordered collection of verification checks."""

    checks: Dict[str, InvariantCheck] = field(default_factory=dict)

    def register(self, *checks: InvariantCheck) -> None:
        for check in checks:
            if check.id in self.checks:
                logger.warning("Replacing existing check registration: %s", check.id)
            self.checks[check.id] = check

    def extend(self, checks: Iterable[InvariantCheck]) -> None:
        for check in checks:
            self.register(check)

    def list_checks(self) -> List[dict]:
        return [check.to_metadata() for check in self.checks.values()]

    def get_check(self, check_id: str) -> InvariantCheck:
        try:
            return self.checks[check_id]
        except KeyError as exc:
            logger.error("Requested unknown check: %s", check_id)
            raise KeyError(f"No check registered with id '{check_id}'") from exc

    def run_check(self, check_id: str) -> CheckResult:
        check = self.get_check(check_id)
        logger.info("Running check: %s", check.id)
        return _guarded(check)

    def run_all(self) -> List[CheckResult]:
        logger.info("Running verification suite (%d checks)", len(self.checks))
        results = [_guarded(check) for check in self.checks.values()]
        logger.info("Completed verification suite")
        return results


def _guarded(check: InvariantCheck) -> CheckResult:
    try:
        result = check.run()
    except Exception as exc:  # noqa: BLE001 - a crashing check is reported, not raised
        logger.exception("Check %s raised", check.id)
        return CheckResult(check.id, check.name, CheckStatus.ERROR, f"raised {type(exc).__name__}: {exc}")
    logger.info("Check '%s' completed with status %s", result.id, result.status.value)
    return result
