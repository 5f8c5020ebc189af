"""Closed-form achievable rate regions for the four-node XOR relay network.

Node 1 sends A over links 1→3 and 1→4, node 2 sends B over 2→3, node 3
forwards the XOR over 3→4 and node 4 decodes. With ``p′`` the crossover of
the XOR path and ``p″ = p′ ⊛ p14`` the crossover seen by B after
subtracting the raw direct word, the three decoders achieve::

    network-then-channel   R_A ≤ C14             R_B ≤ C″
    serial                 R_A ≤ C14             R_B ≤ C′
    joint                  R_A ≤ C14 + C′ − C″   R_B ≤ C′   R_A + R_B ≤ C14 + C′
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field
from scipy.special import xlogy

from .errors import ParameterError
from .logger import get_logger

logger = get_logger(__name__)

TOLERANCE = 1e-12


class LinkParams(BaseModel):
    """Crossover probabilities of the four links."""

    model_config = ConfigDict(frozen=True)

    p13: float = Field(ge=0.0, le=0.5)
    p23: float = Field(ge=0.0, le=0.5)
    p34: float = Field(ge=0.0, le=0.5)
    p14: float = Field(ge=0.0, le=0.5)

    @classmethod
    def uniform(cls, p: float) -> "LinkParams":
        return cls(p13=p, p23=p, p34=p, p14=p)


@dataclass(frozen=True, slots=True)
class RateRegion:
    """``{R_A ≤ ra_max, R_B ≤ rb_max, R_A + R_B ≤ sum_max}``; no sum bound when ``sum_max`` is None."""

    ra_max: float
    rb_max: float
    sum_max: Optional[float] = None

    def __post_init__(self) -> None:
        for name in ("ra_max", "rb_max"):
            value = getattr(self, name)
            if not -TOLERANCE <= value <= 1.0 + TOLERANCE:
                raise ParameterError(f"{name} must lie in [0, 1], got {value}")
        if self.sum_max is not None:
            low = max(self.ra_max, self.rb_max) - TOLERANCE
            high = self.ra_max + self.rb_max + TOLERANCE
            if not low <= self.sum_max <= high:
                raise ParameterError(f"sum_max {self.sum_max} outside [{low}, {high}]")

    @property
    def is_rectangle(self) -> bool:
        return self.sum_max is None or self.sum_max >= self.ra_max + self.rb_max

    def vertices(self) -> list[tuple[float, float]]:
        """Corner points, counter-clockwise from the origin."""

        if self.is_rectangle:
            return [(0.0, 0.0), (self.ra_max, 0.0), (self.ra_max, self.rb_max), (0.0, self.rb_max)]
        assert self.sum_max is not None
        return [
            (0.0, 0.0),
            (self.ra_max, 0.0),
            (self.ra_max, self.sum_max - self.ra_max),
            (self.sum_max - self.rb_max, self.rb_max),
            (0.0, self.rb_max),
        ]


def binary_entropy(p: float) -> float:
    """Base-2 entropy of a Bernoulli(p) variable, 0 at both ends."""

    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"probability must lie in [0, 1], got {p}")
    return float(-(xlogy(p, p) + xlogy(1.0 - p, 1.0 - p)) / math.log(2.0))


def bsc_capacity(p: float) -> float:
    if not 0.0 <= p <= 0.5:
        raise ParameterError(f"crossover must lie in [0, 0.5], got {p}")
    return max(0.0, 1.0 - binary_entropy(p))


def p_prime(lp: LinkParams) -> float:
    """Crossover between ``X_13 ⊕ X_23`` and ``Y_34``."""

    p13, p23, p34 = lp.p13, lp.p23, lp.p34
    return ((1 - p13) * (1 - p23) + p13 * p23) * p34 + (p13 * (1 - p23) + (1 - p13) * p23) * (1 - p34)


def p_double_prime(lp: LinkParams) -> float:
    """Crossover between ``X_23`` and ``Y_34 ⊕ Y_14``: odd numbers of flips among the four links."""

    p13, p23, p34, p14 = lp.p13, lp.p23, lp.p34, lp.p14
    q13, q23, q34, q14 = 1 - p13, 1 - p23, 1 - p34, 1 - p14
    return (
        p13 * q23 * q34 * q14
        + q13 * p23 * q34 * q14
        + q13 * q23 * p34 * q14
        + q13 * q23 * q34 * p14
        + p13 * p23 * p34 * q14
        + p13 * p23 * q34 * p14
        + p13 * q23 * p34 * p14
        + q13 * p23 * p34 * p14
    )


def region_nc(lp: LinkParams) -> RateRegion:
    """Network-then-channel decoding."""

    return RateRegion(bsc_capacity(lp.p14), bsc_capacity(p_double_prime(lp)))


def region_serial(lp: LinkParams) -> RateRegion:
    return RateRegion(bsc_capacity(lp.p14), bsc_capacity(p_prime(lp)))


def region_joint(lp: LinkParams) -> RateRegion:
    c14 = bsc_capacity(lp.p14)
    c_prime = bsc_capacity(p_prime(lp))
    c_double = bsc_capacity(p_double_prime(lp))
    return RateRegion(c14 + c_prime - c_double, c_prime, c14 + c_prime)


REGION_BUILDERS = {"nc": region_nc, "serial": region_serial, "joint": region_joint}


def region_contains(region: RateRegion, ra: float, rb: float, *, tol: float = 0.0) -> bool:
    if ra < 0 or rb < 0:
        raise ParameterError(f"rates must be non-negative, got ({ra}, {rb})")
    if ra > region.ra_max + tol or rb > region.rb_max + tol:
        return False
    return region.sum_max is None or ra + rb <= region.sum_max + tol


def region_boundary(region: RateRegion, samples: int) -> list[tuple[float, float]]:
    """Pareto frontier at ``samples`` evenly spaced R_B values from 0 to ``rb_max``.

    The last point is the frontier corner at ``rb_max``; closing the outline
    at ``(0, rb_max)`` is left to the plotting side.
    """

    if samples < 2:
        raise ParameterError(f"need at least two boundary samples, got {samples}")
    points: list[tuple[float, float]] = []
    for index in range(samples):
        rb = region.rb_max * index / (samples - 1)
        ra = region.ra_max
        if region.sum_max is not None:
            ra = min(ra, region.sum_max - rb)
        points.append((max(0.0, ra), rb))
    return points


@dataclass(slots=True)
class SubsetChainReport:
    """Outcome of checking ``nc ⊆ serial ⊆ joint`` for one parameter set."""

    params: LinkParams
    p_prime: float
    p_double_prime: float
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def difference(self) -> float:
        return self.p_double_prime - self.p_prime


def verify_subset_chain(lp: LinkParams, *, tol: float = TOLERANCE) -> SubsetChainReport:
    """Constraint-wise dominance checks plus the sign identity behind them.

    ``p″ − p′ = p14 (1 − 2 p13)(1 − 2 p23)(1 − 2 p34)``, which is never negative
    on ``[0, 0.5]``, so ``C″ ≤ C′`` and every inclusion follows.
    """

    pp, pdp = p_prime(lp), p_double_prime(lp)
    report = SubsetChainReport(lp, pp, pdp)
    expected = lp.p14 * (1 - 2 * lp.p13) * (1 - 2 * lp.p23) * (1 - 2 * lp.p34)
    if report.difference < -tol:
        report.failures.append(f"p'' - p' = {report.difference!r} is negative")
    if abs(report.difference - expected) > tol:
        report.failures.append(f"p'' - p' = {report.difference!r} differs from product form {expected!r}")

    nc, serial, joint = region_nc(lp), region_serial(lp), region_joint(lp)
    if nc.ra_max > serial.ra_max + tol or nc.rb_max > serial.rb_max + tol:
        report.failures.append(f"nc {nc} not inside serial {serial}")
    for ra, rb in serial.vertices():
        if not region_contains(joint, ra, rb, tol=tol):
            report.failures.append(f"serial vertex ({ra!r}, {rb!r}) outside joint {joint}")
    if joint.rb_max != serial.rb_max:
        report.failures.append(f"joint rb_max {joint.rb_max!r} != serial rb_max {serial.rb_max!r}")
    if report.failures:
        logger.warning("Subset chain failed for %s: %s", lp, "; ".join(report.failures))
    return report
