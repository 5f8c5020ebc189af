"""CSV report of the three rate regions for one set of link parameters."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import List, TextIO

from ..logger import get_logger
from ..regions import REGION_BUILDERS, LinkParams, SubsetChainReport, region_boundary, verify_subset_chain

logger = get_logger(__name__)

REGION_CSV_HEADER = "record,strategy,index,ra,rb,sum_max,status"


def _num(value: float | None) -> str:
    return "" if value is None else repr(float(value))


@dataclass(slots=True)
class RegionReport:
    rows: List[str]
    chain: SubsetChainReport

    @property
    def passed(self) -> bool:
        return self.chain.passed

    def to_csv(self) -> str:
        return "\n".join([REGION_CSV_HEADER, *self.rows]) + "\n"

    def write(self, target: str | Path | TextIO) -> None:
        text = self.to_csv()
        if isinstance(target, (str, Path)):
            Path(target).write_text(text, encoding="utf-8", newline="\n")
        else:
            target.write(text)


def run_region_report(lp: LinkParams, samples: int = 101) -> RegionReport:
    """Boundary samples and a summary row per region, then the subset-chain verdict."""

    rows: List[str] = []
    summaries: List[str] = []
    for name, builder in REGION_BUILDERS.items():
        region = builder(lp)
        for index, (ra, rb) in enumerate(region_boundary(region, samples)):
            rows.append(f"boundary,{name},{index},{_num(ra)},{_num(rb)},,")
        summaries.append(f"summary,{name},,{_num(region.ra_max)},{_num(region.rb_max)},{_num(region.sum_max)},")
    chain = verify_subset_chain(lp)
    status = "PASS" if chain.passed else "FAIL"
    rows.extend(summaries)
    rows.append(f"check,subset_chain,,,,,{status}")
    logger.info("Region report for %s: subset chain %s", lp, status)
    return RegionReport(rows, chain)
