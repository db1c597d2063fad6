import csv
import json
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional

from src.exceptions import ValidationError
from src.models.schemas import GoodnessOfFit, RunConfig, VerificationReport
from src.series.engine import TruncationPolicy

logger = logging.getLogger(__name__)

CSV_HEADER = ("check", "parameter", "analytic", "series", "empirical")
ROUNDING_SLACK = 1e-12


@dataclass
class CsvRow:
    check: str
    parameter: float
    analytic: Optional[float] = None
    series: Optional[float] = None
    empirical: Optional[float] = None


@dataclass
class ProofRunResult:
    seed: int = 0
    reports: List[VerificationReport] = field(default_factory=list)
    rows: List[CsvRow] = field(default_factory=list)
    _mark: float = field(default_factory=time.perf_counter, repr=False)

    def restart_clock(self) -> None:
        self._mark = time.perf_counter()

    def insert_report(self, check_name: str, anchor: str, computed: float, reference: float,
                      tolerance: float, n: int = 0) -> VerificationReport:
        """Record one comparison; runtime counts from the previous report.

        Args:
            check_name: Name of the check
            anchor: Identity or claim being verified
            computed: Value produced by the package
            reference: Exact or analytic value
            tolerance: Largest accepted absolute error
            n: Samples or terms behind ``computed``

        Returns:
            The stored VerificationReport
        """
        now = time.perf_counter()
        error = abs(computed - reference)
        if not math.isfinite(error):
            error = math.inf
        relative = error / abs(reference) if reference != 0 else error
        report = VerificationReport(
            check_name=check_name,
            anchor=anchor,
            computed_value=computed,
            reference_value=reference,
            absolute_error=error,
            relative_error=relative,
            tolerance=tolerance,
            passed=error <= tolerance,
            runtime_ms=(now - self._mark) * 1000.0,
            seed=self.seed,
            n=n,
        )
        self._mark = now
        self.reports.append(report)
        level = logging.INFO if report.passed else logging.WARNING
        logger.log(level, f"{check_name}: computed {computed!r}, reference {reference!r}, error {error:.3e} (tol {tolerance:.3e})")
        return report

    def insert_goodness(self, check_name: str, anchor: str, result: GoodnessOfFit, tolerance: float) -> VerificationReport:
        """Record a goodness-of-fit test as computed = p, reference = 1.

        A p-value threshold t becomes the tolerance 1 - t, so p >= t passes.
        """
        return self.insert_report(check_name, anchor, result.p_value, 1.0, tolerance, n=result.n)

    def insert_row(self, check: str, parameter: float, analytic: Optional[float] = None,
                   series: Optional[float] = None, empirical: Optional[float] = None) -> None:
        self.rows.append(CsvRow(check, parameter, analytic, series, empirical))

    def extend(self, other: "ProofRunResult") -> None:
        self.reports.extend(other.reports)
        self.rows.extend(other.rows)

    def get_failed_reports(self) -> List[VerificationReport]:
        """Return all reports whose error exceeds their tolerance"""
        return [r for r in self.reports if not r.passed]

    def is_valid(self) -> bool:
        """Check if every report passed"""
        return len(self.get_failed_reports()) == 0

    def write_json(self, path: Path) -> None:
        records = [r.model_dump(mode="json", by_alias=True) for r in self.reports]
        Path(path).write_text(json.dumps(records, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        logger.info(f"Wrote {len(records)} reports to {path}")

    def write_csv(self, path: Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(CSV_HEADER)
            for row in self.rows:
                writer.writerow([row.check, repr(float(row.parameter))] + [
                    "" if v is None else repr(float(v)) for v in (row.analytic, row.series, row.empirical)
                ])
        logger.info(f"Wrote {len(self.rows)} plot rows to {path}")


def truncation_policy(cfg: RunConfig) -> TruncationPolicy:
    """Fixed N when ``--trunc`` is given, otherwise the smallest N whose tail bound reaches ``eps``."""
    if cfg.trunc is not None:
        return TruncationPolicy.fixed(cfg.trunc)
    return TruncationPolicy.tail_bound(cfg.eps)


ProofFunction = Callable[[RunConfig, ProofRunResult], None]


class ProofRunner:
    def __init__(self):
        # proof modules import this one
        from src.proofs import basel, disk_exit, greens, strip_exit, strip_exit_time

        self.commands: Dict[str, ProofFunction] = {
            "proof1": strip_exit_time.run,
            "proof2": disk_exit.run,
            "proof3": strip_exit.run,
            "proof4": greens.run,
            "estimate-basel": basel.run,
        }

    def run(self, command: str, cfg: RunConfig) -> ProofRunResult:
        """Run one command, or every proof for ``all``, and collect its reports.

        Args:
            command: One of proof1..proof4, all, estimate-basel
            cfg: Run configuration shared by all checks

        Returns:
            ProofRunResult with the reports in execution order
        """
        result = ProofRunResult(seed=cfg.seed)
        if command != "all" and command not in self.commands:
            raise ValidationError(f"Unknown command {command!r}", field="command")
        names = ["proof1", "proof2", "proof3", "proof4"] if command == "all" else [command]
        for name in names:
            logger.info(f"Running {name}")
            result.restart_clock()
            self.commands[name](cfg, result)
        if result.is_valid():
            logger.info(f"{command}: all {len(result.reports)} checks passed")
        else:
            logger.info(f"{command}: {len(result.get_failed_reports())} of {len(result.reports)} checks failed")
        return result
