#!/usr/bin/env python3
"""
Verification reports and scan tables.

Architecture:
- Record: one comparison of a computed value against an oracle
- SuiteReport / Report: records grouped by suite, sorted by check name
- ScanTable: parameter sweeps written as CSV with a header line
- OutputFormatter: json / csv / default text rendering for the CLI
- write_report / write_table: files under the output directory

Report JSON never contains wall times; those go to a separate timings file so
that identical scenarios produce byte-identical reports.
"""

import csv
import json
import logging
import math
from dataclasses import dataclass, field
from io import StringIO
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

_logger = logging.getLogger(__name__)


def _clean(x: float) -> Optional[float]:
    x = float(x)
    return x if math.isfinite(x) else None


# =============================================================================
# RECORDS
# =============================================================================

@dataclass
class Record:
    """One check: passes when |value - oracle| < tolerance and no error occurred"""

    name: str
    value: float
    oracle: float
    tolerance: float
    seconds: float = 0.0
    error: Optional[str] = None

    @property
    def deviation(self) -> float:
        return abs(float(self.value) - float(self.oracle))

    @property
    def passed(self) -> bool:
        if self.error is not None:
            return False
        return math.isfinite(self.deviation) and self.deviation < self.tolerance

    @classmethod
    def failure(cls, name: str, error: Exception, tolerance: float, seconds: float = 0.0) -> "Record":
        return cls(name, math.nan, math.nan, tolerance, seconds, f"{type(error).__name__}: {error}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "value": _clean(self.value),
            "oracle": _clean(self.oracle),
            "tolerance": self.tolerance,
            "passed": self.passed,
            "error": self.error,
        }


@dataclass
class SuiteReport:
    name: str
    records: List[Record] = field(default_factory=list)
    skipped: List[str] = field(default_factory=list)

    def add(self, record: Record) -> Record:
        self.records.append(record)
        return record

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def sorted_records(self) -> List[Record]:
        return sorted(self.records, key=lambda r: r.name)

    def failures(self) -> List[Record]:
        return [r for r in self.sorted_records() if not r.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": len(self.records),
            "failed": len(self.failures()),
            "skipped": sorted(self.skipped),
            "records": [r.to_dict() for r in self.sorted_records()],
        }

    def timings(self) -> Dict[str, float]:
        return {r.name: round(r.seconds, 6) for r in self.sorted_records()}


@dataclass
class Report:
    """All suites of one run; passes iff every record passes"""

    seed: int
    suites: List[SuiteReport] = field(default_factory=list)
    tolerance_scale: float = 1.0

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)

    def suite(self, name: str) -> SuiteReport:
        for s in self.suites:
            if s.name == name:
                return s
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        suites = sorted(self.suites, key=lambda s: s.name)
        return {
            "seed": self.seed,
            "tolerance_scale": self.tolerance_scale,
            "passed": self.passed,
            "summary": {s.name: s.passed for s in suites},
            "suites": [s.to_dict() for s in suites],
        }

    def timings(self) -> Dict[str, Dict[str, float]]:
        return {s.name: s.timings() for s in sorted(self.suites, key=lambda s: s.name)}


# =============================================================================
# SCAN TABLES
# =============================================================================

@dataclass
class ScanTable:
    """Rows of a parameter sweep; the first column is the swept parameter"""

    name: str
    columns: Sequence[str]
    rows: List[Sequence[float]] = field(default_factory=list)

    def to_csv(self) -> str:
        output = StringIO()
        writer = csv.writer(output, lineterminator="\n")
        writer.writerow(self.columns)
        for row in sorted(self.rows, key=lambda r: r[0]):
            writer.writerow([repr(float(v)) for v in row])
        return output.getvalue()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "columns": list(self.columns),
            "rows": [[_clean(v) for v in row] for row in sorted(self.rows, key=lambda r: r[0])],
        }


# =============================================================================
# OUTPUT FORMATTING
# =============================================================================

class OutputFormatter:
    """Handle different output formats"""

    @staticmethod
    def format_result(result_data: Dict[str, Any], format_type: str) -> str:
        """Format results according to specified format"""
        if format_type == "json":
            return json.dumps(result_data, indent=2, default=str)
        elif format_type == "csv":
            return OutputFormatter._format_csv(result_data)
        else:
            return OutputFormatter._format_default(result_data)

    @staticmethod
    def _format_csv(result_data: Dict[str, Any]) -> str:
        """Format as CSV: scan tables by column, reports by record, anything else key by key"""
        output = StringIO()
        writer = csv.writer(output)

        if "columns" in result_data:
            writer.writerow(result_data["columns"])
            writer.writerows(result_data.get("rows", []))
        elif "suites" in result_data:
            writer.writerow(["suite", "check", "value", "oracle", "tolerance", "passed", "error"])
            for suite in result_data["suites"]:
                for r in suite["records"]:
                    writer.writerow([suite["name"], r["name"], r["value"], r["oracle"],
                                     r["tolerance"], r["passed"], r["error"] or ""])
        else:
            writer.writerow(["key", "value"])
            for key, value in result_data.items():
                writer.writerow([key, value])

        return output.getvalue().strip()

    @staticmethod
    def _format_default(result_data: Dict[str, Any]) -> str:
        """Format as default text output"""
        lines = []
        if "suites" in result_data:
            lines.append(f"Seed: {result_data.get('seed')}")
            for suite in result_data["suites"]:
                status = "PASS" if suite["passed"] else "FAIL"
                lines.append(f"{suite['name']}: {status} ({suite['checks']} checks, {suite['failed']} failed)")
                for r in suite["records"]:
                    if not r["passed"]:
                        detail = r["error"] or f"value {r['value']} vs oracle {r['oracle']} (tol {r['tolerance']})"
                        lines.append(f"  FAIL {r['name']}: {detail}")
                for name in suite["skipped"]:
                    lines.append(f"  skipped {name}")
            lines.append(f"Result: {'ALL CHECKS PASSED' if result_data['passed'] else 'CHECKS FAILED'}")
        elif "columns" in result_data:
            lines.append("  ".join(f"{c:>18}" for c in result_data["columns"]))
            for row in result_data["rows"]:
                lines.append("  ".join(f"{v:>18.10g}" if v is not None else f"{'nan':>18}" for v in row))
        else:
            for key, value in result_data.items():
                lines.append(f"{key}: {value}")

        return "\n".join(lines)


# =============================================================================
# FILES
# =============================================================================

def _dump(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def write_report(report: Report, directory: str, report_name: str = "report.json",
                 timings_name: str = "timings.json") -> Path:
    """Write the report, one JSON file per suite and the timings file.

    Returns:
        Path of the main report
    """
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    path = out / report_name
    path.write_text(_dump(report.to_dict()))
    for suite in report.suites:
        (out / f"suite_{suite.name}.json").write_text(_dump(suite.to_dict()))
    (out / timings_name).write_text(_dump(report.timings()))
    _logger.info("report written to %s", path)
    return path


def write_table(table: ScanTable, directory: str) -> Path:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"scan_{table.name}.csv"
    path.write_text(table.to_csv())
    _logger.info("scan table written to %s", path)
    return path
