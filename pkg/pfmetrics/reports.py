"""
Bound Reports - Auditable Records of Checked Inequalities

A BoundReport captures both sides of one inequality after constants are
applied, the constant itself, the slack and the pass decision. Reports
serialize to CSV and JSON with a stable schema.
"""

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    'bound_name', 'N', 'pair_id', 'lhs', 'rhs', 'constant',
    'slack', 'converged', 'pass', 'note',
]


@dataclass(frozen=True)
class BoundReport:
    """One checked inequality lhs <= rhs."""

    bound_name: str
    n: int
    pair_id: str
    lhs: float
    rhs: float
    constant: float
    slack: float
    quadrature_converged: bool
    passed: bool
    allowance: float = 0.0
    skipped: bool = False
    note: str = ''
    oversample: Optional[int] = None

    @classmethod
    def evaluate(
        cls,
        bound_name: str,
        n: int,
        pair_id: str,
        lhs: float,
        rhs: float,
        constant: float,
        quadrature_converged: bool = True,
        tolerance: float = 1e-9,
        allowance: float = 0.0,
        oversample: Optional[int] = None,
        note: str = '',
    ) -> 'BoundReport':
        """Build a report, deciding pass as slack >= -(tolerance*max(1, rhs) + allowance)."""
        slack = rhs - lhs
        tol = tolerance * max(1.0, abs(rhs)) + allowance
        return cls(
            bound_name=bound_name,
            n=n,
            pair_id=pair_id,
            lhs=float(lhs),
            rhs=float(rhs),
            constant=float(constant),
            slack=float(slack),
            quadrature_converged=quadrature_converged,
            passed=bool(slack >= -tol),
            allowance=allowance,
            oversample=oversample,
            note=note,
        )

    @classmethod
    def skip(cls, bound_name: str, n: int, pair_id: str, constant: float, note: str) -> 'BoundReport':
        """A check that could not be asserted; never counts as a failure."""
        return cls(
            bound_name=bound_name,
            n=n,
            pair_id=pair_id,
            lhs=math.nan,
            rhs=math.nan,
            constant=float(constant),
            slack=math.nan,
            quadrature_converged=False,
            passed=True,
            skipped=True,
            note=note,
        )

    @property
    def failed(self) -> bool:
        return not self.skipped and not self.passed

    def to_row(self) -> Dict[str, Any]:
        return {
            'bound_name': self.bound_name,
            'N': self.n,
            'pair_id': self.pair_id,
            'lhs': repr(self.lhs),
            'rhs': repr(self.rhs),
            'constant': repr(self.constant),
            'slack': repr(self.slack),
            'converged': str(self.quadrature_converged).lower(),
            'pass': 'skip' if self.skipped else str(self.passed).lower(),
            'note': self.note,
        }

    def to_dict(self) -> Dict[str, Any]:
        def _num(x: float) -> Optional[float]:
            return None if math.isnan(x) else x

        return {
            'bound_name': self.bound_name,
            'N': self.n,
            'pair_id': self.pair_id,
            'lhs': _num(self.lhs),
            'rhs': _num(self.rhs),
            'constant': self.constant,
            'slack': _num(self.slack),
            'converged': self.quadrature_converged,
            'pass': self.passed,
            'skipped': self.skipped,
            'allowance': self.allowance,
            'oversample': self.oversample,
            'note': self.note,
        }


@dataclass(frozen=True)
class IdentityCheck:
    """Both sides of an identity and their absolute discrepancy."""

    name: str
    lhs: float
    rhs: float
    discrepancy: float
    tolerance: float
    details: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.discrepancy <= self.tolerance


def reports_to_csv(reports: Iterable[BoundReport]) -> str:
    """Render reports as CSV text with a header row."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator='\n')
    writer.writeheader()
    for report in reports:
        writer.writerow(report.to_row())
    return buffer.getvalue()


def reports_to_json(reports: Iterable[BoundReport], summary: Optional[Dict[str, Any]] = None) -> str:
    payload: Dict[str, Any] = {'reports': [r.to_dict() for r in reports]}
    if summary is not None:
        payload['summary'] = summary
    return json.dumps(payload, indent=2, sort_keys=True)


def write_reports(
    reports: List[BoundReport],
    path: Union[str, Path],
    fmt: str = 'csv',
    summary: Optional[Dict[str, Any]] = None,
) -> Path:
    """
    Write reports to disk.

    Args:
        reports: Reports in the order they should appear
        path: Output file
        fmt: 'csv' or 'json'
        summary: Optional aggregate block (JSON only)

    Returns:
        The written path
    """
    path = Path(path)
    text = reports_to_json(reports, summary) if fmt == 'json' else reports_to_csv(reports)
    path.write_text(text, encoding='utf-8')
    logger.info(f"Wrote {len(reports)} reports to {path}")
    return path


__all__ = [
    'BoundReport',
    'IdentityCheck',
    'CSV_COLUMNS',
    'reports_to_csv',
    'reports_to_json',
    'write_reports',
]
