"""Report rows and their CSV/JSON serialization.

Reports are byte-stable: identical rows serialize to identical bytes, in
both formats.  ``elapsed_ms`` is the only field expected to vary between
runs of the same configuration.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

CSV_HEADER = "scenario,D,family_size,clique_lower,cert_upper,max_witness_len,elapsed_ms"

FIELDS = tuple(CSV_HEADER.split(","))


@dataclass(frozen=True)
class ReportRow:
    scenario: str
    D: int
    family_size: int
    clique_lower: int
    cert_upper: int | str  # "none" when no certificate exists
    max_witness_len: int
    elapsed_ms: int

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in FIELDS}

    def normalized(self) -> "ReportRow":
        """The row with elapsed_ms zeroed, for run-to-run comparisons."""
        return ReportRow(self.scenario, self.D, self.family_size,
                         self.clique_lower, self.cert_upper,
                         self.max_witness_len, 0)


def emit_report(rows, format: str = "csv") -> bytes:
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(FIELDS)
        for row in rows:
            writer.writerow([getattr(row, name) for name in FIELDS])
        return buf.getvalue().encode()
    if format == "json":
        return (json.dumps([row.as_dict() for row in rows], indent=2) + "\n").encode()
    raise ValueError(f"unknown report format {format!r} (expected csv or json)")
