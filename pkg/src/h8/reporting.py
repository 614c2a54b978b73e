"""Deterministic report documents: fixed-significant-digit rows, stable
hashing, CSV/JSON emission.

Row payloads are formatted once (12 significant digits, '.' decimal point,
no locale) and reused verbatim by both encodings, so the determinism hash
covers rows independently of the output format. CSV files consist of
exactly the header and the rows; run metadata (config echo, wall time,
hash) travels in the JSON document and on stdout.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

SCHEMA_VERSION = "h8.1"


def fmt_value(v) -> str:
    """Canonical 12-significant-digit rendering; booleans as true/false."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int,)):
        return str(v)
    if v is None:
        return ""
    if isinstance(v, complex):
        return f"{fmt_value(v.real)}{'+' if v.imag >= 0 or math.isnan(v.imag) else '-'}{fmt_value(abs(v.imag))}i"
    if isinstance(v, float):
        if v == 0.0:
            return "0"
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.12g}"
    if isinstance(v, str):
        return v
    # numpy scalars and anything else with a clean float/int view
    try:
        if float(v).is_integer() and abs(float(v)) < 2 ** 53 and not isinstance(v, float):
            return str(int(v))
        return fmt_value(float(v))
    except (TypeError, ValueError):
        return str(v)


def fmt_point(point) -> str:
    """Compact comma-free rendering of a probe sample point."""
    if isinstance(point, complex):
        return fmt_value(point)
    if isinstance(point, (tuple, list)):
        return "|".join(fmt_value(p) for p in point)
    return fmt_value(point)


@dataclass
class ReportDocument:
    """One command's output: columns, formatted rows, summary, and the hash
    over the row payload (identical for CSV and JSON emission)."""

    command: str
    config: dict
    columns: list[str]
    rows: list[list[str]]
    summary: dict
    wall_time_ms: float = 0.0
    schema_version: str = SCHEMA_VERSION
    determinism_hash: str = field(default="", init=False)

    def __post_init__(self):
        payload = "\n".join(",".join(row) for row in self.rows)
        self.determinism_hash = hashlib.sha256(payload.encode("ascii")).hexdigest()

    def csv_bytes(self) -> bytes:
        lines = [",".join(self.columns)]
        lines += [",".join(row) for row in self.rows]
        return ("\n".join(lines) + "\n").encode("ascii")

    def json_bytes(self) -> bytes:
        doc = {
            "schema_version": self.schema_version,
            "command": self.command,
            "config": self.config,
            "determinism_hash": self.determinism_hash,
            "summary": self.summary,
            "columns": self.columns,
            "rows": self.rows,
            "wall_time_ms": round(self.wall_time_ms, 3),
        }
        return (json.dumps(doc, indent=2, ensure_ascii=True) + "\n").encode("ascii")


def make_rows(columns: list[str], values: list[list]) -> list[list[str]]:
    out = []
    for record in values:
        if len(record) != len(columns):
            raise ValueError("row width does not match the column set")
        out.append([fmt_value(v) for v in record])
    return out


def emit(report: ReportDocument, fmt: str, path: str | Path) -> None:
    """Write the document; CSV gets header+rows only, JSON the full envelope."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    data = report.csv_bytes() if fmt == "csv" else report.json_bytes()
    Path(path).write_bytes(data)
