"""Tabular reports emitted by the CLI: text, RFC-4180 CSV, JSON and plot data."""
from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .rational_core import format_rational


@dataclass
class Series:
    name: str
    x: list[float]
    y: list[float]
    xlabel: str
    ylabel: str
    logy: bool = False


@dataclass
class Report:
    command: str
    params: dict[str, Any]
    columns: list[str]
    rows: list[list[Any]]
    summary: str | None = None
    meta: dict[str, Any] = field(default_factory=dict)
    series: list[Series] = field(default_factory=list)


def _csv_cell(value) -> str:
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else str(value)
    return str(value)


def _text_cell(value) -> str:
    if isinstance(value, Fraction):
        text = format_rational(value)
        return text if len(text) <= 40 else f"{float(value):.6e}"
    if isinstance(value, float):
        return f"{value:.6g}"
    return _csv_cell(value)


def _json_value(value):
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {k: _json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    return value


def to_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(report.columns)
    for row in report.rows:
        writer.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def to_json(report: Report, precision_bits: int) -> str:
    doc = {
        "command": report.command,
        "params": _json_value(report.params),
        "precision_bits": precision_bits,
        "columns": report.columns,
        "rows": [dict(zip(report.columns, (_json_value(v) for v in row))) for row in report.rows],
    }
    doc.update(_json_value(report.meta))
    return json.dumps(doc, indent=2) + "\n"


def to_text(report: Report) -> str:
    lines = []
    if report.summary:
        lines.append(report.summary)
    cells = [report.columns] + [[_text_cell(v) for v in row] for row in report.rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(report.columns))]
    for k, row in enumerate(cells):
        lines.append("  ".join(c.rjust(w) for c, w in zip(row, widths)))
        if k == 0:
            lines.append("  ".join("-" * w for w in widths))
    for key, value in report.meta.items():
        lines.append(f"{key}: {_json_value(value)}")
    return "\n".join(lines) + "\n"


def render(report: Report, fmt: str, precision_bits: int) -> str:
    if fmt == "csv":
        return to_csv(report)
    if fmt == "json":
        return to_json(report, precision_bits)
    if fmt == "text":
        return to_text(report)
    raise ValueError(f"unknown output format {fmt!r}")


def write_plot_data(report: Report, directory: str) -> list[str]:
    """Write one gnuplot-style two-column ``.dat`` file per series; returns the paths."""
    paths = []
    os.makedirs(directory, exist_ok=True)
    for s in report.series:
        path = os.path.join(directory, f"{report.command}_{s.name}.dat")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"# {report.command}: {s.name}\n# {s.xlabel}\t{s.ylabel}\n")
            for a, b in zip(s.x, s.y):
                fh.write(f"{a!r}\t{b!r}\n")
        paths.append(path)
    return paths
