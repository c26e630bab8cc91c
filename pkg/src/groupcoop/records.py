"""Command output records and their text, CSV and JSON renderings."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any


@dataclass
class OutputRecord:
    command: str
    params: dict[str, Any]
    columns: list[str]
    rows: list[list[Any]]
    summary: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "params": self.params,
            "seed": self.seed,
            "summary": self.summary,
            "columns": self.columns,
            "rows": self.rows,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "OutputRecord":
        return cls(
            d["command"],
            d["params"],
            list(d["columns"]),
            [list(r) for r in d["rows"]],
            dict(d.get("summary", {})),
            d.get("seed"),
        )

    def render(self, fmt: str = "text", precision: int = 4) -> str:
        if fmt == "json":
            return to_json(self)
        if fmt == "csv":
            return to_csv(self, precision)
        if fmt == "text":
            return to_text(self, precision)
        raise ValueError(f"unknown format {fmt!r}")


def _cell(value: Any, precision: int) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.{precision}f}"
    if value is None:
        return ""
    return str(value)


def to_json(rec: OutputRecord) -> str:
    return json.dumps(rec.to_dict(), indent=2, sort_keys=False) + "\n"


def from_json(text: str) -> OutputRecord:
    return OutputRecord.from_dict(json.loads(text))


def to_csv(rec: OutputRecord, precision: int = 4) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(rec.columns)
    for row in rec.rows:
        writer.writerow([_cell(v, precision) for v in row])
    return buf.getvalue()


def to_text(rec: OutputRecord, precision: int = 4) -> str:
    lines = [f"# {rec.command}"]
    if rec.seed is not None:
        lines.append(f"# seed: {rec.seed}")
    for key, value in rec.summary.items():
        lines.append(f"{key}: {_cell(value, precision)}")
    if rec.columns:
        if rec.summary:
            lines.append("")
        table = [rec.columns] + [[_cell(v, precision) for v in row] for row in rec.rows]
        widths = [max(len(r[i]) for r in table) for i in range(len(rec.columns))]
        for j, r in enumerate(table):
            lines.append("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip())
            if j == 0:
                lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"
