"""Plain tabular reports rendered as Markdown, CSV or JSON."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class RenderFormat(str, Enum):
    MARKDOWN = "markdown"
    CSV = "csv"
    JSON = "json"


@dataclass
class Report:
    title: str
    columns: list[str]
    rows: list[list[str]] = field(default_factory=list)
    data: Any = None  # JSON payload; defaults to the rows keyed by column
    summary: list[str] = field(default_factory=list)

    def payload(self) -> Any:
        if self.data is not None:
            return self.data
        return [dict(zip(self.columns, row)) for row in self.rows]


def _md_cell(text: str) -> str:
    return str(text).replace("\\", "\\\\").replace("|", "\\|").replace("\n", " ")


def render_markdown(report: Report) -> str:
    out = [f"## {report.title}", ""]
    if report.summary:
        out.extend(report.summary)
        out.append("")
    if report.columns:
        out.append("| " + " | ".join(_md_cell(c) for c in report.columns) + " |")
        out.append("|" + "|".join("---" for _ in report.columns) + "|")
        for row in report.rows:
            out.append("| " + " | ".join(_md_cell(c) for c in row) + " |")
    return "\n".join(out).rstrip("\n") + "\n"


def render_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(report.columns)
    writer.writerows(report.rows)
    return buf.getvalue()


def render_json(report: Report) -> str:
    return json.dumps(report.payload(), indent=2, ensure_ascii=False) + "\n"


def render(report: Report, fmt: RenderFormat | str = RenderFormat.MARKDOWN) -> str:
    fmt = RenderFormat(fmt)
    if fmt is RenderFormat.CSV:
        return render_csv(report)
    if fmt is RenderFormat.JSON:
        return render_json(report)
    return render_markdown(report)
