"""Tabular reports and their CSV / JSON serialisation."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Optional

from .errors import NumericalError


@dataclass
class Table:
    columns: list[str]
    rows: list[list] = field(default_factory=list)

    def add(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values, table has {len(self.columns)} columns")
        self.rows.append([_plain(v) for v in values])


@dataclass
class ObservableReport:
    """Config echo, named tables and scalar diagnostics of one run."""

    meta: dict[str, Any]
    tables: dict[str, Table] = field(default_factory=dict)
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def table(self, name: str, columns: list[str]) -> Table:
        t = Table(list(columns))
        self.tables[name] = t
        return t

    def check_finite(self) -> None:
        for name, t in self.tables.items():
            for row in t.rows:
                for v in row:
                    if isinstance(v, float) and not math.isfinite(v):
                        raise NumericalError(f"non-finite value in table {name!r}: row {row}")
        for key, v in self.diagnostics.items():
            if isinstance(v, float) and not math.isfinite(v):
                raise NumericalError(f"non-finite diagnostic {key!r}")

    def to_dict(self) -> dict:
        return {
            "meta": self.meta,
            "diagnostics": self.diagnostics,
            "tables": {n: {"columns": t.columns, "rows": t.rows} for n, t in self.tables.items()},
        }

    def to_json(self) -> str:
        # repr-based float output round-trips exactly
        return json.dumps(self.to_dict(), indent=1, allow_nan=False) + "\n"

    def to_csv(self) -> str:
        lines = []
        for key, value in self.meta.items():
            lines.append(f"# {key}: {_cell(value) if not isinstance(value, (dict, list)) else json.dumps(value)}")
        for key, value in self.diagnostics.items():
            lines.append(f"# diagnostic {key}: {_cell(value)}")
        for name, t in self.tables.items():
            lines.append(f"# table: {name}")
            lines.append(",".join(t.columns))
            for row in t.rows:
                lines.append(",".join(_cell(v) for v in row))
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.to_csv()


def _plain(v):
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if hasattr(v, "item"):
        v = v.item()
    if isinstance(v, int):
        return v
    return float(v)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def parse_report_json(text: str) -> dict:
    return json.loads(text)


def parse_report_csv(text: str) -> dict[str, dict]:
    """Read the tables back from CSV output (comment lines are skipped)."""
    tables: dict[str, dict] = {}
    current: Optional[dict] = None
    for line in text.splitlines():
        if line.startswith("# table: "):
            current = {"columns": None, "rows": []}
            tables[line[len("# table: ") :]] = current
            continue
        if line.startswith("#") or not line or current is None:
            continue
        cells = line.split(",")
        if current["columns"] is None:
            current["columns"] = cells
        else:
            current["rows"].append([_parse_cell(c) for c in cells])
    return tables


def _parse_cell(c: str):
    try:
        return int(c)
    except ValueError:
        pass
    try:
        return float(c)
    except ValueError:
        return c
