"""Report rows with exact values, decimal renderings and exact pass/fail, written as CSV and JSON."""
from __future__ import annotations

import csv
import json
import operator
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from .constants import INFORMATIONAL
from .core import format_rational

DECIMAL_DIGITS = 15
CSV_COLUMNS = ("experiment", "params", "value", "decimal", "relation", "bound", "bound_decimal", "status", "tag", "note")

_RELATIONS = {"<=": operator.le, ">=": operator.ge, "==": operator.eq, "<": operator.lt, ">": operator.gt}


def decimal_string(x: Fraction) -> str:
    """``x`` rounded to 15 significant digits."""
    with localcontext() as ctx:
        ctx.prec = DECIMAL_DIGITS
        d = Decimal(x.numerator) / Decimal(x.denominator)
    return format(d, f".{DECIMAL_DIGITS}g")


def _render(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return format_rational(v)
    return str(v)


def _render_decimal(v: Any) -> str:
    if isinstance(v, bool) or not isinstance(v, (int, Fraction)):
        return ""
    return decimal_string(Fraction(v))


def _render_params(params: dict) -> dict:
    return {k: v if isinstance(v, int) and not isinstance(v, bool) else _render(v) for k, v in params.items()}


@dataclass(frozen=True)
class ReportRow:
    experiment: str
    params: dict
    value: Any
    relation: Optional[str] = None
    bound: Any = None
    tag: str = INFORMATIONAL
    note: str = ""

    @property
    def passed(self) -> Optional[bool]:
        """Exact comparison of ``value`` against ``bound``; ``None`` for informational rows."""
        if self.relation is None:
            return None
        return bool(_RELATIONS[self.relation](self.value, self.bound))

    @property
    def status(self) -> str:
        return {None: "INFO", True: "PASS", False: "FAIL"}[self.passed]

    def as_record(self) -> dict:
        return {
            "experiment": self.experiment,
            "params": json.dumps(_render_params(self.params), sort_keys=True, separators=(",", ":")),
            "value": _render(self.value),
            "decimal": _render_decimal(self.value),
            "relation": self.relation or "",
            "bound": _render(self.bound),
            "bound_decimal": _render_decimal(self.bound),
            "status": self.status,
            "tag": self.tag,
            "note": self.note,
        }


def check(experiment: str, params: dict, value, relation: str, bound, tag: str, note: str = "") -> ReportRow:
    if relation not in _RELATIONS:
        raise ValueError(f"unknown relation {relation!r}")
    return ReportRow(experiment, params, value, relation, bound, tag, note)


def info(experiment: str, params: dict, value, note: str = "") -> ReportRow:
    return ReportRow(experiment, params, value, note=note)


@dataclass
class Report:
    command: str
    rows: list[ReportRow] = field(default_factory=list)

    def add(self, row: ReportRow) -> ReportRow:
        self.rows.append(row)
        return row

    def all_pass(self) -> bool:
        return all(r.passed is not False for r in self.rows)

    def failures(self) -> list[ReportRow]:
        return [r for r in self.rows if r.passed is False]

    def write(self, out_dir) -> tuple[Path, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        records = [r.as_record() for r in self.rows]
        csv_path = out / "report.csv"
        with csv_path.open("w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
            writer.writeheader()
            writer.writerows(records)
        json_path = out / "report.json"
        doc = {"command": self.command, "all_pass": self.all_pass(), "rows": records}
        for rec in doc["rows"]:
            rec["params"] = json.loads(rec["params"])
        json_path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return csv_path, json_path
