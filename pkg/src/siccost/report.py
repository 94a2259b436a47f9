"""Report model and its four serializations (table, csv, json, markdown).

Every cell is formatted once, by column kind, and all four emitters print
that same text, so a value reads identically whichever format is chosen.
"""

import csv
import io
import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal

FORMATS = ("table", "csv", "json", "markdown")


def _fixed(value: float, places: int) -> str:
    # half-up on the shortest repr, same rule as RoundingMode.PAPER
    d = Decimal(repr(float(value))).quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP)
    return str(abs(d) if d == 0 else d)


# kind -> formatter for non-None cells
_FORMATTERS = {
    "int": lambda v: str(int(v)),
    "money": lambda v: _fixed(v, 4),
    "cents": lambda v: _fixed(v, 2),
    "number": lambda v: f"{v:.8g}",
    "text": str,
    "bool": lambda v: "true" if v else "false",
}


@dataclass
class Column:
    name: str
    kind: str = "number"

    def __post_init__(self):
        if self.kind not in _FORMATTERS:
            raise ValueError(f"unknown column kind {self.kind!r}")

    def text(self, value) -> str | None:
        if value is None:
            return None
        return _FORMATTERS[self.kind](value)

    def json_value(self, value):
        text = self.text(value)
        if text is None:
            return None
        if self.kind == "int":
            return int(text)
        if self.kind in ("money", "cents", "number"):
            return float(text)
        if self.kind == "bool":
            return bool(value)
        return text


@dataclass
class Table:
    name: str
    columns: list[Column]
    rows: list[list] = field(default_factory=list)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"table {self.name!r} expects {len(self.columns)} cells, got {len(values)}")
        self.rows.append(list(values))

    def text_rows(self, missing: str) -> list[list[str]]:
        return [
            [missing if (t := col.text(v)) is None else t for col, v in zip(self.columns, row)]
            for row in self.rows
        ]


@dataclass
class Report:
    title: str
    provenance: dict[str, str]
    tables: list[Table] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    assumptions: list[str] = field(default_factory=list)

    def table(self, name: str) -> Table:
        for t in self.tables:
            if t.name == name:
                return t
        raise KeyError(name)


def _emit_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for i, table in enumerate(report.tables):
        if i:
            buf.write("\n")
        writer.writerow([c.name for c in table.columns])
        writer.writerows(table.text_rows(""))
    return buf.getvalue()


def _emit_json(report: Report) -> str:
    tree = {
        "title": report.title,
        "provenance": report.provenance,
        "tables": {
            t.name: [{c.name: c.json_value(v) for c, v in zip(t.columns, row)} for row in t.rows]
            for t in report.tables
        },
        "notes": report.notes,
        "assumptions": report.assumptions,
    }
    return json.dumps(tree, indent=2, ensure_ascii=False) + "\n"


def _numeric(col: Column) -> bool:
    return col.kind in ("int", "money", "cents", "number")


def _emit_table(report: Report) -> str:
    lines = [report.title, "=" * len(report.title)]
    width = max(map(len, report.provenance), default=0)
    lines += [f"{k.ljust(width)}  {v}" for k, v in report.provenance.items()]
    for table in report.tables:
        lines += ["", f"[{table.name}]"]
        cells = table.text_rows("n/a")
        if len(cells) == 1:
            # a single record reads better vertically
            width = max(len(c.name) for c in table.columns)
            lines += [f"  {c.name.ljust(width)}  {v}" for c, v in zip(table.columns, cells[0])]
            continue
        widths = [max([len(c.name)] + [len(r[i]) for r in cells]) for i, c in enumerate(table.columns)]

        def fmt(row):
            out = [
                v.rjust(w) if _numeric(c) else v.ljust(w)
                for c, v, w in zip(table.columns, row, widths)
            ]
            return "  " + "  ".join(out).rstrip()

        lines.append(fmt([c.name for c in table.columns]))
        lines.append("  " + "  ".join("-" * w for w in widths))
        lines += [fmt(r) for r in cells]
    if report.notes:
        lines += ["", "Notes:"] + [f"  - {n}" for n in report.notes]
    if report.assumptions:
        lines += ["", "Assumptions (user-supplied, not from published data):"]
        lines += [f"  - {a}" for a in report.assumptions]
    return "\n".join(lines) + "\n"


def _md_escape(text: str) -> str:
    return text.replace("|", "\\|")


def _emit_markdown(report: Report) -> str:
    lines = [f"# {report.title}", "", "## Provenance", ""]
    lines += [f"- **{k}**: `{v}`" for k, v in report.provenance.items()]
    for table in report.tables:
        lines += ["", f"## {table.name}", ""]
        lines.append("| " + " | ".join(c.name for c in table.columns) + " |")
        lines.append("|" + "|".join("---:" if _numeric(c) else "---" for c in table.columns) + "|")
        for row in table.text_rows("n/a"):
            lines.append("| " + " | ".join(_md_escape(v) for v in row) + " |")
    if report.notes:
        lines += ["", "## Notes", ""] + [f"- {n}" for n in report.notes]
    if report.assumptions:
        lines += ["", "## Assumptions", ""] + [f"- {a}" for a in report.assumptions]
    return "\n".join(lines) + "\n"


_EMITTERS = {
    "table": _emit_table,
    "csv": _emit_csv,
    "json": _emit_json,
    "markdown": _emit_markdown,
}


def emit(report: Report, format: str = "table") -> bytes:
    try:
        emitter = _EMITTERS[format]
    except KeyError:
        raise ValueError(f"unknown format {format!r}; choose from {', '.join(FORMATS)}") from None
    return emitter(report).encode("utf-8")
