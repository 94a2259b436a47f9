import csv
import io
import json

import pytest

from siccost.cli import run_subcommand
from siccost.config import load_scenario
from siccost.report import Column, Report, Table, emit


def sample_report():
    table = Table(
        "numbers",
        [Column("name", "text"), Column("count", "int"), Column("cost_eur", "money"),
         Column("price_eur", "cents"), Column("ratio"), Column("ok", "bool")],
    )
    table.add("a", 6857, 0.364591, 0.5997984, 0.8999991, True)
    table.add("b, with comma", 0, 1234.56789, 0.125, None, False)
    return Report("Sample", {"tool": "test"}, [table], notes=["n1"], assumptions=["a1"])


def test_csv_round_trip():
    report = sample_report()
    rows = list(csv.reader(io.StringIO(emit(report, "csv").decode("utf-8"))))
    assert rows[0] == ["name", "count", "cost_eur", "price_eur", "ratio", "ok"]
    table = report.tables[0]
    for printed, original in zip(rows[1:], table.rows):
        assert printed[0] == original[0]
        assert int(printed[1]) == original[1]
        assert float(printed[2]) == pytest.approx(original[2], abs=0.5e-4)
        assert float(printed[3]) == pytest.approx(original[3], abs=0.5e-2 + 1e-12)
        if original[4] is None:
            assert printed[4] == ""
        else:
            assert float(printed[4]) == pytest.approx(original[4], rel=1e-8)


def test_money_four_places_cents_two():
    text = emit(sample_report(), "csv").decode()
    assert "0.3646" in text and "1234.5679" in text
    assert ",0.60," in text and ",0.13," in text


def test_empty_table_is_header_only_csv():
    report = Report("Empty", {}, [Table("t", [Column("a", "int"), Column("b", "money")])])
    assert emit(report, "csv") == b"a,b\n"


def test_multiple_tables_in_csv_are_blank_line_separated():
    report = sample_report()
    report.tables.append(Table("other", [Column("x", "int")], [[1]]))
    blocks = emit(report, "csv").decode().split("\n\n")
    assert len(blocks) == 2
    assert blocks[1] == "x\n1\n"


def test_json_structure_and_key_order():
    tree = json.loads(emit(sample_report(), "json"))
    assert list(tree) == ["title", "provenance", "tables", "notes", "assumptions"]
    row = tree["tables"]["numbers"][0]
    assert list(row) == ["name", "count", "cost_eur", "price_eur", "ratio", "ok"]
    assert row == {"name": "a", "count": 6857, "cost_eur": 0.3646, "price_eur": 0.6, "ratio": 0.8999991, "ok": True}
    assert tree["tables"]["numbers"][1]["ratio"] is None


def test_json_cost_report_total():
    report = run_subcommand("cost", load_scenario("paper_300mm"), {"rounding": "paper"})
    text = emit(report, "json").decode()
    assert '"total_chip_cost_eur": 0.5998' in text
    assert '"total_chip_cost_reported_eur": 0.6' in text


def test_table_and_markdown_render_everything():
    report = sample_report()
    table = emit(report, "table").decode()
    md = emit(report, "markdown").decode()
    for text in (table, md):
        assert "Sample" in text and "0.3646" in text and "n/a" in text
        assert "n1" in text and "a1" in text
    assert "| name | count |" in md
    assert "---:" in md


def test_single_row_table_is_vertical():
    report = Report("One", {}, [Table("t", [Column("alpha", "int"), Column("b", "money")], [[1, 2.0]])])
    text = emit(report, "table").decode()
    assert "  alpha  1\n" in text
    assert "  b      2.0000\n" in text


def test_markdown_escapes_pipes():
    report = Report("P", {}, [Table("t", [Column("s", "text")], [["a|b"]])])
    assert "a\\|b" in emit(report, "markdown").decode()


def test_unknown_format():
    with pytest.raises(ValueError):
        emit(sample_report(), "xml")


def test_row_width_checked():
    with pytest.raises(ValueError):
        Table("t", [Column("a")]).add(1, 2)


def test_unknown_column_kind():
    with pytest.raises(ValueError):
        Column("a", "colour")
