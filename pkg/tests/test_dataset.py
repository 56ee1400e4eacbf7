"""Ingest: parsing, validation, and round trips."""

from __future__ import annotations

import math

import pytest

from terraseg.dataset import export_dataset, parse_dataset, validate_dataset
from terraseg.errors import DuplicateId, MissingColumn, NonNumericCell, TooFewRows
from terraseg.schema import default_schema

CODES = default_schema().codes


def write_csv(path, rows, header=None):
    header = header if header is not None else ["id", "name", "parent", *CODES]
    lines = [",".join(header)]
    lines.extend(",".join(str(c) for c in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def simple_rows(n, value="1.0"):
    return [[i + 1, f"e{i + 1}", "p", *([value] * 15)] for i in range(n)]


def test_parse_benchmark_fixture(fixture366_csv):
    dataset = parse_dataset(fixture366_csv, format="csv")
    assert len(dataset) == 366
    assert dataset.ids == tuple(range(1, 367))


def test_parse_two_rows_all_zeros(tmp_path):
    path = write_csv(tmp_path / "two.csv", simple_rows(2, value="0"))
    dataset = parse_dataset(path)
    assert len(dataset) == 2
    assert all(v == 0.0 for e in dataset.entities for v in e.values)


def test_missing_column_names_it(tmp_path):
    header = ["id", "name", "parent", *[c for c in CODES if c != "x9"]]
    rows = [[1, "a", "p", *([1] * 14)], [2, "b", "p", *([2] * 14)]]
    path = write_csv(tmp_path / "missing.csv", rows, header=header)
    with pytest.raises(MissingColumn) as exc:
        parse_dataset(path)
    assert exc.value.code == "x9"


def test_non_numeric_cell_reports_row_and_column(tmp_path):
    rows = simple_rows(3)
    rows[1][3] = "oops"  # x1 of row 2
    path = write_csv(tmp_path / "bad.csv", rows)
    with pytest.raises(NonNumericCell) as exc:
        parse_dataset(path)
    assert exc.value.row == 2
    assert exc.value.column == "x1"


def test_duplicate_id(tmp_path):
    rows = simple_rows(3)
    rows[2][0] = 1
    path = write_csv(tmp_path / "dup.csv", rows)
    with pytest.raises(DuplicateId):
        parse_dataset(path)


def test_too_few_rows(tmp_path):
    path = write_csv(tmp_path / "one.csv", simple_rows(1))
    with pytest.raises(TooFewRows):
        parse_dataset(path)


def test_ids_default_to_row_order(tmp_path):
    header = [*CODES]
    rows = [[v] * 15 for v in (3, 1, 2)]
    path = write_csv(tmp_path / "noid.csv", rows, header=header)
    dataset = parse_dataset(path)
    assert dataset.ids == (1, 2, 3)
    # Row order preserved: first row keeps its values.
    assert dataset.entities[0].values[0] == 3.0


def test_decimal_comma_locale_flag(tmp_path):
    rows = simple_rows(2)
    rows[0][3] = '"77,77%"'
    path = write_csv(tmp_path / "comma.csv", rows)
    with pytest.raises(NonNumericCell):
        parse_dataset(path)
    dataset = parse_dataset(path, decimal_comma=True)
    assert dataset.entities[0].values[0] == 77.77


def test_impute_missing_with_flag(tmp_path):
    rows = simple_rows(3, value="3.0")
    rows[1][3] = ""  # x1 missing
    path = write_csv(tmp_path / "hole.csv", rows)
    with pytest.raises(NonNumericCell):
        parse_dataset(path)
    dataset = parse_dataset(path, impute_missing=True)
    assert dataset.entities[1].values[0] == 3.0
    assert any(d.rule == "imputed-missing-cell" and d.attribute == "x1" for d in dataset.diagnostics)


@pytest.mark.parametrize("format", ["csv", "json"])
def test_round_trip_bit_for_bit(tmp_path, fixture366, format):
    dataset, _ = fixture366
    path = tmp_path / f"rt.{format}"
    export_dataset(dataset, path, format=format)
    back = parse_dataset(path, format=format)
    assert back.ids == dataset.ids
    for a, b in zip(back.entities, dataset.entities):
        assert a.values == b.values
    assert back.populations == dataset.populations


def test_validate_percentage_out_of_range(small_dataset):
    entity = small_dataset.entities[0]
    values = list(entity.values)
    values[1] = 105.0  # x2 is a percentage
    bad = small_dataset.__class__(
        schema=small_dataset.schema,
        entities=(entity.__class__(id=entity.id, name=entity.name, parent=entity.parent, values=tuple(values)),)
        + small_dataset.entities[1:],
    )
    diags = validate_dataset(bad)
    assert len(diags) == 1
    assert diags[0].rule == "percentage out of range"
    assert diags[0].attribute == "x2"


def test_validate_non_finite(small_dataset):
    entity = small_dataset.entities[0]
    values = list(entity.values)
    values[4] = math.nan
    bad = small_dataset.__class__(
        schema=small_dataset.schema,
        entities=(entity.__class__(id=entity.id, name=entity.name, parent=entity.parent, values=tuple(values)),)
        + small_dataset.entities[1:],
    )
    diags = validate_dataset(bad)
    assert any(d.rule == "non-finite value" for d in diags)


def test_validate_clean_fixture(fixture366):
    dataset, _ = fixture366
    assert validate_dataset(dataset) == []


def test_parse_output_never_yields_structural_diagnostics(fixture366_csv):
    dataset = parse_dataset(fixture366_csv)
    structural = {"too-few-entities", "duplicate-id", "value-count-mismatch", "non-positive-id"}
    assert not [d for d in validate_dataset(dataset) if d.rule in structural]


def test_default_schema_shape():
    schema = default_schema()
    assert len(schema) == 15
    assert schema.codes == tuple(f"x{i}" for i in range(1, 16))
    assert schema.favourable_low_codes() == ("x3", "x4", "x5", "x8")
