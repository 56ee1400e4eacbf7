"""Parse, validate, and export entity attribute tables (CSV and JSON).

CSV contract: UTF-8, a header row containing every schema attribute code, plus
optional ``id``, ``name``, ``parent``, and ``population`` columns. Row order is
preserved; ids come from the ``id`` column when present, otherwise 1-based row
order. JSON mirrors the domain types: ``{"schema": ..., "entities": [...]}``.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    Diagnostic,
    DuplicateId,
    MissingColumn,
    NonNumericCell,
    TooFewRows,
)
from .schema import AttributeSchema, default_schema

RESERVED_COLUMNS = ("id", "name", "parent", "population")


@dataclass(frozen=True)
class EntityRecord:
    """One territorial entity: stable id, free-text name/parent, raw values."""

    id: int
    name: str
    parent: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class Dataset:
    schema: AttributeSchema
    entities: tuple[EntityRecord, ...]
    populations: tuple[float, ...] | None = None
    diagnostics: tuple[Diagnostic, ...] = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.entities)

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(e.id for e in self.entities)

    def index_of_id(self, entity_id: int) -> int:
        for i, e in enumerate(self.entities):
            if e.id == entity_id:
                return i
        raise KeyError(entity_id)

    def matrix(self) -> np.ndarray:
        """Raw values as an (entities x attributes) float array."""
        m = np.array([e.values for e in self.entities], dtype=float)
        m.flags.writeable = False
        return m


def _parse_cell(cell: str, row: int, column: str, decimal_comma: bool) -> float:
    text = cell.strip()
    if decimal_comma:
        text = text.rstrip("%").strip()
        text = text.replace(",", ".")
    try:
        return float(text)
    except ValueError:
        raise NonNumericCell(row, column, cell) from None


def parse_dataset(
    path: str | Path,
    format: str = "csv",
    schema: AttributeSchema | None = None,
    decimal_comma: bool = False,
    impute_missing: bool = False,
) -> Dataset:
    """Read and structurally validate a dataset file.

    ``impute_missing`` replaces empty cells with the per-attribute mean of the
    present values and records a diagnostic per imputed cell; without it an
    empty cell raises NonNumericCell. Unparseable non-empty cells always raise.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"input file does not exist: {path}")
    schema = schema or default_schema()
    if format == "csv":
        return _parse_csv(path, schema, decimal_comma, impute_missing)
    if format == "json":
        return _parse_json(path, schema)
    raise ValueError(f"unknown format {format!r}")


def _parse_csv(
    path: Path, schema: AttributeSchema, decimal_comma: bool, impute_missing: bool
) -> Dataset:
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise TooFewRows(0) from None
        header = [h.strip() for h in header]
        for code in schema.codes:
            if code not in header:
                raise MissingColumn(code)
        col_of = {name: header.index(name) for name in header}
        rows = [row for row in reader if any(cell.strip() for cell in row)]

    if len(rows) < 2:
        raise TooFewRows(len(rows))

    has_id = "id" in col_of
    has_pop = "population" in col_of
    diagnostics: list[Diagnostic] = []

    # First pass: collect cells, deferring empty ones when imputing.
    raw: list[list[float | None]] = []
    ids: list[int] = []
    names: list[str] = []
    parents: list[str] = []
    pops: list[float] = []
    for r, row in enumerate(rows, start=1):
        if has_id:
            ids.append(int(_parse_cell(row[col_of["id"]], r, "id", decimal_comma)))
        else:
            ids.append(r)
        names.append(row[col_of["name"]].strip() if "name" in col_of else "")
        parents.append(row[col_of["parent"]].strip() if "parent" in col_of else "")
        if has_pop:
            pops.append(_parse_cell(row[col_of["population"]], r, "population", decimal_comma))
        vals: list[float | None] = []
        for code in schema.codes:
            cell = row[col_of[code]]
            if impute_missing and not cell.strip():
                vals.append(None)
            else:
                vals.append(_parse_cell(cell, r, code, decimal_comma))
        raw.append(vals)

    seen: set[int] = set()
    for entity_id in ids:
        if entity_id in seen:
            raise DuplicateId(entity_id)
        seen.add(entity_id)

    if impute_missing:
        for a, code in enumerate(schema.codes):
            present = [row[a] for row in raw if row[a] is not None]
            mean = sum(present) / len(present) if present else 0.0
            for r, row in enumerate(raw):
                if row[a] is None:
                    row[a] = mean
                    diagnostics.append(
                        Diagnostic(
                            rule="imputed-missing-cell",
                            message=f"empty cell imputed with attribute mean {mean!r}",
                            entity_id=ids[r],
                            attribute=code,
                        )
                    )

    entities = tuple(
        EntityRecord(id=ids[r], name=names[r], parent=parents[r], values=tuple(raw[r]))  # type: ignore[arg-type]
        for r in range(len(rows))
    )
    return Dataset(
        schema=schema,
        entities=entities,
        populations=tuple(pops) if has_pop else None,
        diagnostics=tuple(diagnostics),
    )


def _parse_json(path: Path, schema: AttributeSchema) -> Dataset:
    with path.open(encoding="utf-8") as fh:
        doc = json.load(fh)
    if "schema" in doc:
        schema = AttributeSchema.from_dict(doc["schema"])
    entities = []
    ids_seen: set[int] = set()
    pops: list[float] = []
    has_pop = False
    for r, ent in enumerate(doc["entities"], start=1):
        for code in schema.codes:
            if code not in ent.get("values", {}) and "values_list" not in ent:
                raise MissingColumn(code)
        entity_id = int(ent.get("id", r))
        if entity_id in ids_seen:
            raise DuplicateId(entity_id)
        ids_seen.add(entity_id)
        if "values_list" in ent:
            values = tuple(float(v) for v in ent["values_list"])
        else:
            values = tuple(float(ent["values"][code]) for code in schema.codes)
        if "population" in ent:
            has_pop = True
            pops.append(float(ent["population"]))
        entities.append(
            EntityRecord(
                id=entity_id,
                name=ent.get("name", ""),
                parent=ent.get("parent", ""),
                values=values,
            )
        )
    if len(entities) < 2:
        raise TooFewRows(len(entities))
    return Dataset(
        schema=schema,
        entities=tuple(entities),
        populations=tuple(pops) if has_pop else None,
    )


def validate_dataset(d: Dataset) -> list[Diagnostic]:
    """Semantic checks; an empty list means every type invariant holds."""
    out: list[Diagnostic] = []
    n_attrs = len(d.schema)
    if len(d.entities) < 2:
        out.append(Diagnostic(rule="too-few-entities", message=f"{len(d.entities)} entities, need at least 2"))
    seen: set[int] = set()
    for e in d.entities:
        if e.id in seen:
            out.append(Diagnostic(rule="duplicate-id", message=f"id {e.id} occurs more than once", entity_id=e.id))
        seen.add(e.id)
        if e.id <= 0:
            out.append(Diagnostic(rule="non-positive-id", message=f"id {e.id} must be positive", entity_id=e.id))
        if len(e.values) != n_attrs:
            out.append(
                Diagnostic(
                    rule="value-count-mismatch",
                    message=f"{len(e.values)} values for {n_attrs} schema attributes",
                    entity_id=e.id,
                )
            )
            continue
        for a, attr in enumerate(d.schema.attributes):
            v = e.values[a]
            if not math.isfinite(v):
                out.append(
                    Diagnostic(
                        rule="non-finite value",
                        message=f"value {v!r} is not finite",
                        entity_id=e.id,
                        attribute=attr.code,
                    )
                )
            elif attr.units == "percentage" and not (0.0 <= v <= 100.0):
                out.append(
                    Diagnostic(
                        rule="percentage out of range",
                        message=f"value {v!r} outside [0, 100]",
                        entity_id=e.id,
                        attribute=attr.code,
                    )
                )
    return out


def export_dataset(d: Dataset, path: str | Path, format: str = "csv") -> Path:
    """Write a dataset back out; round trips bit-for-bit through parse_dataset."""
    path = Path(path)
    if format == "csv":
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            header = ["id", "name", "parent"]
            if d.populations is not None:
                header.append("population")
            header.extend(d.schema.codes)
            writer.writerow(header)
            for i, e in enumerate(d.entities):
                row: list[str] = [str(e.id), e.name, e.parent]
                if d.populations is not None:
                    row.append(repr(d.populations[i]))
                row.extend(repr(v) for v in e.values)
                writer.writerow(row)
    elif format == "json":
        doc: dict = {"schema": d.schema.as_dict(), "entities": []}
        for i, e in enumerate(d.entities):
            ent: dict = {
                "id": e.id,
                "name": e.name,
                "parent": e.parent,
                "values": {code: e.values[a] for a, code in enumerate(d.schema.codes)},
            }
            if d.populations is not None:
                ent["population"] = d.populations[i]
            doc["entities"].append(ent)
        path.write_text(json.dumps(doc, indent=2, sort_keys=True), encoding="utf-8")
    else:
        raise ValueError(f"unknown format {format!r}")
    return path
