"""Shared fixtures and the acceptance-summary reporting hook."""

from __future__ import annotations

import numpy as np
import pytest

from terraseg.dataset import Dataset, EntityRecord, export_dataset
from terraseg.schema import AttributeDef, AttributeSchema, default_schema
from terraseg.synthetic import benchmark_dataset


def make_dataset(matrix, schema: AttributeSchema | None = None) -> Dataset:
    """Wrap a raw (n x p) array as a Dataset with rate-unit attributes."""
    matrix = np.asarray(matrix, dtype=float)
    n, p = matrix.shape
    if schema is None:
        schema = AttributeSchema(
            attributes=tuple(AttributeDef(f"x{a + 1}", f"attribute {a + 1}", "rate") for a in range(p))
        )
    entities = tuple(
        EntityRecord(id=i + 1, name=f"e{i + 1}", parent="", values=tuple(matrix[i]))
        for i in range(n)
    )
    return Dataset(schema=schema, entities=entities)


@pytest.fixture(scope="session")
def fixture366():
    dataset, labels = benchmark_dataset()
    return dataset, labels


@pytest.fixture(scope="session")
def fixture366_csv(fixture366, tmp_path_factory):
    dataset, _ = fixture366
    path = tmp_path_factory.mktemp("data") / "benchmark366.csv"
    export_dataset(dataset, path, format="csv")
    return path


@pytest.fixture
def small_dataset():
    rng = np.random.default_rng(7)
    return make_dataset(rng.uniform(0.0, 100.0, size=(5, 15)), schema=default_schema())


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one pass/fail line per acceptance criterion at the end of a run."""
    lines = []
    for status, marker in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for report in terminalreporter.stats.get(status, []):
            if "test_acceptance.py" in report.nodeid and report.when in (None, "call"):
                name = report.nodeid.split("::")[-1].replace("test_", "", 1)
                lines.append((name, marker))
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for name, marker in sorted(lines):
            terminalreporter.write_line(f"{marker}  {name}")
