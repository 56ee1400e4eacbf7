"""Policy-suitability scores: which intervention fits which category.

The matrix ships as an editable JSON data file (five WASH intervention rows
against the seven default labels, scored 1-5) so practitioners can extend the
policy menu without touching code.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import UnknownLabel, UnknownPolicy


@dataclass(frozen=True)
class SuitabilityMatrix:
    policies: tuple[str, ...]
    labels: tuple[str, ...]
    scores: tuple[tuple[int, ...], ...]  # one row per policy
    legend: dict[str, str]

    def __post_init__(self) -> None:
        if len(set(self.policies)) != len(self.policies):
            raise ValueError("policy names must be unique")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be unique")
        if len(self.scores) != len(self.policies):
            raise ValueError("one score row per policy required")
        for row in self.scores:
            if len(row) != len(self.labels):
                raise ValueError("one score per label required")
            for cell in row:
                if cell not in (1, 2, 3, 4, 5):
                    raise ValueError(f"scores must be in 1..5, got {cell}")

    def as_dict(self) -> dict:
        return {
            "legend": self.legend,
            "labels": list(self.labels),
            "policies": list(self.policies),
            "scores": [list(r) for r in self.scores],
        }


def load_suitability(path: str | Path | None = None) -> SuitabilityMatrix:
    """Load a matrix file, or the shipped default when no path is given."""
    if path is None:
        text = resources.files("terraseg.data").joinpath("suitability_default.json").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    doc = json.loads(text)
    return SuitabilityMatrix(
        policies=tuple(doc["policies"]),
        labels=tuple(doc["labels"]),
        scores=tuple(tuple(int(c) for c in row) for row in doc["scores"]),
        legend={str(k): str(v) for k, v in doc.get("legend", {}).items()},
    )


def suitability_lookup(matrix: SuitabilityMatrix, label: str, policy: str) -> int:
    """Score of one intervention for one category label."""
    try:
        col = matrix.labels.index(label)
    except ValueError:
        raise UnknownLabel(f"label {label!r} is not in the matrix") from None
    try:
        row = matrix.policies.index(policy)
    except ValueError:
        raise UnknownPolicy(f"policy {policy!r} is not in the matrix") from None
    return matrix.scores[row][col]
