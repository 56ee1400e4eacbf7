"""Policy-suitability matrix: shipped data and lookups."""

from __future__ import annotations

import json

import pytest

from terraseg.errors import UnknownLabel, UnknownPolicy
from terraseg.suitability import SuitabilityMatrix, load_suitability, suitability_lookup

LARGE_INFRA = "Designing / building / improving large and medium water & sanitation infrastructure systems"
SMALL_INFRA = "Designing / building / improving small and domestic water & sanitation systems"
WORKSHOPS = "Providing information to ensure safe water, sanitation, and hygiene practices at household level through workshops"
TICS = "Providing information to ensure safe water, sanitation and hygiene practices at household level using TICs"
HUMANITARIAN = "Humanitarian assistance and donations on WASH services"

EXPECTED = {
    LARGE_INFRA: (5, 5, 5, 5, 3, 2, 2),
    SMALL_INFRA: (3, 3, 3, 3, 5, 5, 5),
    WORKSHOPS: (4, 4, 4, 4, 5, 5, 5),
    TICS: (5, 5, 4, 3, 2, 2, 2),
    HUMANITARIAN: (1, 1, 1, 1, 5, 5, 5),
}
LABELS = ("Ia", "Ib", "IIa", "IIb", "IIIa", "IIIb", "IIIc")


def test_known_cells():
    matrix = load_suitability()
    assert suitability_lookup(matrix, "IIIc", LARGE_INFRA) == 2
    assert suitability_lookup(matrix, "Ia", HUMANITARIAN) == 1
    assert suitability_lookup(matrix, "IIIa", SMALL_INFRA) == 5


def test_all_35_cells_round_trip():
    matrix = load_suitability()
    assert len(matrix.policies) * len(matrix.labels) == 35
    for policy, row in EXPECTED.items():
        for label, score in zip(LABELS, row):
            assert suitability_lookup(matrix, label, policy) == score


def test_unknown_label_and_policy():
    matrix = load_suitability()
    with pytest.raises(UnknownLabel):
        suitability_lookup(matrix, "IV", LARGE_INFRA)
    with pytest.raises(UnknownPolicy):
        suitability_lookup(matrix, "Ia", "terraform the llanos")


def test_user_supplied_matrix_file(tmp_path):
    doc = {
        "labels": ["A", "B"],
        "policies": ["drill wells"],
        "scores": [[5, 1]],
        "legend": {"5": "yes", "1": "no"},
    }
    path = tmp_path / "custom.json"
    path.write_text(json.dumps(doc))
    matrix = load_suitability(path)
    assert suitability_lookup(matrix, "B", "drill wells") == 1


def test_matrix_validation():
    with pytest.raises(ValueError):
        SuitabilityMatrix(policies=("p",), labels=("A",), scores=((7,),), legend={})
    with pytest.raises(ValueError):
        SuitabilityMatrix(policies=("p", "p"), labels=("A",), scores=((1,), (2,)), legend={})
    with pytest.raises(ValueError):
        SuitabilityMatrix(policies=("p",), labels=("A", "B"), scores=((1,),), legend={})
