"""Cuts, taxonomy states, the override ledger, NL2, and partition arithmetic."""

from __future__ import annotations

import json
import math

import numpy as np
import pytest

from conftest import make_dataset
from terraseg.cluster import agglomerate, pairwise_distances
from terraseg.errors import (
    InvalidK,
    NegativeThreshold,
    UnknownEntity,
    UnknownLabel,
    UnmappedGroup,
    WeightsNotNormalized,
)
from terraseg.normalize import apply_direction_complement, minmax_normalize
from terraseg.schema import default_schema
from terraseg.taxonomy import (
    DEFAULT_LABELS,
    IndicatorConfig,
    OverrideEntry,
    TaxonomyState,
    apply_override,
    assign_taxonomy,
    cut_tree,
    default_weights,
    label_category,
    nl2,
    partition_report,
    replay_ledger,
    taxonomy_from_labels,
)


def random_tree(n=20, seed=23):
    rng = np.random.default_rng(seed)
    return agglomerate(pairwise_distances(rng.normal(size=(n, 4))), "ward")


def chain_tree():
    return agglomerate(pairwise_distances(np.array([[0.0], [1.0], [10.0]])), "single")


def test_cut_k_one_single_group():
    tree = random_tree()
    cut = cut_tree(tree, "by-count", 1)
    assert cut.n_groups == 1
    assert set(cut.groups[0]) == set(range(20))


def test_cut_k_n_singletons():
    tree = random_tree()
    cut = cut_tree(tree, "by-count", 20)
    assert cut.n_groups == 20
    assert all(len(members) == 1 for members in cut.groups.values())


def test_cut_chain_example_by_height():
    cut = cut_tree(chain_tree(), "by-height", 10.0)
    assert cut.n_groups == 2
    assert set(cut.groups[0]) == {0, 1}
    assert set(cut.groups[1]) == {2}


def test_cut_by_count_exact_for_every_k():
    tree = random_tree(n=17, seed=29)
    for k in range(1, 18):
        assert cut_tree(tree, "by-count", k).n_groups == k


def test_cut_by_height_monotone():
    tree = random_tree(n=25, seed=31)
    hmax = float(tree.heights().max())
    counts = [cut_tree(tree, "by-height", t).n_groups for t in np.linspace(0.0, hmax, 50)]
    assert all(a >= b for a, b in zip(counts, counts[1:]))


def test_cut_partition_property():
    tree = random_tree(n=30, seed=37)
    for k in (1, 3, 7, 30):
        cut = cut_tree(tree, "by-count", k)
        members = [pos for group in cut.groups.values() for pos in group]
        assert sorted(members) == list(range(30))
        assert sum(len(g) for g in cut.groups.values()) == 30


def test_cut_group_ids_ordered_by_smallest_member():
    tree = random_tree(n=15, seed=41)
    cut = cut_tree(tree, "by-count", 4)
    smallest = [min(cut.groups[g]) for g in sorted(cut.groups)]
    assert smallest == sorted(smallest)
    assert sorted(cut.groups) == list(range(4))


def test_cut_errors():
    tree = random_tree()
    with pytest.raises(InvalidK):
        cut_tree(tree, "by-count", 0)
    with pytest.raises(InvalidK):
        cut_tree(tree, "by-count", 21)
    with pytest.raises(NegativeThreshold):
        cut_tree(tree, "by-height", -1.0)


def test_assign_taxonomy_sixteen_groups_to_seven_labels():
    tree = random_tree(n=40, seed=43)
    cut = cut_tree(tree, "by-count", 16)
    mapping = {gid: DEFAULT_LABELS[gid % 7] for gid in cut.groups}
    state = assign_taxonomy(cut, mapping)
    assert len(state.effective) == 40
    assert set(state.effective) <= set(DEFAULT_LABELS)
    assert len(set(state.effective)) <= 7


def test_assign_taxonomy_single_group():
    cut = cut_tree(random_tree(), "by-count", 1)
    state = assign_taxonomy(cut, {0: "Ia"})
    assert set(state.effective) == {"Ia"}


def test_assign_taxonomy_unmapped_group():
    cut = cut_tree(random_tree(), "by-count", 3)
    with pytest.raises(UnmappedGroup) as exc:
        assign_taxonomy(cut, {0: "Ia", 1: "Ib"})
    assert exc.value.group_id == 2


def test_override_entity_moves_exactly_one():
    cut = cut_tree(random_tree(), "by-count", 2)
    state = assign_taxonomy(cut, {0: "IIb", 1: "IIa"})
    target = state.entity_ids[cut.groups[0][0]]
    updated = apply_override(
        state, OverrideEntry("entity", target, "Ia", "metropolitan hierarchy", author="rm")
    )
    changed = [
        (a, b) for a, b in zip(state.effective, updated.effective) if a != b
    ]
    assert len(changed) == 1
    assert updated.label_of_id(target) == "Ia"
    assert updated.ledger[-1].from_label == "IIb"
    assert updated.ledger[-1].timestamp


def test_override_group_moves_all_members():
    cut = cut_tree(random_tree(), "by-count", 3)
    state = assign_taxonomy(cut, {0: "IIa", 1: "IIb", 2: "IIIa"})
    updated = apply_override(state, OverrideEntry("group", 1, "IIIc", "remote location"))
    for pos in cut.groups[1]:
        assert updated.effective[pos] == "IIIc"


def test_override_errors():
    state = assign_taxonomy(cut_tree(random_tree(), "by-count", 1), {0: "Ia"})
    with pytest.raises(UnknownEntity):
        apply_override(state, OverrideEntry("entity", 9999, "Ib", "r"))
    with pytest.raises(UnknownLabel):
        apply_override(state, OverrideEntry("entity", state.entity_ids[0], "Zz", "r"))
    with pytest.raises(UnknownEntity):
        apply_override(state, OverrideEntry("group", 5, "Ib", "r"))


def test_ledger_replay_reproduces_effective_assignment():
    cut = cut_tree(random_tree(n=25, seed=47), "by-count", 4)
    state = assign_taxonomy(cut, {0: "Ia", 1: "IIa", 2: "IIb", 3: "IIIa"})
    rng = np.random.default_rng(49)
    for _ in range(6):
        target = state.entity_ids[int(rng.integers(0, 25))]
        to_label = DEFAULT_LABELS[int(rng.integers(0, 7))]
        state = apply_override(state, OverrideEntry("entity", target, to_label, "shuffle"))
    assert replay_ledger(state).effective == state.effective
    # Any prefix yields a valid partition over all entities.
    for upto in range(len(state.ledger) + 1):
        partial = replay_ledger(state, upto=upto)
        assert len(partial.effective) == 25
        assert all(lab in state.labels for lab in partial.effective)


def test_taxonomy_state_json_round_trip():
    cut = cut_tree(random_tree(), "by-count", 2)
    state = assign_taxonomy(cut, {0: "Ia", 1: "IIb"})
    state = apply_override(state, OverrideEntry("entity", state.entity_ids[3], "IIIa", "r", author="x"))
    doc = json.loads(state.to_json())
    back = TaxonomyState.from_dict(doc)
    assert back.effective == state.effective
    assert [e.as_dict() for e in back.ledger] == [e.as_dict() for e in state.ledger]


def test_taxonomy_from_labels_round_trip(fixture366):
    _, labels = fixture366
    state = taxonomy_from_labels(labels)
    assert list(state.effective) == labels


# -- NL2 -----------------------------------------------------------------------


def complemented_matrix(seed=51, n=10):
    schema = default_schema()
    rng = np.random.default_rng(seed)
    dataset = make_dataset(rng.uniform(0.0, 100.0, size=(n, 15)), schema=schema)
    return apply_direction_complement(minmax_normalize(dataset), schema)


def test_nl2_all_hundred_and_zero():
    schema = default_schema()
    nm = complemented_matrix()
    z = np.full((2, 15), 100.0)
    hot = nm.__class__(
        z=z, mins=nm.mins, maxs=nm.maxs, complemented=nm.complemented, codes=nm.codes
    )
    cfg = default_weights(schema)
    values = nl2(hot, cfg).values
    assert values == (100.0, 100.0)
    zero = nm.__class__(
        z=np.zeros((2, 15)), mins=nm.mins, maxs=nm.maxs, complemented=nm.complemented, codes=nm.codes
    )
    assert nl2(zero, cfg).values == (0.0, 0.0)


def test_nl2_two_attribute_toy():
    z = np.array([[60.0, 80.0]])
    nm_cls = complemented_matrix().__class__
    nm = nm_cls(
        z=z,
        mins=np.zeros(2),
        maxs=np.ones(2),
        complemented=np.array([False, False]),
        codes=("x1", "x2"),
    )
    result = nl2(nm, IndicatorConfig(weights=(0.5, 0.5)))
    assert result.values[0] == pytest.approx(math.sqrt(5000.0), abs=1e-12)


def test_nl2_one_hot_weight_exact():
    nm = complemented_matrix(seed=53)
    for a in (0, 4, 14):
        w = [0.0] * 15
        w[a] = 1.0
        values = nl2(nm, IndicatorConfig(weights=tuple(w))).values
        assert values == tuple(nm.z[:, a])


def test_nl2_weight_validation():
    with pytest.raises(WeightsNotNormalized):
        IndicatorConfig(weights=(0.5, 0.6))
    with pytest.raises(WeightsNotNormalized):
        IndicatorConfig(weights=(-0.5, 1.5))
    with pytest.raises(WeightsNotNormalized):
        nl2(complemented_matrix(), IndicatorConfig(weights=(0.5, 0.5)))


def test_nl2_summaries_per_label():
    nm = complemented_matrix(seed=57, n=8)
    state = taxonomy_from_labels(["Ia"] * 4 + ["IIb"] * 4)
    result = nl2(nm, default_weights(default_schema()), state)
    assert set(result.per_label) == {"Ia", "IIb"}
    for summary in result.per_label.values():
        assert summary["min"] <= summary["median"] <= summary["max"]


def test_default_weights_emphasize_five_attributes():
    schema = default_schema()
    cfg = default_weights(schema)
    assert sum(cfg.weights) == pytest.approx(1.0, abs=1e-15)
    for i, attr in enumerate(schema.attributes):
        expected = 0.10 if attr.code in ("x1", "x3", "x5", "x8", "x13") else 0.05
        assert cfg.weights[i] == pytest.approx(expected, abs=1e-15)


def test_label_category_rollup():
    assert label_category("Ia") == "I"
    assert label_category("IIIc") == "III"
    assert label_category("G5") == "G5"


def test_partition_report_single_label():
    state = taxonomy_from_labels(["Ia"] * 6)
    report = partition_report(state)
    assert len(report.rows) == 1
    assert report.rows[0]["share"] == 100.0


def test_partition_report_fixture_counts(fixture366):
    dataset, labels = fixture366
    state = taxonomy_from_labels(labels, entity_ids=dataset.ids)
    pops = {eid: dataset.populations[i] for i, eid in enumerate(dataset.ids)}
    report = partition_report(state, populations=pops)
    counts = {r["label"]: r["count"] for r in report.rows}
    assert counts == {"Ia": 23, "Ib": 4, "IIa": 159, "IIb": 140, "IIIa": 12, "IIIb": 20, "IIIc": 8}
    cat = {c["category"]: c for c in report.categories}
    assert (cat["I"]["count"], cat["II"]["count"], cat["III"]["count"]) == (27, 299, 40)
    assert report.total_entities == 366
    assert cat["I"]["population_share"] == pytest.approx(22.46, abs=0.01)
    assert cat["II"]["population_share"] == pytest.approx(73.68, abs=0.01)
    assert cat["III"]["population_share"] == pytest.approx(3.86, abs=0.01)
