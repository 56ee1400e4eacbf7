"""SVG emitters: structure counts and byte determinism."""

from __future__ import annotations

import numpy as np
import pytest

from terraseg.charts import render_chart
from terraseg.cluster import agglomerate, pairwise_distances
from terraseg.errors import InconsistentInput
from terraseg.stats import category_means, radial_profile
from terraseg.synthetic import benchmark_dataset
from terraseg.taxonomy import taxonomy_from_labels


def three_leaf_tree():
    return agglomerate(pairwise_distances(np.array([[0.0], [1.0], [10.0]])), "single")


def test_dendrogram_structure_counts():
    doc = render_chart("dendrogram", {"tree": three_leaf_tree(), "leaf_names": ["a", "b", "c"]})
    svg = doc.svg.decode()
    assert svg.count('class="leaf-label"') == 3
    assert svg.count('class="junction"') == 2


def test_dendrogram_cut_line():
    doc = render_chart(
        "dendrogram",
        {"tree": three_leaf_tree(), "leaf_names": ["a", "b", "c"], "cut_height": 10.0},
    )
    assert doc.svg.decode().count('class="cut-line"') == 1


def test_scatter_point_and_legend_counts():
    dataset, labels = benchmark_dataset()
    rng = np.random.default_rng(71)
    values = rng.uniform(0.0, 100.0, size=366)
    doc = render_chart(
        "nl2-scatter",
        {"entity_ids": list(dataset.ids), "values": list(values), "labels": labels},
    )
    svg = doc.svg.decode()
    assert svg.count('class="point"') == 366
    assert svg.count('class="legend-entry"') == 7


def test_scatter_highlights():
    doc = render_chart(
        "nl2-scatter",
        {
            "entity_ids": [1, 2, 3],
            "values": [10.0, 20.0, 30.0],
            "labels": ["Ia", "Ia", "Ib"],
            "highlight_ids": [2],
        },
    )
    assert doc.svg.decode().count('class="highlight"') == 1


def test_radial_profile_polygons():
    dataset, labels = benchmark_dataset()
    state = taxonomy_from_labels(labels, entity_ids=dataset.ids)
    stats = category_means(dataset.matrix(), state, dataset.schema.codes)
    doc = render_chart("radial", {"profiles": radial_profile(stats)["profiles"]})
    assert doc.svg.decode().count('class="profile"') == 7


def test_boxplot_grid():
    dataset, labels = benchmark_dataset()
    state = taxonomy_from_labels(labels, entity_ids=dataset.ids)
    stats = category_means(dataset.matrix(), state, dataset.schema.codes)
    doc = render_chart(
        "boxplot",
        {
            "stats": {lab: [b.as_dict() for b in boxes] for lab, boxes in stats.boxplots.items()},
            "codes": list(dataset.schema.codes),
        },
    )
    assert doc.svg.decode().count('class="box"') == 7 * 15


def test_byte_determinism():
    inputs = {
        "entity_ids": [1, 2, 3, 4],
        "values": [5.0, 15.0, 25.0, 35.0],
        "labels": ["Ia", "Ib", "Ia", "Ib"],
    }
    first = render_chart("nl2-scatter", inputs)
    second = render_chart("nl2-scatter", inputs)
    assert first.svg == second.svg
    tree_inputs = {"tree": three_leaf_tree(), "leaf_names": ["a", "b", "c"]}
    assert render_chart("dendrogram", tree_inputs).svg == render_chart("dendrogram", tree_inputs).svg


def test_inconsistent_inputs_rejected():
    with pytest.raises(InconsistentInput):
        render_chart("volcano", {})
    with pytest.raises(InconsistentInput):
        render_chart("dendrogram", {})
    with pytest.raises(InconsistentInput):
        render_chart("dendrogram", {"tree": three_leaf_tree(), "leaf_names": ["just one"]})
    with pytest.raises(InconsistentInput):
        render_chart(
            "nl2-scatter", {"entity_ids": [1, 2], "values": [1.0], "labels": ["Ia", "Ib"]}
        )
