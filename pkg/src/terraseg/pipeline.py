"""Batch pipeline: dataset file in, analysis artifacts out.

One run writes, into the output directory:

* ``assignments.csv``  - id, name, label, nl2 per entity
* ``nl2.csv``          - id, nl2
* ``stats.json``       - partition report, per-category stats, profiles, summaries
* ``dendrogram.svg`` and ``nl2_scatter.svg`` (plus ``radial.svg`` and
  ``boxplot.svg`` with ``charts="all"``)
* ``manifest.json``    - config echo, input digest, tool version, artifact digests

Every artifact carries the provenance (configuration echo) and none carries a
timestamp, so re-running on identical inputs reproduces identical bytes.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .charts import render_chart
from .cluster import LINKAGES, agglomerate, pairwise_distances
from .dataset import parse_dataset, validate_dataset
from .errors import ConfigError, DataError, Diagnostic
from .normalize import apply_direction_complement, minmax_normalize
from .stats import QUARTILE_RULE, WHISKER_RULE, category_means, radial_profile
from .taxonomy import (
    IndicatorConfig,
    assign_taxonomy,
    cut_tree,
    default_weights,
    nl2,
    partition_report,
)

DEFAULT_CHART_KINDS = ("dendrogram", "nl2-scatter")
ALL_CHART_KINDS = ("dendrogram", "nl2-scatter", "radial", "boxplot")


@dataclass(frozen=True)
class PipelineConfig:
    input_path: str
    format: str = "csv"
    linkage: str = "ward"
    cut_mode: str = "by-count"
    cut_value: float = 7
    weights: tuple[float, ...] | None = None
    label_map_path: str | None = None
    out_dir: str = "out"
    decimal_comma: bool = False
    impute_missing: bool = False
    charts: str = "default"  # "default" | "all"
    cluster_on: str = "normalized"  # "normalized" | "raw"
    closeness_threshold: float = 5.0

    def validate(self) -> None:
        if not Path(self.input_path).exists():
            raise ConfigError(f"input file does not exist: {self.input_path}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.linkage not in LINKAGES:
            raise ConfigError(f"linkage must be one of {LINKAGES}, got {self.linkage!r}")
        if self.cut_mode not in ("by-count", "by-height"):
            raise ConfigError(f"cut mode must be by-count or by-height, got {self.cut_mode!r}")
        if self.cut_mode == "by-count" and int(self.cut_value) < 1:
            raise ConfigError(f"by-count cut needs k >= 1, got {self.cut_value}")
        if self.cut_mode == "by-height" and self.cut_value < 0:
            raise ConfigError(f"by-height cut needs a threshold >= 0, got {self.cut_value}")
        if self.charts not in ("default", "all"):
            raise ConfigError(f"charts must be default or all, got {self.charts!r}")
        if self.cluster_on not in ("normalized", "raw"):
            raise ConfigError(f"cluster_on must be normalized or raw, got {self.cluster_on!r}")
        if self.weights is not None and any(w < 0 for w in self.weights):
            raise ConfigError("weights must be non-negative")
        if self.label_map_path is not None and not Path(self.label_map_path).exists():
            raise ConfigError(f"label map file does not exist: {self.label_map_path}")

    def as_dict(self) -> dict:
        d = asdict(self)
        d["weights"] = list(self.weights) if self.weights is not None else None
        return d


@dataclass(frozen=True)
class PipelineResult:
    out_dir: Path
    artifacts: tuple[Path, ...]
    diagnostics: tuple[Diagnostic, ...] = field(default=(), compare=False)


def _provenance(cfg: PipelineConfig, input_digest: str) -> dict:
    return {
        "tool": "terraseg",
        "version": __version__,
        "config": cfg.as_dict(),
        "input_sha256": input_digest,
    }


def _write_csv(path: Path, header: list[str], rows: list[list], provenance: dict) -> None:
    buf = io.StringIO()
    buf.write("# provenance: " + json.dumps(provenance, sort_keys=True) + "\r\n")
    writer = csv.writer(buf)
    writer.writerow(header)
    writer.writerows(rows)
    path.write_text(buf.getvalue(), encoding="utf-8", newline="")


def run_pipeline(cfg: PipelineConfig) -> PipelineResult:
    """Execute the full segmentation pipeline described by the config."""
    cfg.validate()
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    dataset = parse_dataset(
        cfg.input_path,
        format=cfg.format,
        decimal_comma=cfg.decimal_comma,
        impute_missing=cfg.impute_missing,
    )
    problems = validate_dataset(dataset)
    hard = [p for p in problems if p.rule in ("non-finite value", "value-count-mismatch")]
    if hard:
        raise DataError(
            "dataset failed validation: "
            + "; ".join(f"{p.rule} (entity {p.entity_id}, {p.attribute})" for p in hard[:5])
        )

    normalized = minmax_normalize(dataset)
    complemented = apply_direction_complement(normalized, dataset.schema)
    cluster_input = complemented if cfg.cluster_on == "normalized" else dataset.matrix()
    distances = pairwise_distances(cluster_input)
    tree = agglomerate(distances, linkage=cfg.linkage)
    cut = cut_tree(tree, cfg.cut_mode, cfg.cut_value)

    if cfg.label_map_path is not None:
        raw_map = json.loads(Path(cfg.label_map_path).read_text(encoding="utf-8"))
        mapping = {int(g): str(lab) for g, lab in raw_map.items()}
    else:
        mapping = {gid: f"G{gid}" for gid in cut.groups}
    state = assign_taxonomy(cut, mapping, entity_ids=dataset.ids)

    weights = (
        IndicatorConfig(weights=cfg.weights)
        if cfg.weights is not None
        else default_weights(dataset.schema)
    )
    indicator = nl2(complemented, weights, state)

    stats = category_means(dataset.matrix(), state, dataset.schema.codes, scale="raw")
    profiles = radial_profile(stats)
    report = partition_report(
        state,
        populations=(
            {eid: dataset.populations[i] for i, eid in enumerate(dataset.ids)}
            if dataset.populations is not None
            else None
        ),
    )

    input_digest = hashlib.sha256(Path(cfg.input_path).read_bytes()).hexdigest()
    provenance = _provenance(cfg, input_digest)
    artifacts: list[Path] = []

    path = out_dir / "assignments.csv"
    _write_csv(
        path,
        ["id", "name", "label", "nl2"],
        [
            [e.id, e.name, state.effective[i], repr(indicator.values[i])]
            for i, e in enumerate(dataset.entities)
        ],
        provenance,
    )
    artifacts.append(path)

    path = out_dir / "nl2.csv"
    _write_csv(
        path,
        ["id", "nl2"],
        [[e.id, repr(indicator.values[i])] for i, e in enumerate(dataset.entities)],
        provenance,
    )
    artifacts.append(path)

    stats_doc = {
        "provenance": provenance,
        "metadata": {
            "quartile_rule": QUARTILE_RULE,
            "whisker_rule": WHISKER_RULE,
            "means_scale": stats.scale,
            "linkage": cfg.linkage,
        },
        "partition": report.as_dict(),
        "category_stats": stats.as_dict(),
        "radial_profiles": profiles,
        "indicator": {"weights": list(weights.weights), "per_label": indicator.per_label},
        "diagnostics": [d.as_dict() for d in (*dataset.diagnostics, *normalized.diagnostics, *problems)],
    }
    path = out_dir / "stats.json"
    path.write_text(json.dumps(stats_doc, indent=2, sort_keys=True), encoding="utf-8")
    artifacts.append(path)

    kinds = DEFAULT_CHART_KINDS if cfg.charts == "default" else ALL_CHART_KINDS
    chart_inputs = {
        "dendrogram": {
            "tree": tree,
            "leaf_names": [str(e.id) for e in dataset.entities],
            "cut_height": (
                None
                if cfg.cut_mode == "by-count"
                else float(cfg.cut_value)
            ),
        },
        "nl2-scatter": {
            "entity_ids": list(dataset.ids),
            "values": list(indicator.values),
            "labels": list(state.effective),
        },
        "radial": {"profiles": profiles["profiles"]},
        "boxplot": {
            "stats": {
                lab: [b.as_dict() for b in boxes] for lab, boxes in stats.boxplots.items()
            },
            "codes": list(dataset.schema.codes),
        },
    }
    for kind in kinds:
        doc = render_chart(kind, chart_inputs[kind], provenance)
        svg = doc.svg + ("<!-- provenance: " + json.dumps(provenance, sort_keys=True) + " -->\n").encode()
        path = out_dir / (kind.replace("-", "_") + ".svg")
        path.write_bytes(svg)
        artifacts.append(path)

    manifest = {
        "provenance": provenance,
        "artifacts": {
            p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in sorted(artifacts)
        },
    }
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True), encoding="utf-8")
    artifacts.append(path)

    all_diagnostics = (*dataset.diagnostics, *normalized.diagnostics, *stats.diagnostics, *problems)
    return PipelineResult(out_dir=out_dir, artifacts=tuple(artifacts), diagnostics=all_diagnostics)
