"""Per-category statistics: means, box-plot summaries, radial profiles,
and side-by-side entity comparisons.

Quartiles use the median-of-halves rule with the median element included in
both halves when the count is odd (Tukey hinges); whiskers reach the most
extreme data points within 1.5 IQR of the quartiles and anything beyond is an
outlier. Both conventions are echoed into report metadata because tools
disagree on them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .errors import Diagnostic, EmptyInput, UnknownEntity
from .taxonomy import IndicatorResult, TaxonomyState

QUARTILE_RULE = "median-of-halves, median included in both halves (Tukey hinges)"
WHISKER_RULE = "most extreme data points within 1.5*IQR of the quartiles; points beyond are outliers"


@dataclass(frozen=True)
class BoxplotSummary:
    q1: float
    median: float
    q3: float
    whisker_low: float
    whisker_high: float
    outliers: tuple[tuple[int, float], ...]  # (position in input, value)

    def as_dict(self) -> dict:
        return {
            "q1": self.q1,
            "median": self.median,
            "q3": self.q3,
            "whisker_low": self.whisker_low,
            "whisker_high": self.whisker_high,
            "outliers": [[i, v] for i, v in self.outliers],
        }


def _median_sorted(s: list[float]) -> float:
    n = len(s)
    mid = n // 2
    return s[mid] if n % 2 else (s[mid - 1] + s[mid]) / 2.0


def boxplot_stats(values) -> BoxplotSummary:
    """Five-number summary plus outliers for one list of values."""
    vals = [float(v) for v in values]
    if not vals:
        raise EmptyInput("cannot summarize an empty list")
    order = sorted(range(len(vals)), key=lambda i: vals[i])
    s = [vals[i] for i in order]
    n = len(s)
    med = _median_sorted(s)
    if n == 1:
        q1 = q3 = med
    elif n % 2:
        q1 = _median_sorted(s[: n // 2 + 1])
        q3 = _median_sorted(s[n // 2 :])
    else:
        q1 = _median_sorted(s[: n // 2])
        q3 = _median_sorted(s[n // 2 :])
    iqr = q3 - q1
    lo = q1 - 1.5 * iqr
    hi = q3 + 1.5 * iqr
    inside = [v for v in s if lo <= v <= hi]
    whisker_low = inside[0]
    whisker_high = inside[-1]
    outliers = tuple((i, vals[i]) for i in order if vals[i] < lo or vals[i] > hi)
    return BoxplotSummary(
        q1=q1,
        median=med,
        q3=q3,
        whisker_low=whisker_low,
        whisker_high=whisker_high,
        outliers=outliers,
    )


@dataclass(frozen=True)
class CategoryStats:
    """Per-label, per-attribute means and box-plot summaries."""

    labels: tuple[str, ...]
    codes: tuple[str, ...]
    means: dict[str, tuple[float, ...]]  # label -> one mean per attribute
    boxplots: dict[str, tuple[BoxplotSummary, ...]]
    scale: str  # "raw" | "normalized"
    diagnostics: tuple[Diagnostic, ...] = field(default=(), compare=False)

    def as_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "codes": list(self.codes),
            "scale": self.scale,
            "means": {lab: list(m) for lab, m in self.means.items()},
            "boxplots": {
                lab: [b.as_dict() for b in boxes] for lab, boxes in self.boxplots.items()
            },
        }


def category_means(
    matrix: np.ndarray,
    ts: TaxonomyState,
    codes: tuple[str, ...],
    scale: str = "raw",
) -> CategoryStats:
    """Arithmetic mean and box-plot summary per label per attribute.

    A label that is mapped but currently has no members is reported through a
    diagnostic instead of being averaged.
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape[0] != ts.n_entities:
        raise ValueError(f"matrix has {matrix.shape[0]} rows for {ts.n_entities} entities")
    diagnostics: list[Diagnostic] = []
    means: dict[str, tuple[float, ...]] = {}
    boxplots: dict[str, tuple[BoxplotSummary, ...]] = {}
    labels = ts.present_labels()
    for label in labels:
        members = list(ts.members_of_label(label))
        if not members:
            diagnostics.append(
                Diagnostic(rule="empty-label", message=f"label {label!r} has no members")
            )
            continue
        sub = matrix[members]
        means[label] = tuple(float(v) for v in sub.mean(axis=0))
        summaries = []
        for a in range(matrix.shape[1]):
            summary = boxplot_stats(sub[:, a])
            # Translate outlier positions from group-local to entity ids.
            summaries.append(
                BoxplotSummary(
                    q1=summary.q1,
                    median=summary.median,
                    q3=summary.q3,
                    whisker_low=summary.whisker_low,
                    whisker_high=summary.whisker_high,
                    outliers=tuple(
                        (ts.entity_ids[members[i]], v) for i, v in summary.outliers
                    ),
                )
            )
        boxplots[label] = tuple(summaries)
    return CategoryStats(
        labels=tuple(lab for lab in labels if lab in means),
        codes=codes,
        means=means,
        boxplots=boxplots,
        scale=scale,
        diagnostics=tuple(diagnostics),
    )


def radial_profile(stats: CategoryStats) -> dict:
    """Per-label polygon data: label means min-max scaled across labels per attribute.

    With a single label every vertex collapses to 0 and a degenerate-profile
    diagnostic is attached under the "diagnostics" key.
    """
    labels = [lab for lab in stats.labels if lab in stats.means]
    p = len(stats.codes)
    profiles: dict[str, list] = {lab: [] for lab in labels}
    notes: list[dict] = []
    for a in range(p):
        col = [stats.means[lab][a] for lab in labels]
        lo, hi = min(col), max(col)
        span = hi - lo
        if span == 0.0:
            notes.append(
                {
                    "rule": "degenerate-profile-attribute",
                    "attribute": stats.codes[a],
                    "message": "identical means across labels scale to 0",
                }
            )
        for lab, v in zip(labels, col):
            scaled = 0.0 if span == 0.0 else (v - lo) / span * 100.0
            profiles[lab].append([stats.codes[a], scaled])
    return {"labels": labels, "codes": list(stats.codes), "profiles": profiles, "diagnostics": notes}


@dataclass(frozen=True)
class ComparisonTable:
    """Raw values, labels, and indicator values for a handful of entities."""

    entity_ids: tuple[int, ...]
    names: tuple[str, ...]
    labels: tuple[str, ...]
    nl2_values: tuple[float, ...]
    codes: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]  # one row per attribute, one column per entity
    close_attributes: tuple[str, ...]  # attributes whose spread is below the threshold
    threshold: float

    def as_dict(self) -> dict:
        return {
            "entity_ids": list(self.entity_ids),
            "names": list(self.names),
            "labels": list(self.labels),
            "nl2": list(self.nl2_values),
            "codes": list(self.codes),
            "values": [list(r) for r in self.values],
            "close_attributes": list(self.close_attributes),
            "threshold": self.threshold,
        }


def compare_entities(
    ids: list[int],
    d: Dataset,
    ts: TaxonomyState,
    ind: IndicatorResult | None = None,
    closeness_threshold: float = 5.0,
) -> ComparisonTable:
    """Side-by-side comparison, flagging attributes too close to tell entities apart."""
    positions = []
    for entity_id in ids:
        try:
            positions.append(d.index_of_id(entity_id))
        except KeyError:
            raise UnknownEntity(f"no entity with id {entity_id}") from None
    matrix = d.matrix()
    rows = []
    close = []
    for a, code in enumerate(d.schema.codes):
        vals = tuple(float(matrix[pos, a]) for pos in positions)
        rows.append(vals)
        if max(vals) - min(vals) < closeness_threshold:
            close.append(code)
    return ComparisonTable(
        entity_ids=tuple(ids),
        names=tuple(d.entities[pos].name for pos in positions),
        labels=tuple(ts.effective[pos] for pos in positions),
        nl2_values=tuple(
            float(ind.values[pos]) if ind is not None else float("nan") for pos in positions
        ),
        codes=d.schema.codes,
        values=tuple(rows),
        close_attributes=tuple(close),
        threshold=closeness_threshold,
    )
