"""Flat cuts of the merge tree, the category taxonomy, and the NL2 indicator.

A Cut partitions entities into groups either at a height or into exactly k
groups. Groups are numbered 0..g-1 ordered by their smallest member position,
so a re-run over the same data yields the same ids. A TaxonomyState maps
groups onto category labels (the shipped palette is Ia, Ib, IIa, IIb, IIIa,
IIIb, IIIc) and layers an append-only ledger of specialist overrides on top;
replaying the ledger from the base state always reproduces the effective
assignment.

NL2 is the weighted Euclidean norm of an entity's complemented, normalized
attribute vector: sqrt(sum_a z[a]^2 * w[a]) with the weights summing to 1,
which keeps the indicator inside [0, 100]. It is used to check that the
categories built actually separate.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone

import numpy as np

from .cluster import MergeTree
from .errors import (
    InvalidK,
    NegativeThreshold,
    UnknownEntity,
    UnknownLabel,
    UnmappedGroup,
    WeightsNotNormalized,
)
from .normalize import NormalizedMatrix
from .schema import AttributeSchema

DEFAULT_LABELS = ("Ia", "Ib", "IIa", "IIb", "IIIa", "IIIb", "IIIc")

# Attributes given twice the base weight in the shipped indicator config.
EMPHASIZED_CODES = ("x1", "x3", "x5", "x8", "x13")

_ROMAN = {"I": 1, "II": 2, "III": 3, "IV": 4, "V": 5, "VI": 6, "VII": 7, "VIII": 8, "IX": 9, "X": 10}
_LABEL_RE = re.compile(r"^([IVX]+)([a-z]*)$")
_NATURAL_RE = re.compile(r"^(\D*)(\d+)$")


def label_category(label: str) -> str:
    """Roll a subcategory label up to its category: 'IIa' -> 'II'; otherwise identity."""
    m = _LABEL_RE.match(label)
    return m.group(1) if m else label


def label_sort_key(label: str) -> tuple:
    m = _LABEL_RE.match(label)
    if m and m.group(1) in _ROMAN:
        return (0, _ROMAN[m.group(1)], m.group(2))
    m = _NATURAL_RE.match(label)
    if m:
        return (1, m.group(1), int(m.group(2)))
    return (2, label, 0)


@dataclass(frozen=True)
class Cut:
    """A flat partition of the entities derived from the merge tree."""

    mode: str  # "by-height" | "by-count"
    threshold: float | None
    k: int | None
    assignment: tuple[int, ...]  # entity position -> group id
    groups: dict[int, tuple[int, ...]]  # group id -> member positions

    @property
    def n_groups(self) -> int:
        return len(self.groups)

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "threshold": self.threshold,
            "k": self.k,
            "assignment": list(self.assignment),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Cut":
        return _cut_from_assignment(
            d["mode"],
            d.get("threshold"),
            d.get("k"),
            list(d["assignment"]),
            renumber=False,
        )


def _cut_from_assignment(
    mode: str,
    threshold: float | None,
    k: int | None,
    raw_assignment: list[int],
    renumber: bool = True,
) -> Cut:
    members: dict[int, list[int]] = {}
    for pos, g in enumerate(raw_assignment):
        members.setdefault(g, []).append(pos)
    ordered = sorted(members.values(), key=min)
    if renumber:
        groups = {gid: tuple(mem) for gid, mem in enumerate(ordered)}
    else:
        groups = {raw_assignment[mem[0]]: tuple(mem) for mem in ordered}
    assignment = [0] * len(raw_assignment)
    for gid, mem in groups.items():
        for pos in mem:
            assignment[pos] = gid
    return Cut(mode=mode, threshold=threshold, k=k, assignment=tuple(assignment), groups=groups)


def cut_tree(t: MergeTree, mode: str, value: float) -> Cut:
    """Cut the tree at a height or into exactly k groups.

    by-height severs every merge with height strictly above the threshold;
    by-count keeps only the first n-k merges, which yields exactly k groups
    on any tree, monotone or not.
    """
    n = t.n_leaves
    if mode == "by-count":
        k = int(value)
        if not 1 <= k <= n:
            raise InvalidK(f"k must be in [1, {n}], got {value}")
        kept = [True] * (n - k) + [False] * (k - 1)
        threshold = None
    elif mode == "by-height":
        threshold = float(value)
        if threshold < 0:
            raise NegativeThreshold(f"threshold must be >= 0, got {value}")
        kept = [m.height <= threshold for m in t.merges]
        k = None
    else:
        raise ValueError(f"unknown cut mode {mode!r}")

    # Components over all 2n-1 node ids; a severed merge contributes no union,
    # so its internal node id never collects the leaves beneath it.
    comp = list(range(2 * n - 1))

    def cfind(x: int) -> int:
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for idx, m in enumerate(t.merges):
        if kept[idx]:
            node = n + idx
            comp[cfind(m.left)] = node
            comp[cfind(m.right)] = node

    raw = [cfind(i) for i in range(n)]
    return _cut_from_assignment(mode, threshold, k, raw)


@dataclass(frozen=True)
class OverrideEntry:
    """One specialist reassignment: who moved what where, and why."""

    target_kind: str  # "entity" | "group"
    target: int  # entity id or group id
    to_label: str
    rationale: str
    author: str = ""
    from_label: str = ""
    timestamp: str = ""

    def as_dict(self) -> dict:
        return {
            "target_kind": self.target_kind,
            "target": self.target,
            "from_label": self.from_label,
            "to_label": self.to_label,
            "author": self.author,
            "rationale": self.rationale,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "OverrideEntry":
        return cls(
            target_kind=d["target_kind"],
            target=int(d["target"]),
            to_label=d["to_label"],
            rationale=d.get("rationale", ""),
            author=d.get("author", ""),
            from_label=d.get("from_label", ""),
            timestamp=d.get("timestamp", ""),
        )


@dataclass(frozen=True)
class TaxonomyState:
    """Base cut + category map + override ledger = effective assignment."""

    base_cut: Cut
    category_map: dict[int, str]
    entity_ids: tuple[int, ...]
    labels: tuple[str, ...]
    ledger: tuple[OverrideEntry, ...] = ()
    effective: tuple[str, ...] = ()  # entity position -> label

    @property
    def n_entities(self) -> int:
        return len(self.entity_ids)

    def label_of_id(self, entity_id: int) -> str:
        return self.effective[self._pos_of(entity_id)]

    def _pos_of(self, entity_id: int) -> int:
        try:
            return self.entity_ids.index(entity_id)
        except ValueError:
            raise UnknownEntity(f"no entity with id {entity_id}") from None

    def members_of_label(self, label: str) -> tuple[int, ...]:
        return tuple(pos for pos, lab in enumerate(self.effective) if lab == label)

    def present_labels(self) -> tuple[str, ...]:
        seen = set(self.effective) | set(self.category_map.values())
        return tuple(sorted(seen, key=label_sort_key))

    def as_dict(self) -> dict:
        return {
            "base_cut": self.base_cut.as_dict(),
            "category_map": {str(g): lab for g, lab in sorted(self.category_map.items())},
            "entity_ids": list(self.entity_ids),
            "labels": list(self.labels),
            "ledger": [e.as_dict() for e in self.ledger],
            "effective": list(self.effective),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TaxonomyState":
        base = assign_taxonomy(
            Cut.from_dict(d["base_cut"]),
            {int(g): lab for g, lab in d["category_map"].items()},
            entity_ids=tuple(int(i) for i in d["entity_ids"]),
            labels=tuple(d["labels"]),
        )
        state = base
        for entry in d.get("ledger", []):
            state = apply_override(state, OverrideEntry.from_dict(entry))
        if list(state.effective) != list(d["effective"]):
            raise ValueError("ledger replay does not reproduce the stored effective assignment")
        return state

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)


def assign_taxonomy(
    cut: Cut,
    mapping: dict[int, str],
    entity_ids: tuple[int, ...] | None = None,
    labels: tuple[str, ...] | None = None,
) -> TaxonomyState:
    """Map every cut group onto a label; the ledger starts empty."""
    for gid in cut.groups:
        if gid not in mapping:
            raise UnmappedGroup(gid)
    n = len(cut.assignment)
    ids = entity_ids if entity_ids is not None else tuple(range(1, n + 1))
    if len(ids) != n:
        raise ValueError(f"{len(ids)} entity ids for {n} entities")
    palette = list(labels) if labels is not None else list(DEFAULT_LABELS)
    for lab in mapping.values():
        if lab not in palette:
            palette.append(lab)
    effective = tuple(mapping[g] for g in cut.assignment)
    return TaxonomyState(
        base_cut=cut,
        category_map=dict(mapping),
        entity_ids=ids,
        labels=tuple(palette),
        ledger=(),
        effective=effective,
    )


def taxonomy_from_labels(
    labels_per_entity: list[str],
    entity_ids: tuple[int, ...] | None = None,
    labels: tuple[str, ...] | None = None,
) -> TaxonomyState:
    """Build a state directly from an externally supplied label per entity.

    Useful for importing an existing classification: the base cut is the
    partition induced by the labels themselves.
    """
    distinct = sorted(set(labels_per_entity), key=label_sort_key)
    gid_of = {lab: g for g, lab in enumerate(distinct)}
    raw = [gid_of[lab] for lab in labels_per_entity]
    cut = _cut_from_assignment("by-count", None, len(distinct), raw)
    mapping = {gid: labels_per_entity[members[0]] for gid, members in cut.groups.items()}
    return assign_taxonomy(cut, mapping, entity_ids=entity_ids, labels=labels)


def apply_override(ts: TaxonomyState, entry: OverrideEntry) -> TaxonomyState:
    """Append one ledger entry and recompute the effective assignment."""
    if entry.to_label not in ts.labels:
        raise UnknownLabel(f"label {entry.to_label!r} is not declared")
    if entry.target_kind == "entity":
        pos = ts._pos_of(entry.target)
        positions = (pos,)
        current = ts.effective[pos]
    elif entry.target_kind == "group":
        if entry.target not in ts.base_cut.groups:
            raise UnknownEntity(f"no group with id {entry.target}")
        positions = ts.base_cut.groups[entry.target]
        current = ts.effective[positions[0]]
    else:
        raise ValueError(f"unknown target kind {entry.target_kind!r}")

    stamped = replace(
        entry,
        from_label=entry.from_label or current,
        timestamp=entry.timestamp or datetime.now(timezone.utc).isoformat(),
    )
    effective = list(ts.effective)
    for pos in positions:
        effective[pos] = entry.to_label
    return TaxonomyState(
        base_cut=ts.base_cut,
        category_map=ts.category_map,
        entity_ids=ts.entity_ids,
        labels=ts.labels,
        ledger=ts.ledger + (stamped,),
        effective=tuple(effective),
    )


def replay_ledger(ts: TaxonomyState, upto: int | None = None) -> TaxonomyState:
    """Rebuild the state from the base cut and a ledger prefix."""
    base = assign_taxonomy(ts.base_cut, ts.category_map, entity_ids=ts.entity_ids, labels=ts.labels)
    entries = ts.ledger if upto is None else ts.ledger[:upto]
    state = base
    for entry in entries:
        state = apply_override(state, entry)
    return state


# -- NL2 separation indicator --------------------------------------------------


@dataclass(frozen=True)
class IndicatorConfig:
    """Non-negative attribute weights summing to 1."""

    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        w = np.array(self.weights)
        if (w < 0).any():
            raise WeightsNotNormalized("weights must be non-negative")
        if abs(float(w.sum()) - 1.0) > 1e-12:
            raise WeightsNotNormalized(f"weights sum to {w.sum()!r}, expected 1 within 1e-12")


def default_weights(schema: AttributeSchema) -> IndicatorConfig:
    """Twice the base weight on the emphasized attributes, uniform elsewhere.

    With the shipped 15-attribute schema this is 0.10 on the five emphasized
    codes and 0.05 on the other ten.
    """
    p = len(schema)
    emphasized = [i for i, a in enumerate(schema.attributes) if a.code in EMPHASIZED_CODES]
    n_emph = len(emphasized)
    base = 1.0 / (p + n_emph)
    w = [base] * p
    for i in emphasized:
        w[i] = 2.0 * base
    return IndicatorConfig(weights=tuple(w))


@dataclass(frozen=True)
class IndicatorResult:
    values: tuple[float, ...]
    weights: tuple[float, ...]
    per_label: dict[str, dict[str, float]] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "values": list(self.values),
            "weights": list(self.weights),
            "per_label": self.per_label,
        }


def nl2(
    z_complemented: NormalizedMatrix,
    cfg: IndicatorConfig,
    ts: TaxonomyState | None = None,
) -> IndicatorResult:
    """Weighted Euclidean norm per entity, plus per-label min/median/max."""
    w = np.array(cfg.weights)
    if w.shape[0] != z_complemented.n_attributes:
        raise WeightsNotNormalized(
            f"{w.shape[0]} weights for {z_complemented.n_attributes} attributes"
        )
    z = z_complemented.z
    values = np.sqrt((z * z * w).sum(axis=1))
    per_label: dict[str, dict[str, float]] = {}
    if ts is not None:
        for label in ts.present_labels():
            members = ts.members_of_label(label)
            if not members:
                continue
            vals = values[list(members)]
            per_label[label] = {
                "min": float(vals.min()),
                "median": float(np.median(vals)),
                "max": float(vals.max()),
                "count": float(len(members)),
            }
    return IndicatorResult(values=tuple(float(v) for v in values), weights=cfg.weights, per_label=per_label)


# -- partition arithmetic -------------------------------------------------------


@dataclass(frozen=True)
class PartitionReport:
    rows: tuple[dict, ...]  # one per label: label, category, count, share, population, population_share
    categories: tuple[dict, ...]  # rolled up by category prefix
    total_entities: int
    total_population: float | None

    def as_dict(self) -> dict:
        return {
            "rows": list(self.rows),
            "categories": list(self.categories),
            "total_entities": self.total_entities,
            "total_population": self.total_population,
        }


def partition_report(
    ts: TaxonomyState, populations: dict[int, float] | None = None
) -> PartitionReport:
    """Per-label entity counts and shares, with optional population sums.

    Counts are checked to sum to the entity total and shares to 100 within
    0.01; a violation means the state itself is corrupt, so it raises.
    """
    n = ts.n_entities
    labels = ts.present_labels()
    pop_of_pos: list[float] | None = None
    if populations is not None:
        pop_of_pos = [float(populations[eid]) for eid in ts.entity_ids]

    rows = []
    total_pop = sum(pop_of_pos) if pop_of_pos is not None else None
    for label in labels:
        members = ts.members_of_label(label)
        row: dict = {
            "label": label,
            "category": label_category(label),
            "count": len(members),
            "share": 100.0 * len(members) / n,
        }
        if pop_of_pos is not None:
            pop = sum(pop_of_pos[pos] for pos in members)
            row["population"] = pop
            row["population_share"] = 100.0 * pop / total_pop if total_pop else 0.0
        rows.append(row)

    if sum(r["count"] for r in rows) != n:
        raise ValueError("label counts do not sum to the entity total")
    if abs(sum(r["share"] for r in rows) - 100.0) > 0.01:
        raise ValueError("label shares do not sum to 100 within 0.01")

    cats: dict[str, dict] = {}
    for r in rows:
        c = cats.setdefault(
            r["category"],
            {"category": r["category"], "count": 0, "share": 0.0},
        )
        c["count"] += r["count"]
        c["share"] += r["share"]
        if "population" in r:
            c["population"] = c.get("population", 0.0) + r["population"]
            c["population_share"] = c.get("population_share", 0.0) + r["population_share"]
    categories = tuple(cats[k] for k in sorted(cats, key=label_sort_key))
    return PartitionReport(
        rows=tuple(rows),
        categories=categories,
        total_entities=n,
        total_population=total_pop,
    )
