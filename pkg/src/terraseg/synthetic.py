"""Synthetic benchmark dataset: 366 territorial entities across 7 categories.

The generator reproduces the published summary profile of the motivating
dataset (which is not itself distributable): the category sizes, the
per-category attribute means, the national population split, and three fully
published reference municipalities embedded verbatim at their original ids.
Sample means are forced exactly onto the reference means, so recovered
statistics match the seeds to float precision.

Run ``python -m terraseg.synthetic out.csv`` to write the fixture as CSV.
"""

from __future__ import annotations

import sys

import numpy as np

from .dataset import Dataset, EntityRecord, export_dataset
from .errors import Diagnostic
from .schema import default_schema

LABEL_COUNTS = {"Ia": 23, "Ib": 4, "IIa": 159, "IIb": 140, "IIIa": 12, "IIIb": 20, "IIIc": 8}

# Reference per-label means, one row per attribute x1..x15.
LABEL_MEANS = {
    "Ia":   (90.61, 99.60, 14.98, 4.09, 49.36, 59.43, 0.33, 7.03, 46.43, 78.15, 37.07, 89.98, 97.14, 57.80, 48.63),
    "Ib":   (76.80, 97.48, 18.63, 6.45, 64.50, 54.00, 3.76, 12.78, 54.25, 60.62, 96.64, 85.73, 92.85, 32.50, 23.40),
    "IIa":  (40.49, 81.78, 10.74, 4.22, 47.00, 55.52, 0.33, 7.32, 41.00, 44.60, 90.90, 70.50, 69.04, 7.12, 3.43),
    "IIb":  (66.41, 84.52, 27.60, 9.56, 67.66, 47.84, 0.15, 16.20, 61.14, 55.98, 95.80, 81.89, 80.29, 11.24, 5.58),
    "IIIa": (61.79, 85.63, 31.65, 10.01, 64.33, 64.33, 0.07, 14.78, 62.42, 56.39, 94.01, 74.89, 72.90, 9.99, 3.37),
    "IIIb": (49.02, 65.40, 29.66, 10.12, 68.80, 38.75, 0.14, 19.94, 63.75, 40.64, 89.94, 76.10, 70.99, 8.08, 3.46),
    "IIIc": (27.42, 22.79, 51.43, 14.03, 69.63, 34.50, 0.04, 21.51, 71.75, 35.02, 70.15, 65.75, 47.42, 3.34, 0.81),
}

# The x11 mean for Ia is far below every neighbouring label (92-97) and below
# Ia's otherwise favourable profile; it is reproduced as shipped and flagged.
ANOMALOUS_MEAN_CELLS = (("Ia", "x11"),)

# Three fully published reference entities: (id, name, parent, label, values x1..x15).
REFERENCE_ENTITIES = (
    (170, "Moran", "Lara", "IIb",
     (77.77, 69.80, 24.85, 9.06, 67.0, 54.0, 0.44, 15.05, 59.0, 49.37, 94.76, 77.33, 76.53, 12.15, 7.28)),
    (200, "Baruta", "Miranda", "Ia",
     (91.24, 99.90, 10.64, 3.0, 47.0, 54.0, 1.17, 5.56, 39.0, 74.75, 95.20, 90.17, 95.43, 50.20, 47.38)),
    (206, "El Hatillo", "Miranda", "Ia",
     (79.14, 98.39, 10.90, 3.19, 51.0, 50.0, 0.29, 6.39, 41.0, 74.59, 92.05, 86.13, 94.45, 46.07, 42.50)),
)

TOTAL_POPULATION = 28_500_000
CATEGORY_POPULATION_SHARES = {"I": 22.46, "II": 73.68, "III": 3.86}

_IDS_PINNED = {e[0]: e for e in REFERENCE_ENTITIES}


def _scattered_labels(rng: np.random.Generator) -> list[str]:
    """Shuffle the label multiset, then pin the three reference ids to their labels."""
    labels: list[str] = []
    for lab, count in LABEL_COUNTS.items():
        labels.extend([lab] * count)
    rng.shuffle(labels)
    for entity_id, (_, _, _, lab, _) in _IDS_PINNED.items():
        pos = entity_id - 1
        if labels[pos] != lab:
            swap = next(
                i for i, cur in enumerate(labels)
                if cur == lab and (i + 1) not in _IDS_PINNED
            )
            labels[pos], labels[swap] = labels[swap], labels[pos]
    return labels


def _exact_mean_column(
    rng: np.random.Generator,
    target: float,
    free_count: int,
    fixed_values: list[float],
    spread_cap: float = 3.0,
) -> np.ndarray:
    """Values whose combined mean with the fixed rows equals the target exactly.

    Free rows sit at an adjusted base (compensating for the fixed rows) plus
    symmetric deltas that cancel pairwise, keeping the column inside [0, 100].
    """
    m = free_count + len(fixed_values)
    correction = (m * target - sum(fixed_values)) / free_count - target
    base = target + correction
    cap = 0.9 * min(base, 100.0 - base, spread_cap)
    cap = max(cap, 0.0)
    half = free_count // 2
    deltas = rng.uniform(0.1 * cap, cap, size=half) if cap > 0 else np.zeros(half)
    column = np.full(free_count, base)
    column[:half] += deltas
    column[half : 2 * half] -= deltas
    perm = rng.permutation(free_count)
    return column[perm]


def _category_populations(rng: np.random.Generator, labels: list[str]) -> list[int]:
    """Integer populations per entity whose category sums hit the published split."""
    from .taxonomy import label_category

    totals = {
        cat: round(TOTAL_POPULATION * share / 100.0)
        for cat, share in CATEGORY_POPULATION_SHARES.items()
    }
    pops = [0] * len(labels)
    for cat, total in totals.items():
        positions = [i for i, lab in enumerate(labels) if label_category(lab) == cat]
        weights = rng.uniform(0.2, 1.0, size=len(positions))
        raw = weights / weights.sum() * total
        ints = np.floor(raw).astype(int)
        remainder = total - int(ints.sum())
        by_frac = np.argsort(-(raw - ints), kind="stable")
        for j in range(remainder):
            ints[by_frac[j]] += 1
        for pos, value in zip(positions, ints):
            pops[pos] = int(value)
    return pops


def benchmark_dataset(seed: int = 20200366) -> tuple[Dataset, list[str]]:
    """The 366-entity fixture and its ground-truth label per entity."""
    rng = np.random.default_rng(seed)
    schema = default_schema()
    labels = _scattered_labels(rng)
    n = len(labels)
    p = len(schema)
    values = np.zeros((n, p))

    for lab in LABEL_COUNTS:
        positions = [i for i, cur in enumerate(labels) if cur == lab]
        fixed = {
            entity_id - 1: vals
            for entity_id, (_, _, _, elab, vals) in _IDS_PINNED.items()
            if elab == lab
        }
        free = [pos for pos in positions if pos not in fixed]
        for a in range(p):
            fixed_vals = [fixed[pos][a] for pos in sorted(fixed)]
            col = _exact_mean_column(rng, LABEL_MEANS[lab][a], len(free), fixed_vals)
            for row, v in zip(free, col):
                values[row, a] = v
        for pos, vals in fixed.items():
            values[pos] = vals

    pops = _category_populations(rng, labels)
    entities = []
    for i in range(n):
        entity_id = i + 1
        if entity_id in _IDS_PINNED:
            _, name, parent, _, _ = _IDS_PINNED[entity_id]
        else:
            name, parent = f"entity-{entity_id:03d}", f"region-{(i % 23) + 1:02d}"
        entities.append(
            EntityRecord(id=entity_id, name=name, parent=parent, values=tuple(float(v) for v in values[i]))
        )
    diagnostics = tuple(
        Diagnostic(
            rule="anomalous-reference-mean",
            message=f"shipped mean for {code}/{lab} is inconsistent with neighbouring labels; used as-is",
            attribute=code,
        )
        for lab, code in ANOMALOUS_MEAN_CELLS
    )
    dataset = Dataset(
        schema=schema,
        entities=tuple(entities),
        populations=tuple(float(v) for v in pops),
        diagnostics=diagnostics,
    )
    return dataset, labels


def main(argv: list[str] | None = None) -> int:
    args = argv if argv is not None else sys.argv[1:]
    out = args[0] if args else "benchmark366.csv"
    dataset, labels = benchmark_dataset()
    export_dataset(dataset, out, format="csv")
    counts = {lab: labels.count(lab) for lab in LABEL_COUNTS}
    print(f"wrote {len(dataset)} entities to {out} with label counts {counts}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
