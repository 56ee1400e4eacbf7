"""Min-max normalization to the 0-100 scale and direction complements.

For attribute ``a`` with population minimum ``m`` and maximum ``M`` over all
entities, the normalized value is ``z = (x - m) / (M - m) * 100``, so every
non-degenerate column attains exactly 0 and exactly 100. Degenerate columns
(``M == m``) map to all zeros with a diagnostic. Favourable-low attributes are
then complemented as ``100 - z`` so that larger always means better; the
complement happens on the normalized scale because negating raw values would
be cancelled by the squaring inside the separation indicator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dataset import Dataset
from .errors import AlreadyComplemented, Diagnostic, EmptyDataset
from .schema import AttributeSchema


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class NormalizedMatrix:
    """Entities x attributes matrix on the 0-100 scale, plus the bounds used."""

    z: np.ndarray
    mins: np.ndarray
    maxs: np.ndarray
    complemented: np.ndarray
    codes: tuple[str, ...]
    diagnostics: tuple[Diagnostic, ...] = field(default=(), compare=False)

    @property
    def n_entities(self) -> int:
        return self.z.shape[0]

    @property
    def n_attributes(self) -> int:
        return self.z.shape[1]

    def as_dict(self) -> dict:
        return {
            "codes": list(self.codes),
            "mins": self.mins.tolist(),
            "maxs": self.maxs.tolist(),
            "complemented": [bool(c) for c in self.complemented],
            "z": self.z.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NormalizedMatrix":
        return cls(
            z=_frozen(np.array(d["z"], dtype=float)),
            mins=_frozen(np.array(d["mins"], dtype=float)),
            maxs=_frozen(np.array(d["maxs"], dtype=float)),
            complemented=_frozen(np.array(d["complemented"], dtype=bool)),
            codes=tuple(d["codes"]),
        )


def minmax_normalize(d: Dataset) -> NormalizedMatrix:
    """Rescale every attribute so the population min maps to 0 and the max to 100."""
    if len(d.entities) == 0:
        raise EmptyDataset("dataset has no entities")
    x = d.matrix()
    mins = x.min(axis=0)
    maxs = x.max(axis=0)
    span = maxs - mins
    diagnostics: list[Diagnostic] = []
    z = np.zeros_like(x)
    for a in range(x.shape[1]):
        if span[a] == 0.0:
            diagnostics.append(
                Diagnostic(
                    rule="degenerate-attribute",
                    message=f"constant column (value {mins[a]!r}) normalized to all zeros",
                    attribute=d.schema.codes[a],
                )
            )
        else:
            z[:, a] = (x[:, a] - mins[a]) / span[a] * 100.0
    return NormalizedMatrix(
        z=_frozen(z),
        mins=_frozen(mins),
        maxs=_frozen(maxs),
        complemented=_frozen(np.zeros(x.shape[1], dtype=bool)),
        codes=d.schema.codes,
        diagnostics=tuple(diagnostics),
    )


def apply_direction_complement(nm: NormalizedMatrix, schema: AttributeSchema) -> NormalizedMatrix:
    """Flip favourable-low columns to ``100 - z``; rejects a second application."""
    if bool(nm.complemented.any()):
        raise AlreadyComplemented("direction complement was already applied")
    flip = np.zeros(nm.n_attributes, dtype=bool)
    for i in schema.favourable_low_indices():
        flip[i] = True
    z = nm.z.copy()
    z[:, flip] = 100.0 - z[:, flip]
    return NormalizedMatrix(
        z=_frozen(z),
        mins=nm.mins,
        maxs=nm.maxs,
        complemented=_frozen(flip),
        codes=nm.codes,
        diagnostics=nm.diagnostics,
    )


def normalize_with_bounds(x: np.ndarray, mins: np.ndarray, maxs: np.ndarray) -> np.ndarray:
    """Normalize new rows against frozen population bounds from an earlier run."""
    span = np.asarray(maxs, dtype=float) - np.asarray(mins, dtype=float)
    out = np.zeros_like(np.asarray(x, dtype=float))
    nz = span != 0.0
    out[:, nz] = (x[:, nz] - mins[nz]) / span[nz] * 100.0
    return out


def export_normalized(nm: NormalizedMatrix, path: str | Path, format: str = "json") -> Path:
    """Persist the matrix with its bounds so later runs can reuse them."""
    path = Path(path)
    if format == "json":
        path.write_text(json.dumps(nm.as_dict(), indent=2, sort_keys=True), encoding="utf-8")
    elif format == "csv":
        lines = [",".join(("row",) + nm.codes)]
        lines.append(",".join(["min"] + [repr(v) for v in nm.mins]))
        lines.append(",".join(["max"] + [repr(v) for v in nm.maxs]))
        lines.append(",".join(["complemented"] + ["1" if c else "0" for c in nm.complemented]))
        for i in range(nm.n_entities):
            lines.append(",".join([str(i)] + [repr(v) for v in nm.z[i]]))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        raise ValueError(f"unknown format {format!r}")
    return path
