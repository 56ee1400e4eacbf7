"""Explorer sessions: one analyzed dataset plus its evolving taxonomy.

A session's merge tree is computed once at creation and never changes; cuts,
overrides, and weight changes replace the derived state and bump a strictly
increasing version number. Mutations are serialized per session behind a lock
and checked against the caller's base version (optimistic concurrency).
Sessions persist as one JSON file each in the session directory, written
atomically, and reload byte-equivalently.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

from .cluster import MergeTree, agglomerate, pairwise_distances
from .dataset import Dataset, EntityRecord
from .errors import TerrasegError
from .normalize import NormalizedMatrix, apply_direction_complement, minmax_normalize
from .schema import AttributeSchema
from .taxonomy import (
    IndicatorConfig,
    TaxonomyState,
    assign_taxonomy,
    cut_tree,
    default_weights,
)

SESSION_DIR_ENV = "TERRASEG_SESSION_DIR"


class StaleVersion(TerrasegError):
    """The caller's base version no longer matches the session."""


class UnknownSession(TerrasegError):
    pass


@dataclass(frozen=True)
class Session:
    id: str
    version: int
    created: str
    modified: str
    linkage: str
    dataset: Dataset
    complemented: NormalizedMatrix
    tree: MergeTree
    taxonomy: TaxonomyState
    indicator_config: IndicatorConfig

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "version": self.version,
            "created": self.created,
            "modified": self.modified,
            "linkage": self.linkage,
            "dataset": {
                "schema": self.dataset.schema.as_dict(),
                "entities": [
                    {"id": e.id, "name": e.name, "parent": e.parent, "values": list(e.values)}
                    for e in self.dataset.entities
                ],
                "populations": (
                    list(self.dataset.populations) if self.dataset.populations is not None else None
                ),
            },
            "complemented": self.complemented.as_dict(),
            "tree": self.tree.as_dict(),
            "taxonomy": self.taxonomy.as_dict(),
            "weights": list(self.indicator_config.weights),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Session":
        schema = AttributeSchema.from_dict(d["dataset"]["schema"])
        entities = tuple(
            EntityRecord(
                id=int(e["id"]),
                name=e.get("name", ""),
                parent=e.get("parent", ""),
                values=tuple(float(v) for v in e["values"]),
            )
            for e in d["dataset"]["entities"]
        )
        pops = d["dataset"].get("populations")
        dataset = Dataset(
            schema=schema,
            entities=entities,
            populations=tuple(float(v) for v in pops) if pops is not None else None,
        )
        return cls(
            id=d["id"],
            version=int(d["version"]),
            created=d["created"],
            modified=d["modified"],
            linkage=d["linkage"],
            dataset=dataset,
            complemented=NormalizedMatrix.from_dict(d["complemented"]),
            tree=MergeTree.from_dict(d["tree"]),
            taxonomy=TaxonomyState.from_dict(d["taxonomy"]),
            indicator_config=IndicatorConfig(weights=tuple(float(w) for w in d["weights"])),
        )


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def create_session(dataset: Dataset, linkage: str = "ward") -> Session:
    """Normalize, cluster, and wrap a dataset into a fresh version-1 session."""
    normalized = minmax_normalize(dataset)
    complemented = apply_direction_complement(normalized, dataset.schema)
    tree = agglomerate(pairwise_distances(complemented), linkage=linkage)
    cut = cut_tree(tree, "by-count", 1)
    taxonomy = assign_taxonomy(cut, {0: "G0"}, entity_ids=dataset.ids)
    stamp = _now()
    return Session(
        id=secrets.token_hex(8),
        version=1,
        created=stamp,
        modified=stamp,
        linkage=linkage,
        dataset=dataset,
        complemented=complemented,
        tree=tree,
        taxonomy=taxonomy,
        indicator_config=default_weights(dataset.schema),
    )


class SessionStore:
    """JSON-file-backed session registry with per-session write serialization."""

    def __init__(self, directory: str | Path | None = None):
        if directory is None:
            directory = os.environ.get(SESSION_DIR_ENV, "sessions")
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._cache: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def _path(self, session_id: str) -> Path:
        return self.directory / f"{session_id}.json"

    def add(self, session: Session) -> Session:
        with self._lock_for(session.id):
            self._save(session)
            self._cache[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        cached = self._cache.get(session_id)
        if cached is not None:
            return cached
        path = self._path(session_id)
        if not path.exists():
            raise UnknownSession(f"no session {session_id!r}")
        session = Session.from_dict(json.loads(path.read_text(encoding="utf-8")))
        self._cache[session_id] = session
        return session

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.directory.glob("*.json"))

    def mutate(
        self,
        session_id: str,
        fn: Callable[[Session], Session],
        base_version: int | None = None,
    ) -> Session:
        """Apply fn under the session lock; reject stale base versions."""
        with self._lock_for(session_id):
            current = self.get(session_id)
            if base_version is not None and base_version != current.version:
                raise StaleVersion(
                    f"base version {base_version} != current version {current.version}"
                )
            updated = fn(current)
            updated = replace(updated, version=current.version + 1, modified=_now())
            self._save(updated)
            self._cache[session_id] = updated
            return updated

    def _save(self, session: Session) -> None:
        path = self._path(session.id)
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(session.as_dict(), sort_keys=True), encoding="utf-8")
        tmp.replace(path)
