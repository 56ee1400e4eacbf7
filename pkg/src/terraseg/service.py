"""HTTP JSON API backing the interactive explorer.

Every response carries the session ``version``; mutating requests may (and
overrides must) send the ``base_version`` they were computed against, and a
mismatch is answered with 409 so the client can refresh and retry.
"""

from __future__ import annotations

import csv
import io
import json
import tempfile
from dataclasses import replace
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request, Response, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .charts import CHART_KINDS, render_chart
from .cluster import LINKAGES
from .dataset import parse_dataset, validate_dataset
from .errors import TerrasegError, UnknownEntity, UnknownLabel
from .session import Session, SessionStore, StaleVersion, UnknownSession, create_session
from .stats import category_means, radial_profile
from .taxonomy import (
    IndicatorConfig,
    OverrideEntry,
    apply_override,
    assign_taxonomy,
    cut_tree,
    nl2,
    partition_report,
)


class CutRequest(BaseModel):
    mode: str = Field(pattern="^(by-count|by-height)$")
    value: float
    mapping: dict[int, str] | None = None
    base_version: int | None = None


class OverrideRequest(BaseModel):
    target: int
    target_kind: str = Field(default="entity", pattern="^(entity|group)$")
    to_label: str
    rationale: str
    author: str = ""
    base_version: int


class WeightsRequest(BaseModel):
    w: list[float]
    base_version: int | None = None


def _indicator(session: Session):
    return nl2(session.complemented, session.indicator_config, session.taxonomy)


def _assignment_payload(session: Session) -> dict:
    ts = session.taxonomy
    return {
        "version": session.version,
        "cut": ts.base_cut.as_dict(),
        "n_groups": ts.base_cut.n_groups,
        "labels": list(ts.labels),
        "entities": [
            {
                "id": eid,
                "name": session.dataset.entities[pos].name,
                "group": ts.base_cut.assignment[pos],
                "label": ts.effective[pos],
            }
            for pos, eid in enumerate(ts.entity_ids)
        ],
    }


def create_app(store: SessionStore | None = None, frontend_dir: str | Path | None = None) -> FastAPI:
    store = store or SessionStore()
    app = FastAPI(title="terraseg explorer API")

    @app.exception_handler(TerrasegError)
    async def _domain_error(_, exc: TerrasegError):  # noqa: ANN001
        status = 400
        if isinstance(exc, StaleVersion):
            status = 409
        elif isinstance(exc, (UnknownSession, UnknownEntity, UnknownLabel)):
            status = 404
        return Response(
            content=json.dumps({"error": type(exc).__name__, "detail": str(exc)}),
            status_code=status,
            media_type="application/json",
        )

    @app.exception_handler(RequestValidationError)
    async def _malformed(_: Request, exc: RequestValidationError):
        return Response(
            content=json.dumps({"error": "MalformedRequest", "detail": str(exc.errors())}),
            status_code=400,
            media_type="application/json",
        )

    @app.post("/sessions", status_code=201)
    async def post_session(file: UploadFile, linkage: str = "ward"):
        if linkage not in LINKAGES:
            raise HTTPException(400, f"linkage must be one of {LINKAGES}")
        payload = await file.read()
        with tempfile.NamedTemporaryFile(suffix=".csv", delete=False) as tmp:
            tmp.write(payload)
            tmp_path = tmp.name
        try:
            dataset = parse_dataset(tmp_path, format="csv")
        finally:
            Path(tmp_path).unlink(missing_ok=True)
        problems = [p for p in validate_dataset(dataset) if p.rule == "non-finite value"]
        if problems:
            raise HTTPException(400, f"dataset has non-finite values: {problems[0].message}")
        session = store.add(create_session(dataset, linkage=linkage))
        return {"id": session.id, "version": session.version}

    @app.get("/sessions")
    async def list_sessions():
        return {"sessions": store.list_ids()}

    @app.get("/sessions/{sid}/dendrogram")
    async def get_dendrogram(sid: str):
        session = store.get(sid)
        doc = session.tree.as_dict()
        doc["version"] = session.version
        doc["entity_ids"] = list(session.dataset.ids)
        return doc

    @app.post("/sessions/{sid}/cut")
    async def post_cut(sid: str, req: CutRequest):
        def apply(session: Session) -> Session:
            cut = cut_tree(session.tree, req.mode, req.value)
            mapping = req.mapping or {gid: f"G{gid}" for gid in cut.groups}
            taxonomy = assign_taxonomy(cut, mapping, entity_ids=session.dataset.ids)
            return replace(session, taxonomy=taxonomy)

        session = store.mutate(sid, apply, base_version=req.base_version)
        return _assignment_payload(session)

    @app.get("/sessions/{sid}/assignment")
    async def get_assignment(sid: str):
        return _assignment_payload(store.get(sid))

    @app.post("/sessions/{sid}/overrides")
    async def post_override(sid: str, req: OverrideRequest):
        entry = OverrideEntry(
            target_kind=req.target_kind,
            target=req.target,
            to_label=req.to_label,
            rationale=req.rationale,
            author=req.author,
        )

        def apply(session: Session) -> Session:
            return replace(session, taxonomy=apply_override(session.taxonomy, entry))

        session = store.mutate(sid, apply, base_version=req.base_version)
        payload = _assignment_payload(session)
        payload["ledger_length"] = len(session.taxonomy.ledger)
        return payload

    @app.get("/sessions/{sid}/overrides")
    async def get_overrides(sid: str):
        session = store.get(sid)
        return {
            "version": session.version,
            "entries": [e.as_dict() for e in session.taxonomy.ledger],
        }

    @app.put("/sessions/{sid}/weights")
    async def put_weights(sid: str, req: WeightsRequest):
        config = IndicatorConfig(weights=tuple(req.w))

        def apply(session: Session) -> Session:
            return replace(session, indicator_config=config)

        session = store.mutate(sid, apply, base_version=req.base_version)
        return {"version": session.version, "weights": list(session.indicator_config.weights)}

    @app.get("/sessions/{sid}/indicator")
    async def get_indicator(sid: str):
        session = store.get(sid)
        result = _indicator(session)
        return {
            "version": session.version,
            "weights": list(result.weights),
            "values": [
                {"id": eid, "nl2": result.values[pos], "label": session.taxonomy.effective[pos]}
                for pos, eid in enumerate(session.dataset.ids)
            ],
            "per_label": result.per_label,
        }

    @app.get("/sessions/{sid}/stats")
    async def get_stats(sid: str):
        session = store.get(sid)
        stats = category_means(
            session.dataset.matrix(), session.taxonomy, session.dataset.schema.codes
        )
        pops = None
        if session.dataset.populations is not None:
            pops = {eid: session.dataset.populations[i] for i, eid in enumerate(session.dataset.ids)}
        return {
            "version": session.version,
            "partition": partition_report(session.taxonomy, populations=pops).as_dict(),
            "category_stats": stats.as_dict(),
            "radial_profiles": radial_profile(stats),
        }

    @app.get("/sessions/{sid}/charts/{kind}.svg")
    async def get_chart(sid: str, kind: str):
        session = store.get(sid)
        if kind not in CHART_KINDS:
            raise HTTPException(404, f"unknown chart kind {kind!r}")
        result = _indicator(session)
        if kind == "dendrogram":
            inputs = {
                "tree": session.tree,
                "leaf_names": [str(i) for i in session.dataset.ids],
            }
        elif kind == "nl2-scatter":
            inputs = {
                "entity_ids": list(session.dataset.ids),
                "values": list(result.values),
                "labels": list(session.taxonomy.effective),
            }
        elif kind == "radial":
            stats = category_means(
                session.dataset.matrix(), session.taxonomy, session.dataset.schema.codes
            )
            inputs = {"profiles": radial_profile(stats)["profiles"]}
        else:
            stats = category_means(
                session.dataset.matrix(), session.taxonomy, session.dataset.schema.codes
            )
            inputs = {
                "stats": {lab: [b.as_dict() for b in boxes] for lab, boxes in stats.boxplots.items()},
                "codes": list(session.dataset.schema.codes),
            }
        doc = render_chart(kind, inputs, {"session": sid, "version": session.version})
        return Response(content=doc.svg, media_type="image/svg+xml",
                        headers={"X-Session-Version": str(session.version)})

    @app.get("/sessions/{sid}/export.csv")
    async def get_export(sid: str):
        session = store.get(sid)
        result = _indicator(session)
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["id", "name", "label", "nl2"])
        for pos, eid in enumerate(session.dataset.ids):
            writer.writerow(
                [
                    eid,
                    session.dataset.entities[pos].name,
                    session.taxonomy.effective[pos],
                    repr(result.values[pos]),
                ]
            )
        return Response(content=buf.getvalue(), media_type="text/csv",
                        headers={"X-Session-Version": str(session.version)})

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(frontend_dir), html=True), name="explorer")

    return app
