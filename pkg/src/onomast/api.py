"""HTTP interface for the merge-review workflow and person browsing.

A thin adapter over the name store: every mutation is exactly one store
operation, reads are snapshot-consistent, and replays of decided candidates
answer 409.  The optional static directory serves the review front end.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, Header, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .errors import ConflictError, UsageError
from .store import NameStore


class DecisionBody(BaseModel):
    confirm: bool
    date: str = ""


class SplitBody(BaseModel):
    variant_subset: list[str] = Field(default_factory=list)
    date: str = ""


def _queue_item(store: NameStore, row: dict) -> dict:
    context = json.loads(row["context"] or "{}")
    doc_ids = context.get("doc_ids", [])
    title = None
    if doc_ids:
        docs = {d.id: d for d in store.staged_documents()}
        first = docs.get(doc_ids[0])
        title = first.title if first is not None else None
    target = None
    if row["target_person_id"] is not None:
        person = store.export_person(int(row["target_person_id"]))
        if person is not None:
            variants = person["variants"]
            canonical_isr = next(
                (v["isr"] for v in variants if v["surface"] == person["canonical"]),
                variants[0]["isr"] if variants else "",
            )
            target = {
                "person_id": person["id"],
                "canonical": person["canonical"],
                "isr": canonical_isr,
                "variants": [v["surface"] for v in variants[:5]],
            }
    return {
        "candidate_id": row["candidate_id"],
        "new_surface": row["surface"],
        "new_isr": row["isr"],
        "language": row["language"],
        "script": row["script"],
        "target": target,
        "score": {
            "bigram": row["bigram"],
            "trigram": row["trigram"],
            "consonant_bigram": row["consonant_bigram"],
            "combined": row["combined"],
            "mode": row["mode"],
        },
        "same_cluster": bool(row["same_cluster"]),
        "pending_count": row["pending_count"],
        "context": {
            "doc_ids": doc_ids,
            "doc_title": title,
            "triggers": context.get("triggers", {}),
        },
    }


def create_app(store: NameStore, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="onomast review API")

    @app.get("/queue")
    def queue(limit: int = 50, offset: int = 0) -> list[dict]:
        return [_queue_item(store, row) for row in store.queued_candidates(limit, offset)]

    @app.post("/queue/{candidate_id}/decision")
    def decide(
        candidate_id: int,
        body: DecisionBody,
        x_reviewer: str = Header(default=""),
    ) -> dict:
        try:
            return store.apply_review(
                candidate_id, body.confirm, reviewer=x_reviewer, date=body.date
            )
        except UsageError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except ConflictError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc

    @app.get("/person/{person_id}")
    def person(person_id: int) -> dict:
        record = store.export_person(person_id)
        if record is None:
            raise HTTPException(status_code=404, detail=f"no person {person_id}")
        related = []
        for other_id, count in store.cooccurrence(person_id):
            other = store.export_person(other_id)
            if other is not None:
                related.append(
                    {"person_id": other_id, "canonical": other["canonical"], "count": count}
                )
        return {"person": record, "related": related}

    @app.post("/person/{person_id}/split")
    def split(person_id: int, body: SplitBody) -> dict:
        if store.export_person(person_id) is None:
            raise HTTPException(status_code=404, detail=f"no person {person_id}")
        try:
            new_id = store.split_person(person_id, body.variant_subset, date=body.date)
        except UsageError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return {"person_id": person_id, "new_person_id": new_id}

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")
    return app
