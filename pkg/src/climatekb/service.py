"""HTTP+JSON API over an immutable published KB snapshot.

Five endpoints back the questionnaire-to-feed loop:

    GET  /questionnaire
    POST /profiles
    GET  /recommendations?profile_id=...&limit=N
    GET  /entities/{id}
    POST /admin/rebuild

Requests read whatever snapshot is published when they start; rebuilds run
exclusively and publish by an atomic reference swap, so no response ever
mixes two snapshots. Profiles are anonymous random tokens, optionally
persisted to an append-only JSONL so the store survives restarts.
"""

from __future__ import annotations

import datetime
import json
import secrets
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import pipeline, recommend
from .config import Config
from .errors import ClimateKBError, ProfileError
from .kbstore import KBSnapshot
from .values import (SCALE_LABELS, SCALE_MAX, SCALE_MIN, VALUE_ORDER, ValueProfile,
                     profile_from_answers, questionnaire)


@dataclass
class ProfileRecord:
    profile_id: str
    profile: ValueProfile
    created_at: str


class ProfileStore:
    """In-memory profile records with optional write-ahead persistence."""

    def __init__(self, persist_path: Path | None = None):
        self._records: dict[str, ProfileRecord] = {}
        self._lock = threading.Lock()
        self._persist_path = persist_path
        if persist_path is not None and persist_path.exists():
            for line in persist_path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                row = json.loads(line)
                profile = profile_from_answers(row["raw"])
                self._records[row["profile_id"]] = ProfileRecord(
                    row["profile_id"], profile, row["created_at"])

    def create(self, profile: ValueProfile) -> ProfileRecord:
        record = ProfileRecord(
            profile_id=secrets.token_hex(16),
            profile=profile,
            created_at=datetime.datetime.now(datetime.timezone.utc).isoformat(),
        )
        with self._lock:
            self._records[record.profile_id] = record
            if self._persist_path is not None:
                line = json.dumps(
                    {
                        "profile_id": record.profile_id,
                        "raw": {v.value: profile.raw[v] for v in VALUE_ORDER},
                        "created_at": record.created_at,
                    },
                    ensure_ascii=False, sort_keys=True, separators=(",", ":"))
                with open(self._persist_path, "a", encoding="utf-8", newline="\n") as fh:
                    fh.write(line + "\n")
        return record

    def get(self, profile_id: str) -> ProfileRecord | None:
        return self._records.get(profile_id)


class SnapshotHolder:
    """Atomically swappable reference to the published snapshot."""

    def __init__(self, snapshot: KBSnapshot | None = None):
        self._snapshot = snapshot
        self._lock = threading.Lock()
        self.version = 0 if snapshot is None else 1

    def current(self) -> KBSnapshot | None:
        return self._snapshot

    def publish(self, snapshot: KBSnapshot) -> None:
        with self._lock:
            self._snapshot = snapshot
            self.version += 1


@dataclass
class ServiceState:
    config: Config = field(default_factory=Config)
    snapshot: KBSnapshot | None = None

    def __post_init__(self):
        self.holder = SnapshotHolder(self.snapshot)
        persist = Path(self.config.data_dir) / "profiles.jsonl" if self.config.data_dir else None
        self.profiles = ProfileStore(persist)
        self.rebuild_lock = threading.Lock()
        self.rebuild_done = threading.Event()
        self.rebuild_error: str = ""


def _error(status: int, message: str, fields: dict[str, str] | None = None) -> JSONResponse:
    body: dict = {"error": message}
    if fields:
        body["fields"] = fields
    return JSONResponse(body, status_code=status)


def create_app(state: ServiceState | None = None) -> FastAPI:
    state = state or ServiceState()
    app = FastAPI(title="climatekb", docs_url=None, redoc_url=None)
    app.state.service = state

    if state.config.cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[state.config.cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    items = questionnaire(state.config.path_for("questionnaire"))

    @app.get("/questionnaire")
    def get_questionnaire():
        return [
            {
                "id": item.id,
                "value": item.value.value,
                "statement": item.statement,
                "scale": {"min": SCALE_MIN, "max": SCALE_MAX, "labels": list(SCALE_LABELS)},
            }
            for item in items
        ]

    @app.post("/profiles")
    async def create_profile(request: Request):
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return _error(400, "request body must be JSON")
        if not isinstance(body, dict) or "answers" not in body:
            return _error(422, "request body must be an object with an 'answers' map")
        answers = body["answers"]
        if not isinstance(answers, dict):
            return _error(422, "'answers' must be an object of value -> integer")
        missing = [v.value for v in VALUE_ORDER if v.value not in answers]
        if missing:
            return _error(422, "missing answers", {name: "answer required" for name in missing})
        try:
            profile = profile_from_answers(answers)
        except ProfileError as exc:
            return _error(400, "invalid answers", {exc.field or "answers": str(exc)})
        record = state.profiles.create(profile)
        return JSONResponse(
            {
                "profile_id": record.profile_id,
                "u": {v.value: profile.u[v] for v in VALUE_ORDER},
            },
            status_code=201,
        )

    @app.get("/recommendations")
    def get_recommendations(request: Request):
        params = request.query_params
        profile_id = params.get("profile_id", "")
        if not profile_id:
            return _error(400, "profile_id query parameter is required")
        raw_limit = params.get("limit", str(state.config.default_limit))
        try:
            limit = int(raw_limit)
        except ValueError:
            return _error(400, f"limit must be an integer, got {raw_limit!r}")
        if limit < 1:
            return _error(400, f"limit must be >= 1, got {limit}")
        record = state.profiles.get(profile_id)
        if record is None:
            return _error(404, f"unknown profile_id {profile_id!r}")
        snapshot = state.holder.current()
        if snapshot is None:
            return JSONResponse({"limit": limit, "count": 0, "items": []})
        feed = recommend.rank_entities(record.profile, snapshot, limit,
                                       state.config.include_uncurated)
        return JSONResponse(
            {
                "limit": limit,
                "count": len(feed),
                "items": [
                    {
                        "entity_id": item.entity_id,
                        "label": snapshot.entities[item.entity_id].label,
                        "relevance": item.relevance,
                        "rank": item.rank,
                        "evidence_snippet": item.evidence_snippet,
                    }
                    for item in feed
                ],
            }
        )

    @app.get("/entities/{entity_id}")
    def get_entity(entity_id: str):
        snapshot = state.holder.current()
        if snapshot is None or entity_id not in snapshot.entities:
            return _error(404, f"unknown entity {entity_id!r}")
        entity = snapshot.entities[entity_id]
        outgoing, incoming = snapshot.edges_of(entity_id)

        def edge_payload(edge):
            return {
                "cause_id": edge.cause_id,
                "effect_id": edge.effect_id,
                "count": edge.count,
                "evidence": [
                    {"article_id": r.article_id, "sentence_index": r.sentence_index,
                     "text": r.text}
                    for r in edge.evidence
                ],
            }

        return JSONResponse(
            {
                "id": entity.id,
                "label": entity.label,
                "key": entity.key,
                "state": entity.state,
                "base": entity.base,
                "unit": entity.unit,
                "curated": entity.curated,
                "associations": {v.value: entity.associations[v] for v in VALUE_ORDER},
                "member_count": entity.member_count,
                "outgoing": [edge_payload(e) for e in outgoing],
                "incoming": [edge_payload(e) for e in incoming],
            }
        )

    @app.post("/admin/rebuild")
    async def rebuild(request: Request):
        token = request.headers.get("x-admin-token", "")
        if not state.config.admin_token or token != state.config.admin_token:
            return _error(401, "missing or invalid admin token")
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return _error(400, "request body must be JSON")
        if not isinstance(body, dict) or not isinstance(body.get("corpus_path"), str):
            return _error(400, "corpus_path is required")
        corpus_path = body["corpus_path"]
        synonyms_path = body.get("synonyms_path")
        associations_path = body.get("associations_path")
        for label, path in (("corpus_path", corpus_path), ("synonyms_path", synonyms_path),
                            ("associations_path", associations_path)):
            if path is not None and not Path(path).is_file():
                return _error(400, f"{label} does not exist: {path}")
        if not state.rebuild_lock.acquire(blocking=False):
            return _error(409, "a rebuild is already running")
        state.rebuild_done.clear()
        state.rebuild_error = ""

        def run():
            try:
                result = pipeline.build_kb(corpus_path, synonyms_path, associations_path,
                                           state.config)
                state.holder.publish(result.kb)
            except (ClimateKBError, OSError) as exc:
                state.rebuild_error = str(exc)
            finally:
                state.rebuild_lock.release()
                state.rebuild_done.set()

        threading.Thread(target=run, name="kb-rebuild", daemon=True).start()
        return JSONResponse({"status": "rebuilding"}, status_code=202)

    return app
