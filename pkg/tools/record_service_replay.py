#!/usr/bin/env python3
"""Record the service replay golden used by the acceptance suite.

Runs one scripted interaction against a fixed fixture snapshot and freezes
each request/response pair (status, content type, body bytes). Dynamic
values are replaced by placeholders: {PROFILE_ID} for the random profile
token and {FIXTURE_*} for absolute fixture paths.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

from fastapi.testclient import TestClient

from climatekb import Config, build_kb
from climatekb.resources import data_path
from climatekb.service import ServiceState, create_app

ADMIN_TOKEN = "replay-admin-token"
OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "service_replay.json"


def normalize(body: str) -> str:
    return re.sub(r"[0-9a-f]{32}", "{PROFILE_ID}", body)


def main() -> None:
    result = build_kb(
        data_path("fixture/mini_corpus.jsonl"),
        synonyms_path=data_path("fixture/synonyms.tsv"),
        associations_path=data_path("fixture/associations.tsv"),
    )
    state = ServiceState(config=Config(admin_token=ADMIN_TOKEN), snapshot=result.kb)
    client = TestClient(create_app(state))

    answers = {"answers": {v: 6 for v in [
        "conformity", "tradition", "benevolence", "universalism", "self_direction",
        "stimulation", "hedonism", "achievement", "power", "security"]}}
    rebuild = {
        "corpus_path": "{FIXTURE_CORPUS}",
        "synonyms_path": "{FIXTURE_SYNONYMS}",
        "associations_path": "{FIXTURE_ASSOCIATIONS}",
    }

    script = [
        {"name": "questionnaire", "method": "GET", "path": "/questionnaire"},
        {"name": "create_profile", "method": "POST", "path": "/profiles", "json": answers},
        {"name": "recommendations", "method": "GET",
         "path": "/recommendations?profile_id={PROFILE_ID}&limit=5"},
        {"name": "entity_detail", "method": "GET", "path": "/entities/e0010"},
        {"name": "rebuild", "method": "POST", "path": "/admin/rebuild", "json": rebuild,
         "headers": {"x-admin-token": ADMIN_TOKEN}},
    ]

    substitutions = {
        "{FIXTURE_CORPUS}": str(data_path("fixture/mini_corpus.jsonl")),
        "{FIXTURE_SYNONYMS}": str(data_path("fixture/synonyms.tsv")),
        "{FIXTURE_ASSOCIATIONS}": str(data_path("fixture/associations.tsv")),
    }

    profile_id = None
    records = []
    for step in script:
        path = step["path"].replace("{PROFILE_ID}", profile_id or "")
        payload = step.get("json")
        if payload is not None:
            raw = json.dumps(payload)
            for placeholder, value in substitutions.items():
                raw = raw.replace(placeholder, value)
            payload = json.loads(raw)
        response = client.request(step["method"], path, json=payload,
                                  headers=step.get("headers"))
        if step["name"] == "create_profile":
            profile_id = response.json()["profile_id"]
        records.append({
            "name": step["name"],
            "request": {k: v for k, v in step.items() if k != "name"},
            "response": {
                "status": response.status_code,
                "content_type": response.headers.get("content-type", ""),
                "body": normalize(response.content.decode("utf-8")),
            },
        })
        if step["name"] == "rebuild":
            state.rebuild_done.wait(timeout=30)
            assert state.rebuild_error == "", state.rebuild_error

    OUT.write_text(json.dumps({"admin_token": ADMIN_TOKEN, "records": records},
                              indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    print(f"wrote {OUT} with {len(records)} records")


if __name__ == "__main__":
    main()
