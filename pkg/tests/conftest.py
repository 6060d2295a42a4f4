from __future__ import annotations

import pytest

from climatekb import Config, PipelineComponents, build_kb
from climatekb.resources import data_path


@pytest.fixture(scope="session")
def components() -> PipelineComponents:
    return PipelineComponents.from_config(Config())


@pytest.fixture(scope="session")
def fixture_corpus_path():
    return data_path("fixture/mini_corpus.jsonl")


@pytest.fixture(scope="session")
def fixture_build():
    return build_kb(
        data_path("fixture/mini_corpus.jsonl"),
        synonyms_path=data_path("fixture/synonyms.tsv"),
        associations_path=data_path("fixture/associations.tsv"),
    )


@pytest.fixture(scope="session")
def fixture_kb(fixture_build):
    return fixture_build.kb


def make_sentence(text: str, article_id: str = "t1", index: int = 0):
    from climatekb import Sentence

    return Sentence(article_id=article_id, index=index, text=text,
                    char_start=0, char_end=len(text))


def replay_service_exchanges(kb) -> None:
    """Replay the recorded five-endpoint exchange against a fresh app.

    Bodies must match byte-for-byte after placeholder normalization; the
    random profile id is checked by schema (32 hex chars) instead.
    """
    import json
    import re
    from pathlib import Path

    from fastapi.testclient import TestClient

    from climatekb.service import ServiceState, create_app

    recording = json.loads((Path(__file__).parent / "data" / "service_replay.json")
                           .read_text(encoding="utf-8"))
    state = ServiceState(config=Config(admin_token=recording["admin_token"]), snapshot=kb)
    client = TestClient(create_app(state))
    substitutions = {
        "{FIXTURE_CORPUS}": str(data_path("fixture/mini_corpus.jsonl")),
        "{FIXTURE_SYNONYMS}": str(data_path("fixture/synonyms.tsv")),
        "{FIXTURE_ASSOCIATIONS}": str(data_path("fixture/associations.tsv")),
    }
    profile_id = ""
    for record in recording["records"]:
        request = record["request"]
        path = request["path"].replace("{PROFILE_ID}", profile_id)
        payload = request.get("json")
        if payload is not None:
            raw = json.dumps(payload)
            for placeholder, value in substitutions.items():
                raw = raw.replace(placeholder, value)
            payload = json.loads(raw)
        response = client.request(request["method"], path, json=payload,
                                  headers=request.get("headers"))
        expected = record["response"]
        assert response.status_code == expected["status"], record["name"]
        assert response.headers.get("content-type", "") == expected["content_type"]
        body = response.content.decode("utf-8")
        if record["name"] == "create_profile":
            profile_id = response.json()["profile_id"]
            assert re.fullmatch(r"[0-9a-f]{32}", profile_id)
        normalized = re.sub(r"[0-9a-f]{32}", "{PROFILE_ID}", body)
        assert normalized == expected["body"], record["name"]
    assert state.rebuild_done.wait(timeout=30)
    assert state.rebuild_error == ""


_WORDS = ["ocean", "soil", "heat", "storm", "ice", "forest", "drought", "reef",
          "methane", "glacier", "monsoon", "harvest", "coast", "river"]
_SPICE = ['"', "\\", "\n", "\t", "é", "ü", "–", "|", "'", ";", "."]


def random_text(rng, max_words: int = 5, spicy: bool = True) -> str:
    words = [rng.choice(_WORDS) for _ in range(rng.randint(1, max_words))]
    text = " ".join(words)
    if spicy and rng.random() < 0.4:
        pos = rng.randint(0, len(text))
        text = text[:pos] + rng.choice(_SPICE) + text[pos:]
    return text


def random_kb(rng, max_entities: int = 20, max_edges: int = 40):
    """A random but internally consistent KB for property tests."""
    from climatekb import CanonicalEntity, KBSnapshot, SentenceRef
    from climatekb.values import VALUE_ORDER

    kb = KBSnapshot()
    n = rng.randint(1, max_entities)
    for i in range(1, n + 1):
        curated = rng.random() < 0.5
        associations = {v: (rng.choice([-1, 0, 1]) if curated else 0) for v in VALUE_ORDER}
        kb.add_entity(CanonicalEntity(
            id=f"e{i:04d}",
            label=random_text(rng),
            key=" ".join(rng.choice(_WORDS) for _ in range(rng.randint(1, 3))),
            base=rng.choice(_WORDS),
            state=rng.choice([None, "warming", "rising", "decrease", "falling"]),
            unit=rng.choice([None, "level", "population", "frequency"]),
            associations=associations,
            curated=curated,
        ))
    ids = sorted(kb.entities)
    possible = [(a, b) for a in ids for b in ids if a != b]
    rng.shuffle(possible)
    for cause_id, effect_id in possible[: rng.randint(0, min(max_edges, len(possible)))]:
        for _ in range(rng.randint(1, 3)):
            kb.upsert_edge(cause_id, effect_id, SentenceRef(
                article_id=f"a{rng.randint(1, 30):02d}",
                sentence_index=rng.randint(0, 40),
                text=random_text(rng, max_words=8),
            ))
    return kb
