"""The knowledge base: canonical entities, causal edges, and persistence.

Edges are unique per (cause, effect) pair; observing the same pair again
appends evidence instead of duplicating the edge. The native on-disk format
is deterministic JSONL (meta line, entity lines sorted by id, edge lines
sorted by endpoint ids) so snapshots diff cleanly; Turtle (see turtle.py)
is the interchange format.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .canonical import CanonicalEntity
from .errors import AssociationFileError, IntegrityError
from .resources import read_tsv
from .values import PersonalValue, VALUE_ORDER, neutral_associations


@dataclass(frozen=True)
class SentenceRef:
    """A lightweight pointer to an evidence sentence."""

    article_id: str
    sentence_index: int
    text: str


@dataclass
class CausalEdge:
    cause_id: str
    effect_id: str
    evidence: list[SentenceRef] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.evidence)


@dataclass
class BuildMetadata:
    corpus_sha256: str = ""
    lexicon_versions: dict[str, str] = field(default_factory=dict)
    built_at: str = ""  # ISO timestamp, or "" for reproducible builds


@dataclass
class KBSnapshot:
    entities: dict[str, CanonicalEntity] = field(default_factory=dict)
    edges: dict[tuple[str, str], CausalEdge] = field(default_factory=dict)
    metadata: BuildMetadata = field(default_factory=BuildMetadata)

    # -- construction ----------------------------------------------------

    def add_entity(self, entity: CanonicalEntity) -> None:
        if entity.id in self.entities:
            raise IntegrityError(f"duplicate entity id {entity.id}")
        self.entities[entity.id] = entity

    def upsert_edge(self, cause_id: str, effect_id: str, evidence: SentenceRef) -> CausalEdge:
        """Insert or extend the (cause, effect) edge with one more evidence."""
        if cause_id == effect_id:
            raise IntegrityError(f"self-causation rejected for entity {cause_id}")
        for entity_id in (cause_id, effect_id):
            if entity_id not in self.entities:
                raise IntegrityError(f"unknown entity id {entity_id}")
        key = (cause_id, effect_id)
        edge = self.edges.get(key)
        if edge is None:
            edge = CausalEdge(cause_id, effect_id)
            self.edges[key] = edge
        edge.evidence.append(evidence)
        return edge

    def check_integrity(self) -> None:
        for (cause_id, effect_id), edge in self.edges.items():
            if cause_id == effect_id:
                raise IntegrityError(f"self-loop on {cause_id}")
            for entity_id in (cause_id, effect_id):
                if entity_id not in self.entities:
                    raise IntegrityError(f"edge references unknown entity {entity_id}")
            if edge.count != len(edge.evidence) or edge.count < 1:
                raise IntegrityError(f"edge {cause_id}->{effect_id} has inconsistent evidence")
        for entity in self.entities.values():
            if set(entity.associations) != set(VALUE_ORDER):
                raise IntegrityError(f"entity {entity.id} has an incomplete association map")

    # -- lookups ---------------------------------------------------------

    def sorted_entities(self) -> list[CanonicalEntity]:
        return [self.entities[k] for k in sorted(self.entities)]

    def sorted_edges(self) -> list[CausalEdge]:
        return [self.edges[k] for k in sorted(self.edges)]

    def edges_of(self, entity_id: str) -> tuple[list[CausalEdge], list[CausalEdge]]:
        """(outgoing, incoming) edges of an entity, sorted by endpoints."""
        outgoing = [e for e in self.sorted_edges() if e.cause_id == entity_id]
        incoming = [e for e in self.sorted_edges() if e.effect_id == entity_id]
        return outgoing, incoming

    def entity_by_key(self, key: str) -> CanonicalEntity | None:
        for entity in self.entities.values():
            if key == entity.key or key in entity.keys:
                return entity
        return None


def load_associations(kb: KBSnapshot, path: str | Path) -> KBSnapshot:
    """Apply an expert curation file (entity_key, value_name, score) to the KB.

    Rows must reference existing entity keys; referenced entities get their
    association maps filled and are marked curated. Scores outside
    {-1, 0, 1} or unknown value names fail with the row number; unknown
    keys are collected and reported together.
    """
    rows, _ = read_tsv(path, min_cols=3, max_cols=3)
    unknown_keys: list[str] = []
    updates: list[tuple[CanonicalEntity, PersonalValue, int]] = []
    for row_number, (key, value_name, score_text) in enumerate(rows, start=1):
        try:
            value = PersonalValue(value_name)
        except ValueError:
            raise AssociationFileError(f"unknown personal value {value_name!r}", row_number) from None
        try:
            score = int(score_text)
        except ValueError:
            raise AssociationFileError(f"score must be an integer, got {score_text!r}", row_number) from None
        if score not in (-1, 0, 1):
            raise AssociationFileError(f"score must be -1, 0 or 1, got {score}", row_number)
        entity = kb.entity_by_key(key)
        if entity is None:
            if key not in unknown_keys:
                unknown_keys.append(key)
            continue
        updates.append((entity, value, score))
    if unknown_keys:
        raise AssociationFileError(
            "unknown entity keys: " + ", ".join(repr(k) for k in unknown_keys))
    for entity, value, score in updates:
        entity.associations[value] = score
        entity.curated = True
    return kb


# --- native snapshot format ---------------------------------------------------


def _dump(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def _entity_record(entity: CanonicalEntity) -> dict:
    return {
        "type": "entity",
        "id": entity.id,
        "label": entity.label,
        "key": entity.key,
        "keys": entity.keys or [entity.key],
        "state": entity.state,
        "base": entity.base,
        "unit": entity.unit,
        "curated": entity.curated,
        "associations": {v.value: entity.associations[v] for v in VALUE_ORDER},
        "member_count": entity.member_count,
        "members": [
            {
                "article_id": m.provenance.article_id,
                "sentence_index": m.provenance.sentence_index,
                "role": m.role,
            }
            for m in entity.members
        ],
    }


def save_snapshot(kb: KBSnapshot, path: str | Path) -> None:
    kb.check_integrity()
    lines = [
        _dump(
            {
                "type": "meta",
                "corpus_sha256": kb.metadata.corpus_sha256,
                "lexicon_versions": kb.metadata.lexicon_versions,
                "built_at": kb.metadata.built_at,
            }
        )
    ]
    for entity in kb.sorted_entities():
        lines.append(_dump(_entity_record(entity)))
    for edge in kb.sorted_edges():
        lines.append(
            _dump(
                {
                    "type": "edge",
                    "cause_id": edge.cause_id,
                    "effect_id": edge.effect_id,
                    "count": edge.count,
                    "evidence": [
                        {"article_id": ref.article_id, "sentence_index": ref.sentence_index,
                         "text": ref.text}
                        for ref in edge.evidence
                    ],
                }
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def load_kb(path: str | Path) -> KBSnapshot:
    kb = KBSnapshot()
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        row = json.loads(line)
        kind = row.get("type")
        if kind == "meta":
            kb.metadata = BuildMetadata(
                corpus_sha256=row.get("corpus_sha256", ""),
                lexicon_versions=dict(row.get("lexicon_versions", {})),
                built_at=row.get("built_at", ""),
            )
        elif kind == "entity":
            associations = neutral_associations()
            for name, score in row.get("associations", {}).items():
                associations[PersonalValue(name)] = int(score)
            entity = CanonicalEntity(
                id=row["id"],
                label=row["label"],
                key=row["key"],
                base=row.get("base") or "",
                state=row.get("state"),
                unit=row.get("unit"),
                members=[],
                associations=associations,
                curated=bool(row.get("curated", False)),
                keys=list(row.get("keys", [row["key"]])),
                stored_member_count=int(row.get("member_count", 0)),
            )
            kb.add_entity(entity)
        elif kind == "edge":
            for ref in row["evidence"]:
                kb.upsert_edge(
                    row["cause_id"],
                    row["effect_id"],
                    SentenceRef(ref["article_id"], int(ref["sentence_index"]), ref["text"]),
                )
        else:
            raise IntegrityError(f"{path}: unknown record type on line {lineno}: {kind!r}")
    kb.check_integrity()
    return kb
