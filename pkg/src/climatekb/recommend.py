"""Entity relevance scoring and feed assembly.

An entity's relevance to a profile is the sum over the ten values of
u_value * association_score, so it always lands in [-10, 10]. Feeds sort by
relevance, break ties by total edge evidence and then entity id, and attach
one supporting sentence (the first evidence of the entity's best-supported
edge) to each item.
"""

from __future__ import annotations

from dataclasses import dataclass

from .canonical import CanonicalEntity
from .kbstore import KBSnapshot
from .values import VALUE_ORDER, ValueProfile

# Relevance differences below this quantum are treated as ties for ranking,
# which keeps the order invariant under positive rescaling of the profile
# despite float rounding in the scaled weights.
RANK_QUANTUM_DECIMALS = 9


@dataclass(frozen=True)
class Recommendation:
    entity_id: str
    relevance: float
    rank: int
    evidence_snippet: str


def score_entity(profile: ValueProfile, entity: CanonicalEntity) -> float:
    """Relevance of one entity: sum of u * association over the ten values."""
    return float(sum(profile.u[v] * entity.associations[v] for v in VALUE_ORDER))


def evidence_total(kb: KBSnapshot, entity_id: str) -> int:
    """Total evidence count over all edges touching the entity."""
    return sum(
        e.count
        for e in kb.edges.values()
        if e.cause_id == entity_id or e.effect_id == entity_id
    )


def evidence_snippet(kb: KBSnapshot, entity_id: str) -> str:
    """First evidence sentence of the entity's highest-count edge, or ""."""
    incident = [
        e for e in kb.edges.values() if e.cause_id == entity_id or e.effect_id == entity_id
    ]
    if not incident:
        return ""
    best = min(incident, key=lambda e: (-e.count, e.cause_id, e.effect_id))
    return best.evidence[0].text


def rank_entities(profile: ValueProfile, kb: KBSnapshot, limit: int,
                  include_uncurated: bool = True) -> list[Recommendation]:
    """Top `limit` entities for a profile, ranked deterministically."""
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    candidates = [
        e for e in kb.entities.values() if include_uncurated or e.curated
    ]
    scored = [
        (round(score_entity(profile, e), RANK_QUANTUM_DECIMALS),
         score_entity(profile, e),
         evidence_total(kb, e.id),
         e)
        for e in candidates
    ]
    scored.sort(key=lambda row: (-row[0], -row[2], row[3].id))
    return [
        Recommendation(
            entity_id=e.id,
            relevance=raw,
            rank=rank,
            evidence_snippet=evidence_snippet(kb, e.id),
        )
        for rank, (_, raw, _, e) in enumerate(scored[:limit], start=1)
    ]
