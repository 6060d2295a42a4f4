"""Mention normalization and canonical-entity clustering.

A canonical key is built from a mention's parts in the fixed order
state -> base -> unit, then lowercased, stripped of punctuation and
stopwords, and singular-stemmed token by token. Mentions sharing a key,
or whose keys are linked in the curated synonym table, are merged by
union-find into one canonical entity. Everything is deterministic: entity
ids follow first-seen corpus order and labels are majority surface forms
with lexicographic tie-breaks.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .config import Config
from .extraction import Mention
from .resources import read_tsv, read_word_list
from .values import PersonalValue, neutral_associations

_NON_ALNUM = re.compile(r"[^a-z0-9]+")


class Normalizer:
    def __init__(self, stopwords: set[str], exceptions: dict[str, str]):
        self.stopwords = stopwords
        self.exceptions = exceptions

    @classmethod
    def from_config(cls, config: Config | None = None) -> "Normalizer":
        config = config or Config()
        stopwords, _ = read_word_list(config.path_for("stopwords"))
        rows, _ = read_tsv(config.path_for("plural_exceptions"), min_cols=2, max_cols=2)
        return cls(stopwords, {surface.lower(): normal.lower() for surface, normal in rows})

    def stem(self, token: str) -> str:
        """Singular-stem one lowercase token (rule table + irregulars)."""
        if token in self.exceptions:
            return self.exceptions[token]
        if len(token) > 4 and token.endswith("ies"):
            return token[:-3] + "y"
        if len(token) > 3 and token.endswith("es") and (
            token[-3] in "sxz" or token.endswith(("ches", "shes"))
        ):
            return token[:-2]
        if len(token) > 3 and token.endswith("s") and not token.endswith("ss"):
            return token[:-1]
        return token

    def normalize_text(self, text: str) -> str:
        """Apply the canonical-key transformations to free text."""
        tokens = []
        for chunk in text.lower().split():
            for token in _NON_ALNUM.split(chunk):
                if not token or token in self.stopwords:
                    continue
                tokens.append(self.stem(token))
        return " ".join(tokens)

    def normalize(self, mention: Mention) -> str:
        """Canonical key of a mention: state, base tokens, unit, normalized."""
        parts = []
        if mention.state:
            parts.append(mention.state)
        parts.append(mention.base)
        if mention.unit:
            parts.append(mention.unit)
        return self.normalize_text(" ".join(parts))


class SynonymTable:
    """Curated key <-> key equivalences; closure is taken by union-find."""

    def __init__(self, pairs: list[tuple[str, str]]):
        self.pairs = [(a, b) for a, b in pairs if a != b]

    @classmethod
    def load(cls, path: str | Path) -> "SynonymTable":
        rows, _ = read_tsv(path, min_cols=2, max_cols=2)
        return cls([(a, b) for a, b in rows])

    @classmethod
    def empty(cls) -> "SynonymTable":
        return cls([])


class UnionFind:
    def __init__(self):
        self.parent: dict[str, str] = {}

    def find(self, x: str) -> str:
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


@dataclass
class CanonicalEntity:
    id: str
    label: str
    key: str
    # Tuple fields of the exemplar (first-seen) mention.
    base: str = ""
    state: str | None = None
    unit: str | None = None
    members: list[Mention] = field(default_factory=list)
    associations: dict[PersonalValue, int] = field(default_factory=neutral_associations)
    curated: bool = False
    # All distinct member keys (the primary key plus synonym-linked ones).
    keys: list[str] = field(default_factory=list)
    # Carries member_count across snapshot reloads, where members are dropped.
    stored_member_count: int = 0

    @property
    def exemplar(self) -> Mention | None:
        return self.members[0] if self.members else None

    @property
    def member_count(self) -> int:
        return len(self.members) if self.members else self.stored_member_count


def cluster(mentions: list[Mention], synonyms: SynonymTable | None = None,
            normalizer: Normalizer | None = None) -> list[CanonicalEntity]:
    """Group mentions into canonical entities.

    Mentions are merged when their keys are equal or synonym-linked
    (transitively); ids are assigned in first-seen order, labels by
    majority raw surface with lexicographic tie-break.
    """
    normalizer = normalizer or Normalizer.from_config()
    synonyms = synonyms or SynonymTable.empty()
    uf = UnionFind()
    keys = [normalizer.normalize(m) for m in mentions]
    for key in keys:
        uf.find(key)
    for a, b in synonyms.pairs:
        uf.union(a, b)

    groups: dict[str, list[int]] = {}
    for i, key in enumerate(keys):
        groups.setdefault(uf.find(key), []).append(i)

    entities: list[CanonicalEntity] = []
    for ordinal, (_, indices) in enumerate(
        sorted(groups.items(), key=lambda kv: min(kv[1])), start=1
    ):
        members = [mentions[i] for i in indices]
        surface_counts = Counter(m.raw_text for m in members)
        best = min(surface_counts.items(), key=lambda kv: (-kv[1], kv[0]))
        exemplar = members[0]
        entities.append(
            CanonicalEntity(
                id=f"e{ordinal:04d}",
                label=best[0],
                key=keys[indices[0]],
                base=exemplar.base,
                state=exemplar.state,
                unit=exemplar.unit,
                members=members,
                keys=sorted({keys[i] for i in indices}),
            )
        )
    return entities
