"""Cause/effect span splitting and (state, base, unit) mention parsing.

A causal sentence is split around its highest-weight cue; each side is then
scanned against the state and unit lexicons. The base is the first
uninterrupted run of leftover content tokens, so trailing modifiers
("... of moose available to hunt") fall away while compounds ("climate
pressures", "habitat loss") survive intact. Unresolvable hazards are
flagged, not fixed: pronoun-initial spans get ANAPHORA, pure-state spans
get IMPLICIT_ENTITY, and tokens that could be base or unit get
AMBIGUOUS_BASE_UNIT.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .causality import CausalCandidate, tokenize, CAUSE_LEFT
from .config import Config
from .corpus import Sentence
from .errors import ExtractionFailure, LexiconError
from .resources import read_tsv, read_word_list

CAUSE = "CAUSE"
EFFECT = "EFFECT"

IMPLICIT_ENTITY = "IMPLICIT_ENTITY"
ANAPHORA = "ANAPHORA"
AMBIGUOUS_BASE_UNIT = "AMBIGUOUS_BASE_UNIT"

PRONOUNS = frozenset({"this", "it", "these", "that", "those", "they"})


@dataclass(frozen=True)
class ExtractionFlag:
    kind: str  # IMPLICIT_ENTITY | ANAPHORA | AMBIGUOUS_BASE_UNIT
    detail: str


@dataclass(frozen=True)
class Provenance:
    article_id: str
    sentence_index: int
    char_start: int  # offsets within the sentence text
    char_end: int


@dataclass(frozen=True)
class Mention:
    raw_text: str
    state: str | None
    base: str
    unit: str | None
    role: str  # CAUSE or EFFECT
    provenance: Provenance
    # surface forms actually matched in the span (provenance for audits)
    state_surface: str | None = None
    unit_surface: str | None = None


class TokenLexicon:
    """Surface-form -> normal-form lexicon with longest-match lookup."""

    def __init__(self, rows: list[list[str]], version: str = ""):
        self.normal: dict[tuple[str, ...], str] = {}
        self.ambiguous: set[tuple[str, ...]] = set()
        self.version = version
        self.max_len = 1
        for row in rows:
            surface = tuple(row[0].lower().split())
            if surface in self.normal:
                raise LexiconError(f"duplicate lexicon surface {row[0]!r}")
            self.normal[surface] = row[1].lower()
            if len(row) > 2 and row[2]:
                flags = set(row[2].split(","))
                unknown = flags - {"ambiguous"}
                if unknown:
                    raise LexiconError(f"unknown lexicon flags {sorted(unknown)} for {row[0]!r}")
                if "ambiguous" in flags:
                    self.ambiguous.add(surface)
            self.max_len = max(self.max_len, len(surface))

    @classmethod
    def load(cls, path: str | Path) -> "TokenLexicon":
        rows, version = read_tsv(path, min_cols=2, max_cols=3)
        return cls(rows, version)

    def match_at(self, lowered: list[str], i: int) -> tuple[tuple[str, ...], str] | None:
        """Longest surface match starting at token i, or None."""
        for k in range(min(self.max_len, len(lowered) - i), 0, -1):
            surface = tuple(lowered[i : i + k])
            if surface in self.normal:
                return surface, self.normal[surface]
        return None


@dataclass
class MentionParser:
    state_lexicon: TokenLexicon
    unit_lexicon: TokenLexicon
    stopwords: set[str]

    @classmethod
    def from_config(cls, config: Config | None = None) -> "MentionParser":
        config = config or Config()
        stopwords, _ = read_word_list(config.path_for("stopwords"))
        return cls(
            state_lexicon=TokenLexicon.load(config.path_for("state_lexicon")),
            unit_lexicon=TokenLexicon.load(config.path_for("unit_lexicon")),
            stopwords=stopwords,
        )

    # -- span splitting --------------------------------------------------

    def _trim_span(self, text: str, offset: int, sentence: Sentence) -> tuple[str, int, int]:
        """Drop edge punctuation and edge stopwords; return (text, start, end)."""
        tokens = tokenize(text)
        lo, hi = 0, len(tokens)
        while lo < hi and tokens[lo][0].lower() in self.stopwords:
            lo += 1
        while hi > lo and tokens[hi - 1][0].lower() in self.stopwords:
            hi -= 1
        if lo >= hi:
            return "", offset, offset
        start = offset + tokens[lo][1]
        end = offset + tokens[hi - 1][2]
        return sentence.text[start:end], start, end

    def split_spans(self, candidate: CausalCandidate) -> tuple[tuple[str, int, int], tuple[str, int, int]]:
        """Cause and effect spans around the best cue, as (text, start, end).

        The highest-weight cue wins (leftmost on ties); empty spans after
        trimming raise ExtractionFailure.
        """
        if not candidate.is_causal:
            raise ExtractionFailure("candidate is not causal")
        if not candidate.matched_cues:
            raise ExtractionFailure("no cue match to split on")
        cue = max(candidate.matched_cues, key=lambda m: (m.entry.weight, -m.start))
        sentence = candidate.sentence
        left = self._trim_span(sentence.text[: cue.start], 0, sentence)
        right = self._trim_span(sentence.text[cue.end :], cue.end, sentence)
        cause, effect = (left, right) if cue.entry.direction == CAUSE_LEFT else (right, left)
        if not cause[0]:
            raise ExtractionFailure(f"empty cause span around cue {cue.entry.pattern!r}")
        if not effect[0]:
            raise ExtractionFailure(f"empty effect span around cue {cue.entry.pattern!r}")
        return cause, effect

    # -- mention parsing -------------------------------------------------

    def parse_mention(self, span: str, role: str, provenance: Provenance) -> tuple[Mention, list[ExtractionFlag]]:
        """Decompose one span into a (state, base, unit) mention.

        Scans left to right with longest-match lexicon lookup; the first
        state and first unit hit are claimed, later lexicon hits are
        excluded from the base. The base is the first contiguous run of
        unclaimed content tokens; demotion rules keep it non-empty or the
        parse fails.
        """
        tokens = tokenize(span)
        if not tokens:
            raise ExtractionFailure(f"span has no tokens: {span!r}")
        lowered = [t[0].lower() for t in tokens]
        flags: list[ExtractionFlag] = []

        state: str | None = None
        unit: str | None = None
        state_surface: str | None = None
        unit_surface: str | None = None
        # CONTENT tokens may enter the base; STOP/EXCLUDED may not.
        # EXCLUDED tokens additionally break base-run contiguity.
        kind = ["CONTENT"] * len(tokens)
        i = 0
        while i < len(tokens):
            tok = lowered[i]
            if tok in self.stopwords:
                kind[i] = "STOP"
                i += 1
                continue
            if tok in PRONOUNS:
                kind[i] = "PRONOUN"
                i += 1
                continue
            m = self.state_lexicon.match_at(lowered, i)
            if m is not None:
                surface, normal = m
                width = len(surface)
                label = "STATE" if state is None else "EXCLUDED"
                if state is None:
                    state = normal
                    state_surface = " ".join(tokens[j][0] for j in range(i, i + width))
                for j in range(i, i + width):
                    kind[j] = label
                i += width
                continue
            m = self.unit_lexicon.match_at(lowered, i)
            if m is not None:
                surface, normal = m
                width = len(surface)
                if surface in self.unit_lexicon.ambiguous:
                    # Could be base or unit; keep it in the base and flag it.
                    flags.append(ExtractionFlag(AMBIGUOUS_BASE_UNIT,
                                                f"token {' '.join(surface)!r} can be a base or a unit"))
                    i += width
                    continue
                label = "UNIT" if unit is None else "EXCLUDED"
                if unit is None:
                    unit = normal
                    unit_surface = " ".join(tokens[j][0] for j in range(i, i + width))
                for j in range(i, i + width):
                    kind[j] = label
                i += width
                continue
            i += 1

        # Base: first maximal run of adjacent CONTENT tokens, where "adjacent"
        # means nothing but whitespace separates them in the span.
        base_tokens: list[str] = []
        run: list[int] = []
        runs: list[list[int]] = []
        for idx, k in enumerate(kind):
            if k == "CONTENT":
                if run:
                    prev = tokens[run[-1]]
                    gap = span[prev[2] : tokens[idx][1]]
                    if idx == run[-1] + 1 and gap.strip() == "":
                        run.append(idx)
                        continue
                    runs.append(run)
                run = [idx]
            elif run:
                runs.append(run)
                run = []
        if run:
            runs.append(run)
        if runs:
            base_tokens = [lowered[i] for i in runs[0]]

        pronoun_initial = kind[0] == "PRONOUN"
        if pronoun_initial:
            flags.append(ExtractionFlag(ANAPHORA, f"span starts with pronoun {lowered[0]!r}"))

        if not base_tokens:
            if pronoun_initial:
                base_tokens = [lowered[0]]
            elif unit is not None:
                # Demote the unit token into the base slot.
                base_tokens = unit_surface.lower().split()  # type: ignore[union-attr]
                flags.append(ExtractionFlag(AMBIGUOUS_BASE_UNIT,
                                            f"unit token {unit_surface!r} demoted to base"))
                unit = None
                unit_surface = None
            elif state is not None:
                # Pure state words: the changed entity is implied, not named.
                base_tokens = [lowered[i] for i, k in enumerate(kind) if k in ("STATE", "EXCLUDED")]
                flags.append(ExtractionFlag(IMPLICIT_ENTITY,
                                            f"span {span!r} names only a change of state"))
                state = None
                state_surface = None
            else:
                raise ExtractionFailure(f"no base tokens in span: {span!r}")

        mention = Mention(
            raw_text=span,
            state=state,
            base=" ".join(base_tokens),
            unit=unit,
            role=role,
            provenance=provenance,
            state_surface=state_surface,
            unit_surface=unit_surface,
        )
        return mention, flags


@dataclass
class MentionPair:
    cause: Mention
    effect: Mention
    cause_flags: list[ExtractionFlag]
    effect_flags: list[ExtractionFlag]

    @property
    def hazard_flags(self) -> list[ExtractionFlag]:
        """Flags that exclude the pair from KB edges by default."""
        return [f for f in self.cause_flags + self.effect_flags
                if f.kind in (ANAPHORA, IMPLICIT_ENTITY)]


@dataclass(frozen=True)
class FailedExtraction:
    article_id: str
    sentence_index: int
    reason: str


def extract_pair(candidate: CausalCandidate, parser: MentionParser) -> MentionPair:
    """Extract the cause/effect mention pair of one causal sentence.

    Mentions come in pairs or not at all: a failure on either side raises
    and nothing is emitted.
    """
    (cause_text, c_start, c_end), (effect_text, e_start, e_end) = parser.split_spans(candidate)
    s = candidate.sentence
    cause, cause_flags = parser.parse_mention(
        cause_text, CAUSE, Provenance(s.article_id, s.index, c_start, c_end))
    effect, effect_flags = parser.parse_mention(
        effect_text, EFFECT, Provenance(s.article_id, s.index, e_start, e_end))
    return MentionPair(cause, effect, cause_flags, effect_flags)


# --- persistence -------------------------------------------------------------


def mention_record(mention: Mention, flags: list[ExtractionFlag]) -> dict:
    return {
        "article_id": mention.provenance.article_id,
        "sentence_index": mention.provenance.sentence_index,
        "role": mention.role,
        "state": mention.state,
        "base": mention.base,
        "unit": mention.unit,
        "raw_text": mention.raw_text,
        "flags": [{"kind": f.kind, "detail": f.detail} for f in flags],
        "span_start": mention.provenance.char_start,
        "span_end": mention.provenance.char_end,
    }


def dump_mention(mention: Mention, flags: list[ExtractionFlag]) -> str:
    return json.dumps(mention_record(mention, flags), ensure_ascii=False, sort_keys=True,
                      separators=(",", ":"))


def load_mentions(path: str | Path) -> list[tuple[Mention, list[ExtractionFlag]]]:
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        row = json.loads(line)
        mention = Mention(
            raw_text=row["raw_text"],
            state=row["state"],
            base=row["base"],
            unit=row["unit"],
            role=row["role"],
            provenance=Provenance(row["article_id"], row["sentence_index"],
                                  row.get("span_start", 0), row.get("span_end", 0)),
        )
        flags = [ExtractionFlag(f["kind"], f["detail"]) for f in row.get("flags", [])]
        out.append((mention, flags))
    return out
