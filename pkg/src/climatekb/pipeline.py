"""End-to-end KB construction: articles in, KB snapshot out.

Stages are pure and communicate via plain data, so the CLI can run them
one at a time against files while the service rebuild runs them in memory.
Mention pairs carrying anaphora or implicit-entity flags are persisted but
kept out of the graph unless ``include_flagged`` is set; self-loops are
dropped and counted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from . import canonical, causality, corpus, extraction, kbstore
from .config import Config
from .errors import ExtractionFailure
from .resources import read_data_file, read_word_list


@dataclass
class PipelineComponents:
    config: Config
    splitter: corpus.SentenceSplitter
    cue_lexicon: causality.CueLexicon
    parser: extraction.MentionParser
    normalizer: canonical.Normalizer

    @classmethod
    def from_config(cls, config: Config | None = None) -> "PipelineComponents":
        config = config or Config()
        abbreviations, abbrev_version = read_word_list(config.path_for("abbreviations"))
        return cls(
            config=config,
            splitter=corpus.SentenceSplitter(abbreviations, abbrev_version),
            cue_lexicon=causality.CueLexicon.load(config.path_for("cue_lexicon")),
            parser=extraction.MentionParser.from_config(config),
            normalizer=canonical.Normalizer.from_config(config),
        )

    def lexicon_versions(self) -> dict[str, str]:
        versions = {"cue_lexicon": self.cue_lexicon.version,
                    "state_lexicon": self.parser.state_lexicon.version,
                    "unit_lexicon": self.parser.unit_lexicon.version,
                    "abbreviations": self.splitter.version}
        for name in ("stopwords", "plural_exceptions"):
            _, version = read_data_file(self.config.path_for(name))
            versions[name] = version
        return versions


@dataclass
class BuildResult:
    kb: kbstore.KBSnapshot
    candidates: list[causality.CausalCandidate] = field(default_factory=list)
    pairs: list[extraction.MentionPair] = field(default_factory=list)
    failures: list[extraction.FailedExtraction] = field(default_factory=list)
    flagged_pairs: int = 0
    self_loops: int = 0


def detect_sentences(sentences: list[corpus.Sentence], components: PipelineComponents,
                     external_scores: dict[str, float] | None = None) -> list[causality.CausalCandidate]:
    cfg = components.config
    out = []
    for sentence in sentences:
        if external_scores is not None:
            out.append(causality.detect_with_scores(
                sentence, components.cue_lexicon, external_scores, cfg.threshold))
        else:
            out.append(causality.detect(
                sentence, components.cue_lexicon, cfg.threshold,
                cfg.negation_window, cfg.negation_factor))
    return out


def extract_mentions(candidates: list[causality.CausalCandidate],
                     components: PipelineComponents
                     ) -> tuple[list[extraction.MentionPair], list[extraction.FailedExtraction]]:
    pairs: list[extraction.MentionPair] = []
    failures: list[extraction.FailedExtraction] = []
    for candidate in candidates:
        if not candidate.is_causal:
            continue
        try:
            pairs.append(extraction.extract_pair(candidate, components.parser))
        except ExtractionFailure as exc:
            failures.append(extraction.FailedExtraction(
                candidate.sentence.article_id, candidate.sentence.index, str(exc)))
    return pairs, failures


def assemble_kb(pairs: list[extraction.MentionPair], sentences: list[corpus.Sentence],
                components: PipelineComponents,
                synonyms: canonical.SynonymTable | None = None,
                corpus_sha256: str = "", built_at: str = "") -> BuildResult:
    """Cluster mention pairs into entities and populate the causal graph."""
    cfg = components.config
    kept = [p for p in pairs if cfg.include_flagged or not p.hazard_flags]
    flagged = len(pairs) - len(kept)
    mentions: list[extraction.Mention] = []
    for pair in kept:
        mentions.append(pair.cause)
        mentions.append(pair.effect)
    entities = canonical.cluster(mentions, synonyms, components.normalizer)
    entity_of: dict[int, canonical.CanonicalEntity] = {}
    for entity in entities:
        for member in entity.members:
            entity_of[id(member)] = entity

    kb = kbstore.KBSnapshot(metadata=kbstore.BuildMetadata(
        corpus_sha256=corpus_sha256,
        lexicon_versions=components.lexicon_versions(),
        built_at=built_at,
    ))
    for entity in entities:
        kb.add_entity(entity)

    sentence_text = {(s.article_id, s.index): s.text for s in sentences}
    self_loops = 0
    for pair in kept:
        cause_entity = entity_of[id(pair.cause)]
        effect_entity = entity_of[id(pair.effect)]
        if cause_entity.id == effect_entity.id:
            self_loops += 1
            continue
        prov = pair.cause.provenance
        ref = kbstore.SentenceRef(
            prov.article_id, prov.sentence_index,
            sentence_text[(prov.article_id, prov.sentence_index)])
        kb.upsert_edge(cause_entity.id, effect_entity.id, ref)
    kb.check_integrity()
    return BuildResult(kb=kb, pairs=pairs, flagged_pairs=flagged, self_loops=self_loops)


def build_kb(corpus_path: str | Path, synonyms_path: str | Path | None = None,
             associations_path: str | Path | None = None,
             config: Config | None = None,
             external_scores: dict[str, float] | None = None,
             built_at: str = "") -> BuildResult:
    """Run the whole pipeline from an article file to a finished snapshot."""
    components = PipelineComponents.from_config(config)
    loaded = corpus.ingest(corpus_path, components.config)
    sentences: list[corpus.Sentence] = []
    for article in loaded.articles:
        sentences.extend(components.splitter.segment(article))
    candidates = detect_sentences(sentences, components, external_scores)
    pairs, failures = extract_mentions(candidates, components)
    synonyms = canonical.SynonymTable.load(synonyms_path) if synonyms_path else None
    result = assemble_kb(pairs, sentences, components, synonyms,
                         corpus_sha256=loaded.source_sha256, built_at=built_at)
    result.candidates = candidates
    result.failures = failures
    if associations_path:
        kbstore.load_associations(result.kb, associations_path)
    return result


# --- stage artifact formats (used by the CLI) ---------------------------------


def dump_candidate(candidate: causality.CausalCandidate) -> str:
    return json.dumps(
        {
            "article_id": candidate.sentence.article_id,
            "sentence_index": candidate.sentence.index,
            "text": candidate.sentence.text,
            "score": candidate.score,
            "is_causal": candidate.is_causal,
            "matched_cues": [
                {
                    "pattern": m.entry.pattern,
                    "weight": m.entry.weight,
                    "direction": m.entry.direction,
                    "start": m.start,
                    "end": m.end,
                    "negated": m.negated,
                }
                for m in candidate.matched_cues
            ],
        },
        ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def load_candidates(path: str | Path) -> list[causality.CausalCandidate]:
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        row = json.loads(line)
        sentence = corpus.Sentence(row["article_id"], row["sentence_index"], row["text"], 0, 0)
        matches = [
            causality.CueMatch(
                entry=causality.CueLexiconEntry(m["pattern"], m["weight"], m["direction"]),
                start=m["start"], end=m["end"], token_index=-1, negated=m["negated"])
            for m in row["matched_cues"]
        ]
        out.append(causality.CausalCandidate(
            sentence=sentence, score=row["score"], matched_cues=matches,
            is_causal=row["is_causal"]))
    return out
