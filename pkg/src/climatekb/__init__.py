"""climatekb: a causal climate knowledge base built from news text, plus a
personal-values recommendation layer over it.

The pipeline turns articles into a graph of canonical climate concepts
linked by evidence-backed cause/effect edges, exportable as Turtle. The
recommendation layer scores each concept for a user's ten-value profile
(derived from a short questionnaire) and serves ranked feeds over HTTP.
"""

from .canonical import CanonicalEntity, Normalizer, SynonymTable, cluster
from .causality import (CausalCandidate, CueLexicon, CueLexiconEntry, EvalReport, GoldLabel,
                        default_cue_lexicon, detect, evaluate)
from .config import Config, load_config
from .corpus import Article, Corpus, Sentence, SentenceSplitter, ingest, segment
from .extraction import (AMBIGUOUS_BASE_UNIT, ANAPHORA, CAUSE, EFFECT, IMPLICIT_ENTITY,
                         ExtractionFlag, Mention, MentionParser, extract_pair)
from .kbstore import (BuildMetadata, CausalEdge, KBSnapshot, SentenceRef, load_associations,
                      load_kb, save_snapshot)
from .pipeline import BuildResult, PipelineComponents, build_kb
from .recommend import Recommendation, rank_entities, score_entity
from .turtle import export_turtle, import_turtle, kb_equal
from .values import (PersonalValue, QuestionnaireItem, SCALE_LABELS, VALUE_ORDER, ValueProfile,
                     profile_from_answers, questionnaire)

__version__ = "0.1.0"

__all__ = [
    "AMBIGUOUS_BASE_UNIT",
    "ANAPHORA",
    "Article",
    "BuildMetadata",
    "BuildResult",
    "CAUSE",
    "CanonicalEntity",
    "CausalCandidate",
    "CausalEdge",
    "Config",
    "Corpus",
    "CueLexicon",
    "CueLexiconEntry",
    "EFFECT",
    "EvalReport",
    "ExtractionFlag",
    "GoldLabel",
    "IMPLICIT_ENTITY",
    "KBSnapshot",
    "Mention",
    "MentionParser",
    "Normalizer",
    "PersonalValue",
    "PipelineComponents",
    "QuestionnaireItem",
    "Recommendation",
    "SCALE_LABELS",
    "Sentence",
    "SentenceRef",
    "SentenceSplitter",
    "SynonymTable",
    "VALUE_ORDER",
    "ValueProfile",
    "build_kb",
    "cluster",
    "default_cue_lexicon",
    "detect",
    "evaluate",
    "export_turtle",
    "extract_pair",
    "import_turtle",
    "ingest",
    "kb_equal",
    "load_associations",
    "load_config",
    "load_kb",
    "profile_from_answers",
    "questionnaire",
    "rank_entities",
    "save_snapshot",
    "score_entity",
    "segment",
]
