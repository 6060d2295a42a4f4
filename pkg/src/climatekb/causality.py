"""Causal sentence detection and the precision/recall evaluation harness.

The shipped detector is a deterministic cue lexicon: a sentence's score is
the maximum weight over all matched cues, with a negation guard that damps
a cue's effective weight when "not", "no", "never" or "doesn't" appears
within a few tokens before it. Any external classifier can be plugged in
through a score file (JSONL ``{text, score}``) without touching the
pipeline; cue matches are still computed so downstream span splitting has
anchors to work with.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .config import Config
from .corpus import Sentence
from .errors import EvaluationError, LexiconError
from .resources import read_tsv

CAUSE_LEFT = "CAUSE_LEFT"
CAUSE_RIGHT = "CAUSE_RIGHT"

NEGATION_TOKENS = frozenset({"not", "no", "never", "doesn't"})

_TOKEN_RE = re.compile(r"[A-Za-z0-9]+(?:['’-][A-Za-z0-9]+)*")


def tokenize(text: str) -> list[tuple[str, int, int]]:
    """Word tokens with character offsets; case preserved."""
    return [(m.group(0), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


@dataclass(frozen=True)
class CueLexiconEntry:
    pattern: str  # lowercase, 1-4 space-separated tokens
    weight: float
    direction: str  # CAUSE_LEFT or CAUSE_RIGHT

    @property
    def tokens(self) -> tuple[str, ...]:
        return tuple(self.pattern.split())


@dataclass
class CueLexicon:
    entries: list[CueLexiconEntry]
    version: str = ""

    def __post_init__(self):
        seen = set()
        for e in self.entries:
            if not 1 <= len(e.tokens) <= 4:
                raise LexiconError(f"cue pattern must have 1-4 tokens: {e.pattern!r}")
            if e.pattern != e.pattern.lower():
                raise LexiconError(f"cue pattern must be lowercase: {e.pattern!r}")
            if not 0.0 < e.weight <= 1.0:
                raise LexiconError(f"cue weight must be in (0, 1]: {e.pattern!r} -> {e.weight}")
            if e.direction not in (CAUSE_LEFT, CAUSE_RIGHT):
                raise LexiconError(f"bad cue direction {e.direction!r} for {e.pattern!r}")
            if e.pattern in seen:
                raise LexiconError(f"duplicate cue pattern {e.pattern!r}")
            seen.add(e.pattern)

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def load(cls, path: str | Path) -> "CueLexicon":
        rows, version = read_tsv(path, min_cols=3, max_cols=3)
        entries = [CueLexiconEntry(p, float(w), d) for p, w, d in rows]
        return cls(entries=entries, version=version)


def default_cue_lexicon(config: Config | None = None) -> CueLexicon:
    return CueLexicon.load((config or Config()).path_for("cue_lexicon"))


@dataclass(frozen=True)
class CueMatch:
    entry: CueLexiconEntry
    start: int  # character offsets within the sentence
    end: int
    token_index: int
    negated: bool


@dataclass
class CausalCandidate:
    sentence: Sentence
    score: float
    matched_cues: list[CueMatch]
    is_causal: bool


def find_cues(text: str, lexicon: CueLexicon, negation_window: int = 3) -> list[CueMatch]:
    """All lexicon hits in left-to-right order, with negation marks."""
    tokens = tokenize(text)
    lowered = [t[0].lower() for t in tokens]
    matches: list[CueMatch] = []
    for entry in lexicon.entries:
        pat = entry.tokens
        k = len(pat)
        for i in range(len(tokens) - k + 1):
            if tuple(lowered[i : i + k]) == pat:
                window = lowered[max(0, i - negation_window) : i]
                matches.append(
                    CueMatch(
                        entry=entry,
                        start=tokens[i][1],
                        end=tokens[i + k - 1][2],
                        token_index=i,
                        negated=bool(NEGATION_TOKENS.intersection(window)),
                    )
                )
    matches.sort(key=lambda m: (m.start, m.end, m.entry.pattern))
    return matches


def detect(sentence: Sentence, lexicon: CueLexicon, threshold: float = 0.5,
           negation_window: int = 3, negation_factor: float = 0.25) -> CausalCandidate:
    """Score one sentence against the cue lexicon.

    The score is the maximum effective weight over matched cues (zero when
    nothing matches); a negated cue contributes weight * negation_factor.
    """
    if len(lexicon) == 0:
        raise LexiconError("cue lexicon is empty")
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    matches = find_cues(sentence.text, lexicon, negation_window)
    score = 0.0
    for m in matches:
        w = m.entry.weight * (negation_factor if m.negated else 1.0)
        score = max(score, w)
    return CausalCandidate(sentence=sentence, score=score, matched_cues=matches,
                           is_causal=score >= threshold)


def detect_with_scores(sentence: Sentence, lexicon: CueLexicon, scores: dict[str, float],
                       threshold: float = 0.5) -> CausalCandidate:
    """Build a candidate from an external classifier's score file.

    Cue matches are still collected (span splitting needs them); the
    decision comes from the external score, defaulting to 0 for unseen text.
    """
    matches = find_cues(sentence.text, lexicon)
    score = float(scores.get(sentence.text, 0.0))
    return CausalCandidate(sentence=sentence, score=score, matched_cues=matches,
                           is_causal=score >= threshold)


# --- evaluation --------------------------------------------------------------


@dataclass(frozen=True)
class GoldLabel:
    sentence_text: str
    label: bool


@dataclass(frozen=True)
class EvalReport:
    true_positives: int
    false_positives: int
    false_negatives: int
    true_negatives: int
    precision: float
    recall: float
    f1: float
    precision_defined: bool = True
    recall_defined: bool = True
    f1_defined: bool = True


def evaluate(predictions: list[tuple[str, bool]], gold: list[GoldLabel]) -> EvalReport:
    """Confusion-matrix metrics of predictions against gold labels.

    Every gold sentence must be predicted exactly once (matched by exact
    text); predictions for texts outside the gold set are ignored.
    """
    seen_gold: set[str] = set()
    for g in gold:
        if not g.sentence_text:
            raise EvaluationError("gold label with empty sentence text")
        if g.sentence_text in seen_gold:
            raise EvaluationError(f"duplicate gold sentence: {g.sentence_text!r}")
        seen_gold.add(g.sentence_text)
    pred_map: dict[str, bool] = {}
    for text, is_causal in predictions:
        if text in pred_map and text in seen_gold:
            raise EvaluationError(f"duplicate prediction for gold sentence: {text!r}")
        pred_map[text] = bool(is_causal)
    tp = fp = fn = tn = 0
    for g in gold:
        if g.sentence_text not in pred_map:
            raise EvaluationError(f"missing prediction for gold sentence: {g.sentence_text!r}")
        predicted = pred_map[g.sentence_text]
        if predicted and g.label:
            tp += 1
        elif predicted and not g.label:
            fp += 1
        elif not predicted and g.label:
            fn += 1
        else:
            tn += 1
    precision_defined = (tp + fp) > 0
    recall_defined = (tp + fn) > 0
    precision = tp / (tp + fp) if precision_defined else 0.0
    recall = tp / (tp + fn) if recall_defined else 0.0
    f1_defined = precision_defined and recall_defined and (precision + recall) > 0
    f1 = 2 * precision * recall / (precision + recall) if f1_defined else 0.0
    return EvalReport(tp, fp, fn, tn, precision, recall, f1,
                      precision_defined, recall_defined, f1_defined)


# --- file formats ------------------------------------------------------------


def load_gold_labels(path: str | Path) -> list[GoldLabel]:
    """Read a JSONL gold file: one {"text": ..., "label": ...} per line."""
    labels = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        try:
            row = json.loads(line)
            labels.append(GoldLabel(sentence_text=row["text"], label=bool(row["label"])))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise EvaluationError(f"bad gold label on line {lineno}: {exc}") from exc
    return labels


def load_predictions(path: str | Path) -> list[tuple[str, bool]]:
    """Read a JSONL prediction file: one {"text": ..., "label": ...} per line."""
    preds = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        try:
            row = json.loads(line)
            preds.append((row["text"], bool(row["label"])))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise EvaluationError(f"bad prediction on line {lineno}: {exc}") from exc
    return preds


def load_external_scores(path: str | Path) -> dict[str, float]:
    """Read a JSONL score file: one {"text": ..., "score": ...} per line."""
    scores: dict[str, float] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        try:
            row = json.loads(line)
            score = float(row["score"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise EvaluationError(f"bad score row on line {lineno}: {exc}") from exc
        if not 0.0 <= score <= 1.0:
            raise EvaluationError(f"score out of [0, 1] on line {lineno}: {score}")
        scores[row["text"]] = score
    return scores
