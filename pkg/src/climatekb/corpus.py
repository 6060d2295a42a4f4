"""Article ingestion and sentence segmentation.

Articles arrive as JSONL, one object per line, with keys ``id``,
``source_name``, ``url``, ``title``, ``published_date`` and ``body``
(unknown keys are ignored). Hard failures (unparseable line, duplicate id)
abort the ingest; per-record problems (empty or too-short body, bad date)
only skip that record and are reported in a summary.

Segmentation is a deterministic rule: split after sentence-final ``.!?``
runs that are followed by whitespace and an uppercase letter (or end of
text), unless a guard-list abbreviation ("Dr.", "U.S.", "Fig.", ...)
immediately precedes a lone period.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .config import Config
from .errors import DuplicateArticleIdError, IngestError
from .resources import read_word_list

_REQUIRED_STR_FIELDS = ("id", "source_name", "url", "title", "body")
_TERMINATORS = ".!?"


@dataclass(frozen=True)
class Article:
    id: str
    source_name: str
    url: str
    title: str
    published_date: str  # ISO-8601 date, or "" when absent
    body: str


@dataclass(frozen=True)
class Sentence:
    article_id: str
    index: int
    text: str
    char_start: int
    char_end: int


@dataclass(frozen=True)
class SkippedRecord:
    line_number: int
    article_id: str
    reason: str


@dataclass
class Corpus:
    articles: list[Article]
    source_sha256: str = ""
    skipped: list[SkippedRecord] = field(default_factory=list)

    def __iter__(self):
        return iter(self.articles)

    def __len__(self) -> int:
        return len(self.articles)


def _valid_date(value: str) -> bool:
    import datetime

    try:
        datetime.date.fromisoformat(value)
        return True
    except ValueError:
        return False


def ingest(path: str | Path, config: Config | None = None) -> Corpus:
    """Read a JSONL article file into a Corpus, in file order."""
    config = config or Config()
    raw = Path(path).read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    articles: list[Article] = []
    skipped: list[SkippedRecord] = []
    seen: set[str] = set()
    for lineno, line in enumerate(raw.decode("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise IngestError(f"invalid JSON ({exc.msg})", lineno) from exc
        if not isinstance(record, dict):
            raise IngestError("article record must be a JSON object", lineno)
        for key in _REQUIRED_STR_FIELDS:
            if key not in record or not isinstance(record[key], str):
                raise IngestError(f"missing or non-string field {key!r}", lineno)
        article_id = record["id"]
        if article_id in seen:
            raise DuplicateArticleIdError(article_id, lineno)
        seen.add(article_id)
        body = record["body"]
        if not body.strip():
            skipped.append(SkippedRecord(lineno, article_id, "empty body"))
            continue
        if len(body.strip()) < config.min_body_chars:
            skipped.append(SkippedRecord(lineno, article_id, f"body shorter than {config.min_body_chars} chars"))
            continue
        published = record.get("published_date", "")
        if published is None:
            published = ""
        if not isinstance(published, str):
            raise IngestError("published_date must be a string when present", lineno)
        if published and not _valid_date(published):
            skipped.append(SkippedRecord(lineno, article_id, f"invalid published_date {published!r}"))
            continue
        articles.append(
            Article(
                id=article_id,
                source_name=record["source_name"],
                url=record["url"],
                title=record["title"],
                published_date=published,
                body=body,
            )
        )
    return Corpus(articles=articles, source_sha256=digest, skipped=skipped)


class SentenceSplitter:
    """Rule-based splitter with an abbreviation guard list."""

    def __init__(self, abbreviations: set[str] | None = None, version: str = ""):
        if abbreviations is None:
            from .config import Config as _C

            abbreviations, version = read_word_list(_C().path_for("abbreviations"))
        self.abbreviations = abbreviations
        self.version = version

    def _is_abbreviation(self, body: str, period_index: int) -> bool:
        # Collect the token ending at this period, including internal periods
        # so "U.S." matches as a whole.
        start = period_index
        while start > 0 and (body[start - 1].isalnum() or body[start - 1] == "."):
            start -= 1
        token = body[start : period_index + 1].lower()
        return token in self.abbreviations

    def split_points(self, body: str) -> list[int]:
        points = []
        i = 0
        n = len(body)
        while i < n:
            if body[i] not in _TERMINATORS:
                i += 1
                continue
            run_start = i
            while i < n and body[i] in _TERMINATORS:
                i += 1
            run = body[run_start:i]
            if run == "." and self._is_abbreviation(body, run_start):
                continue
            if i >= n:
                points.append(i)
                continue
            if not body[i].isspace():
                continue
            j = i
            while j < n and body[j].isspace():
                j += 1
            if j < n and body[j].isalpha() and body[j].isupper():
                points.append(i)
        return points

    def segment(self, article: Article) -> list[Sentence]:
        body = article.body
        sentences: list[Sentence] = []
        prev = 0
        boundaries = self.split_points(body)
        if not boundaries or boundaries[-1] != len(body):
            boundaries.append(len(body))
        for cut in boundaries:
            start, end = prev, cut
            while start < end and body[start].isspace():
                start += 1
            while end > start and body[end - 1].isspace():
                end -= 1
            if end > start:
                sentences.append(
                    Sentence(
                        article_id=article.id,
                        index=len(sentences),
                        text=body[start:end],
                        char_start=start,
                        char_end=end,
                    )
                )
            prev = cut
        return sentences


def segment(article: Article, splitter: SentenceSplitter | None = None) -> list[Sentence]:
    """Split an article body into sentences with exact character offsets."""
    return (splitter or SentenceSplitter()).segment(article)


# --- snapshot persistence ---------------------------------------------------


def dump_article(article: Article) -> str:
    return json.dumps(
        {
            "id": article.id,
            "source_name": article.source_name,
            "url": article.url,
            "title": article.title,
            "published_date": article.published_date,
            "body": article.body,
        },
        ensure_ascii=False,
        sort_keys=True,
        separators=(",", ":"),
    )


def write_snapshot(corpus: Corpus, corpus_path: str | Path, sentences_path: str | Path,
                   splitter: SentenceSplitter | None = None) -> dict[str, int]:
    """Persist the corpus JSONL plus the tab-separated sentence sidecar."""
    splitter = splitter or SentenceSplitter()
    sentence_count = 0
    with open(corpus_path, "w", encoding="utf-8", newline="\n") as fh:
        for article in corpus.articles:
            fh.write(dump_article(article) + "\n")
    with open(sentences_path, "w", encoding="utf-8", newline="\n") as fh:
        for article in corpus.articles:
            for s in splitter.segment(article):
                fh.write(f"{s.article_id}\t{s.index}\t{s.char_start}\t{s.char_end}\n")
                sentence_count += 1
    return {"articles": len(corpus.articles), "sentences": sentence_count}


def load_snapshot(corpus_path: str | Path, sentences_path: str | Path) -> tuple[Corpus, list[Sentence]]:
    """Load a persisted snapshot, rebuilding sentence text from offsets."""
    corpus = ingest(corpus_path)
    bodies = {a.id: a.body for a in corpus.articles}
    sentences: list[Sentence] = []
    for lineno, line in enumerate(Path(sentences_path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise IngestError("sentence sidecar rows need 4 tab-separated fields", lineno)
        article_id, index, start, end = parts[0], int(parts[1]), int(parts[2]), int(parts[3])
        if article_id not in bodies:
            raise IngestError(f"sidecar references unknown article {article_id!r}", lineno)
        text = bodies[article_id][start:end]
        sentences.append(Sentence(article_id, index, text, start, end))
    return corpus, sentences
