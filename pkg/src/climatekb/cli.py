"""Command-line pipeline driver.

Each stage reads the previous stage's artifact and writes its own, so the
whole KB build runs and re-runs deterministically without the service:

    climatekb ingest --input articles.jsonl --out corpus.jsonl
    climatekb detect --corpus corpus.jsonl --out candidates.jsonl
    climatekb extract --corpus corpus.jsonl --candidates candidates.jsonl --out mentions.jsonl
    climatekb build-kb --corpus corpus.jsonl --mentions mentions.jsonl --out kb.jsonl
    climatekb load-associations --kb kb.jsonl --associations assoc.tsv --out kb.jsonl
    climatekb export --kb kb.jsonl --format ttl --out kb.ttl

Exit codes: 0 success, 1 validation error, 2 I/O error, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import causality, kbstore, pipeline, recommend, turtle, values
from .config import Config, load_config
from .corpus import ingest, load_snapshot, write_snapshot
from .errors import ClimateKBError
from .extraction import dump_mention, load_mentions
from .canonical import SynonymTable

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: A002 - argparse API
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_argparser() -> argparse.ArgumentParser:
    root = _Parser(prog="climatekb", description=__doc__,
                   formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = root.add_subparsers(dest="command", parser_class=_Parser)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="key = value config file")
        return p

    p = add("ingest", "read an article JSONL file into a corpus snapshot")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True, help="corpus snapshot JSONL path")
    p.add_argument("--sentences", help="sentence sidecar path (default: OUT.sentences.tsv)")

    p = add("detect", "score sentences for causality")
    p.add_argument("--corpus", required=True, help="corpus snapshot JSONL")
    p.add_argument("--sentences", help="sentence sidecar (default: CORPUS.sentences.tsv)")
    p.add_argument("--out", required=True, help="candidate JSONL path")
    p.add_argument("--scores", help="external classifier score file (JSONL {text, score})")
    p.add_argument("--threshold", type=float, help="override the decision threshold")

    p = add("extract", "split causal sentences into cause/effect mention tuples")
    p.add_argument("--corpus", required=True)
    p.add_argument("--candidates", required=True)
    p.add_argument("--out", required=True, help="mention JSONL path")

    p = add("build-kb", "cluster mentions and build the causal graph snapshot")
    p.add_argument("--corpus", required=True)
    p.add_argument("--sentences", help="sentence sidecar (default: CORPUS.sentences.tsv)")
    p.add_argument("--mentions", required=True)
    p.add_argument("--synonyms", help="synonym table TSV")
    p.add_argument("--out", required=True, help="KB snapshot JSONL path")

    p = add("load-associations", "apply an expert curation file to a KB snapshot")
    p.add_argument("--kb", required=True)
    p.add_argument("--associations", required=True)
    p.add_argument("--out", required=True)

    p = add("export", "write a KB snapshot as Turtle or native JSONL")
    p.add_argument("--kb", required=True)
    p.add_argument("--format", choices=["ttl", "jsonl"], required=True)
    p.add_argument("--out", required=True)

    p = add("import", "read a Turtle document into a native KB snapshot")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)

    p = add("eval", "score predictions against gold labels")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)

    p = add("score", "rank KB entities for a questionnaire answer file")
    p.add_argument("--kb", required=True)
    p.add_argument("--answers-file", required=True, help='JSON file {"value": answer, ...}')
    p.add_argument("--limit", type=int, default=20)

    p = add("serve", "run the HTTP service")
    p.add_argument("--kb", help="KB snapshot to publish")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--data-dir", help="directory for profile persistence")
    p.add_argument("--admin-token")
    p.add_argument("--cors-origin")

    return root


def _config_from(args: argparse.Namespace) -> Config:
    cfg = Config()
    if getattr(args, "config", None):
        cfg = load_config(args.config, cfg)
    return cfg


def _sidecar(args: argparse.Namespace, attr: str) -> str:
    explicit = getattr(args, "sentences", None)
    return explicit if explicit else f"{getattr(args, attr)}.sentences.tsv"


def _built_at() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH", "")
    if not epoch:
        return ""
    import datetime

    return datetime.datetime.fromtimestamp(int(epoch), tz=datetime.timezone.utc).isoformat()


def _cmd_ingest(args) -> int:
    cfg = _config_from(args)
    corpus = ingest(args.input, cfg)
    stats = write_snapshot(corpus, args.out, _sidecar(args, "out"), _splitter(cfg))
    print(f"ingested {stats['articles']} articles, {stats['sentences']} sentences", file=sys.stderr)
    if corpus.skipped:
        print(f"skipped {len(corpus.skipped)} records:", file=sys.stderr)
        for skip in corpus.skipped:
            print(f"  line {skip.line_number} ({skip.article_id}): {skip.reason}", file=sys.stderr)
    return EXIT_OK


def _splitter(cfg: Config):
    from .corpus import SentenceSplitter
    from .resources import read_word_list

    abbreviations, version = read_word_list(cfg.path_for("abbreviations"))
    return SentenceSplitter(abbreviations, version)


def _cmd_detect(args) -> int:
    cfg = _config_from(args)
    if args.threshold is not None:
        from dataclasses import replace

        cfg = replace(cfg, threshold=args.threshold)
    _, sentences = load_snapshot(args.corpus, _sidecar(args, "corpus"))
    components = pipeline.PipelineComponents.from_config(cfg)
    scores = causality.load_external_scores(args.scores) if args.scores else None
    candidates = pipeline.detect_sentences(sentences, components, scores)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        for candidate in candidates:
            fh.write(pipeline.dump_candidate(candidate) + "\n")
    causal = sum(1 for c in candidates if c.is_causal)
    print(f"scored {len(candidates)} sentences, {causal} causal at threshold "
          f"{cfg.threshold}", file=sys.stderr)
    return EXIT_OK


def _cmd_extract(args) -> int:
    cfg = _config_from(args)
    components = pipeline.PipelineComponents.from_config(cfg)
    candidates = pipeline.load_candidates(args.candidates)
    pairs, failures = pipeline.extract_mentions(candidates, components)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        for pair in pairs:
            fh.write(dump_mention(pair.cause, pair.cause_flags) + "\n")
            fh.write(dump_mention(pair.effect, pair.effect_flags) + "\n")
    failures_path = f"{args.out}.failures.jsonl"
    with open(failures_path, "w", encoding="utf-8", newline="\n") as fh:
        for failure in failures:
            fh.write(json.dumps(
                {"article_id": failure.article_id, "sentence_index": failure.sentence_index,
                 "reason": failure.reason},
                ensure_ascii=False, sort_keys=True, separators=(",", ":")) + "\n")
    print(f"extracted {len(pairs)} mention pairs, {len(failures)} failures", file=sys.stderr)
    return EXIT_OK


def _cmd_build_kb(args) -> int:
    cfg = _config_from(args)
    components = pipeline.PipelineComponents.from_config(cfg)
    corpus, sentences = load_snapshot(args.corpus, _sidecar(args, "corpus"))
    mention_rows = load_mentions(args.mentions)
    pairs = _pairs_from_rows(mention_rows)
    synonyms = SynonymTable.load(args.synonyms) if args.synonyms else None
    result = pipeline.assemble_kb(pairs, sentences, components, synonyms,
                                  corpus_sha256=corpus.source_sha256, built_at=_built_at())
    kbstore.save_snapshot(result.kb, args.out)
    print(f"built KB: {len(result.kb.entities)} entities, {len(result.kb.edges)} edges "
          f"({result.flagged_pairs} flagged pairs excluded, {result.self_loops} self-loops dropped)",
          file=sys.stderr)
    return EXIT_OK


def _pairs_from_rows(rows) -> list:
    from .extraction import CAUSE, MentionPair

    pairs = []
    pending = None
    for mention, flags in rows:
        if mention.role == CAUSE:
            pending = (mention, flags)
        else:
            if pending is None:
                raise ClimateKBError(
                    f"effect mention without preceding cause at "
                    f"{mention.provenance.article_id}#{mention.provenance.sentence_index}")
            pairs.append(MentionPair(pending[0], mention, pending[1], flags))
            pending = None
    if pending is not None:
        raise ClimateKBError("dangling cause mention at end of mention file")
    return pairs


def _cmd_load_associations(args) -> int:
    kb = kbstore.load_kb(args.kb)
    kbstore.load_associations(kb, args.associations)
    kbstore.save_snapshot(kb, args.out)
    curated = sum(1 for e in kb.entities.values() if e.curated)
    print(f"curated {curated} entities", file=sys.stderr)
    return EXIT_OK


def _cmd_export(args) -> int:
    kb = kbstore.load_kb(args.kb)
    if args.format == "ttl":
        Path(args.out).write_text(turtle.export_turtle(kb), encoding="utf-8", newline="\n")
    else:
        kbstore.save_snapshot(kb, args.out)
    print(f"exported {len(kb.entities)} entities, {len(kb.edges)} edges", file=sys.stderr)
    return EXIT_OK


def _cmd_import(args) -> int:
    kb = turtle.import_turtle(Path(args.input).read_text(encoding="utf-8"))
    kbstore.save_snapshot(kb, args.out)
    print(f"imported {len(kb.entities)} entities, {len(kb.edges)} edges", file=sys.stderr)
    return EXIT_OK


def _cmd_eval(args) -> int:
    gold = causality.load_gold_labels(args.gold)
    predictions = causality.load_predictions(args.pred)
    report = causality.evaluate(predictions, gold)
    flags = []
    if not report.precision_defined:
        flags.append("precision undefined")
    if not report.recall_defined:
        flags.append("recall undefined")
    if not report.f1_defined:
        flags.append("f1 undefined")
    print(f"precision={report.precision:.4f} recall={report.recall:.4f} f1={report.f1:.4f}")
    print(f"tp={report.true_positives} fp={report.false_positives} "
          f"fn={report.false_negatives} tn={report.true_negatives}")
    if flags:
        print("flags: " + ", ".join(flags))
    return EXIT_OK


def _cmd_score(args) -> int:
    kb = kbstore.load_kb(args.kb)
    answers = json.loads(Path(args.answers_file).read_text(encoding="utf-8"))
    if not isinstance(answers, dict):
        raise ClimateKBError("answers file must be a JSON object of value -> answer")
    profile = values.profile_from_answers(answers)
    cfg = _config_from(args)
    feed = recommend.rank_entities(profile, kb, args.limit, cfg.include_uncurated)
    print(f"{'rank':>4}  {'score':>8}  {'entity':<8} label")
    for item in feed:
        label = kb.entities[item.entity_id].label
        print(f"{item.rank:>4}  {item.relevance:>8.4f}  {item.entity_id:<8} {label}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceState, create_app

    cfg = _config_from(args)
    from dataclasses import replace

    overrides = {}
    for name in ("host", "port", "admin_token", "cors_origin"):
        value = getattr(args, name.replace("-", "_"), None)
        if value is not None:
            overrides[name] = value
    if args.data_dir is not None:
        overrides["data_dir"] = args.data_dir
    if overrides:
        cfg = replace(cfg, **overrides)
    kb = kbstore.load_kb(args.kb) if args.kb else None
    app = create_app(ServiceState(config=cfg, snapshot=kb))
    uvicorn.run(app, host=cfg.host, port=cfg.port)
    return EXIT_OK


_COMMANDS = {
    "ingest": _cmd_ingest,
    "detect": _cmd_detect,
    "extract": _cmd_extract,
    "build-kb": _cmd_build_kb,
    "load-associations": _cmd_load_associations,
    "export": _cmd_export,
    "import": _cmd_import,
    "eval": _cmd_eval,
    "score": _cmd_score,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_argparser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except ClimateKBError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
