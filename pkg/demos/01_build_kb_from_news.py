#!/usr/bin/env python3
"""Walk the knowledge-discovery pipeline end to end on the bundled mini-corpus.

Articles -> sentences -> causal candidates -> (state, base, unit) mention
pairs -> canonical entities -> evidence-backed causal graph.
"""

from climatekb import Config, PipelineComponents, build_kb, ingest, segment
from climatekb.resources import data_path

corpus_path = data_path("fixture/mini_corpus.jsonl")
components = PipelineComponents.from_config(Config())

print("=== 1. Ingest & segment ===")
corpus = ingest(corpus_path)
print(f"{len(corpus)} articles ingested, {len(corpus.skipped)} skipped")
first = corpus.articles[0]
for sentence in segment(first, components.splitter):
    print(f"  [{first.id}#{sentence.index}] {sentence.text}")

print("\n=== 2. Causality detection (cue-lexicon baseline) ===")
from climatekb import detect

for sentence in segment(corpus.articles[5], components.splitter):  # the negated article
    candidate = detect(sentence, components.cue_lexicon)
    cues = ", ".join(m.entry.pattern + (" [negated]" if m.negated else "")
                     for m in candidate.matched_cues) or "-"
    print(f"  score={candidate.score:.3f} causal={candidate.is_causal!s:5} cues=({cues})")
    print(f"    {sentence.text}")

print("\n=== 3. Full build ===")
result = build_kb(corpus_path,
                  synonyms_path=data_path("fixture/synonyms.tsv"),
                  associations_path=data_path("fixture/associations.tsv"))
kb = result.kb
causal = sum(1 for c in result.candidates if c.is_causal)
print(f"{causal}/{len(result.candidates)} sentences causal; "
      f"{len(result.pairs)} mention pairs ({result.flagged_pairs} flagged pairs kept out of the graph)")
print(f"KB: {len(kb.entities)} canonical entities, {len(kb.edges)} causal edges\n")

print(f"{'id':6} {'key':32} {'(state, base, unit)':42} members")
for entity in kb.sorted_entities():
    tuple_repr = f"({entity.state}, {entity.base}, {entity.unit})"
    print(f"{entity.id:6} {entity.key:32} {tuple_repr:42} {entity.member_count}")

print("\nCausal edges (cause -> effect, observation count):")
labels = {e.id: e.key for e in kb.entities.values()}
for edge in kb.sorted_edges():
    print(f"  {labels[edge.cause_id]:32} -> {labels[edge.effect_id]:28} x{edge.count}")
    print(f"      \"{edge.evidence[0].text}\"")
