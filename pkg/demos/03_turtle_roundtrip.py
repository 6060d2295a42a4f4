#!/usr/bin/env python3
"""Export the KB as Turtle, read it back, and verify nothing was lost.

Entities become named individuals with data properties; each causal edge
is reified so its evidence sentences can travel as annotations.
"""

from climatekb import build_kb, export_turtle, import_turtle, kb_equal
from climatekb.resources import data_path

result = build_kb(data_path("fixture/mini_corpus.jsonl"),
                  synonyms_path=data_path("fixture/synonyms.tsv"),
                  associations_path=data_path("fixture/associations.tsv"))
kb = result.kb

document = export_turtle(kb)
print(f"Turtle document: {len(document)} bytes, {document.count(chr(10))} lines\n")

print("=== Curated entity with associations ===")
moose_block = "\n:e0010" + document.split("\n:e0010", 1)[1].split("\n\n", 1)[0]
print(moose_block)

print("\n=== A reified causal link with two observations ===")
link_block = "\n:l0001" + document.split("\n:l0001", 1)[1].split("\n\n", 1)[0]
print(link_block)

print("\n=== Round trip ===")
reloaded = import_turtle(document)
print(f"import(export(kb)) graph-equal: {kb_equal(kb, reloaded)}")
print(f"re-export byte-identical:      {export_turtle(reloaded) == document}")
