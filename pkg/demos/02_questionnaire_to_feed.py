#!/usr/bin/env python3
"""From questionnaire answers to a personalized, evidence-backed feed.

Two synthetic respondents answer the ten-item questionnaire; their value
profiles re-rank the same knowledge base in different ways.
"""

from climatekb import (PersonalValue, VALUE_ORDER, build_kb, profile_from_answers,
                       questionnaire, rank_entities)
from climatekb.resources import data_path

print("=== The questionnaire (6-point scale, one item per value) ===")
for item in questionnaire():
    print(f"  {item.id:>2}. [{item.value.value:<14}] {item.statement}")

result = build_kb(data_path("fixture/mini_corpus.jsonl"),
                  synonyms_path=data_path("fixture/synonyms.tsv"),
                  associations_path=data_path("fixture/associations.tsv"))
kb = result.kb

personas = {
    "The competitor (power, achievement, stimulation high)": {
        PersonalValue.CONFORMITY: 2, PersonalValue.TRADITION: 2, PersonalValue.BENEVOLENCE: 3,
        PersonalValue.UNIVERSALISM: 2, PersonalValue.SELF_DIRECTION: 4,
        PersonalValue.STIMULATION: 6, PersonalValue.HEDONISM: 5, PersonalValue.ACHIEVEMENT: 6,
        PersonalValue.POWER: 6, PersonalValue.SECURITY: 3,
    },
    "The guardian (universalism, benevolence, security high)": {
        PersonalValue.CONFORMITY: 4, PersonalValue.TRADITION: 4, PersonalValue.BENEVOLENCE: 6,
        PersonalValue.UNIVERSALISM: 6, PersonalValue.SELF_DIRECTION: 3,
        PersonalValue.STIMULATION: 2, PersonalValue.HEDONISM: 2, PersonalValue.ACHIEVEMENT: 3,
        PersonalValue.POWER: 1, PersonalValue.SECURITY: 6,
    },
}

for name, answers in personas.items():
    profile = profile_from_answers(answers)
    weights = ", ".join(f"{v.value}={profile.u[v]:.1f}" for v in VALUE_ORDER if profile.u[v] >= 0.8)
    print(f"\n=== {name} ===")
    print(f"strongest weights: {weights}")
    for item in rank_entities(profile, kb, limit=4):
        label = kb.entities[item.entity_id].label
        print(f"  #{item.rank} S={item.relevance:+.2f}  {label}")
        if item.evidence_snippet:
            print(f"      \"{item.evidence_snippet}\"")
