from __future__ import annotations

import random

import pytest

from climatekb import CanonicalEntity, KBSnapshot, SentenceRef, load_associations, load_kb, save_snapshot
from climatekb.errors import AssociationFileError, IntegrityError
from climatekb.turtle import kb_equal
from climatekb.values import PersonalValue, VALUE_ORDER

from conftest import random_kb


def entity(entity_id: str, key: str | None = None) -> CanonicalEntity:
    return CanonicalEntity(id=entity_id, label=key or entity_id, key=key or entity_id,
                           base=key or entity_id)


def ref(i: int = 0) -> SentenceRef:
    return SentenceRef("a01", i, f"evidence sentence {i}")


class TestUpsertEdge:
    def test_repeat_insert_appends_evidence(self):
        kb = KBSnapshot()
        kb.add_entity(entity("e0001"))
        kb.add_entity(entity("e0002"))
        kb.upsert_edge("e0001", "e0002", ref(0))
        edge = kb.upsert_edge("e0001", "e0002", ref(1))
        assert len(kb.edges) == 1
        assert edge.count == 2
        assert [r.sentence_index for r in edge.evidence] == [0, 1]

    def test_self_loop_rejected(self):
        kb = KBSnapshot()
        kb.add_entity(entity("e0001"))
        with pytest.raises(IntegrityError, match="self-causation"):
            kb.upsert_edge("e0001", "e0001", ref())

    def test_unknown_endpoint_rejected(self):
        kb = KBSnapshot()
        kb.add_entity(entity("e0001"))
        with pytest.raises(IntegrityError, match="e0099"):
            kb.upsert_edge("e0001", "e0099", ref())

    def test_integrity_checked_after_mutations(self):
        rng = random.Random(7)
        kb = random_kb(rng)
        kb.check_integrity()
        for edge in kb.edges.values():
            assert edge.count == len(edge.evidence) >= 1

    def test_fixture_edge_multiset_matches_hand_trace(self, fixture_kb):
        # Hand-traced once over the 12-article fixture (see the mini corpus):
        # eleven upserts collapse to ten edges, with the soil edge observed
        # twice (articles a01 and a11).
        expected = {
            ("e0001", "e0002"): 2,  # warming temperature -> drying soil
            ("e0002", "e0003"): 1,  # drying soil -> crop yield
            ("e0004", "e0005"): 1,  # warming ocean -> strengthening hurricane
            ("e0006", "e0007"): 1,  # rising sea level -> coastal erosion
            ("e0006", "e0008"): 1,  # rising sea level -> worsening flooding
            ("e0009", "e0010"): 1,  # rising winter temperature -> decrease moose population
            ("e0011", "e0012"): 1,  # climate pressure -> resource availability
            ("e0013", "e0004"): 1,  # rising carbon dioxide level -> warming ocean
            ("e0013", "e0014"): 1,  # rising carbon dioxide level -> ocean acidification
            ("e0015", "e0016"): 1,  # deforestation -> habitat loss
        }
        assert {k: e.count for k, e in fixture_kb.edges.items()} == expected


class TestLoadAssociations:
    def make_kb(self):
        kb = KBSnapshot()
        kb.add_entity(entity("e0001", "decrease moose population"))
        kb.add_entity(entity("e0002", "warming ocean"))
        return kb

    def test_worked_example_scores(self, tmp_path):
        kb = self.make_kb()
        path = tmp_path / "assoc.tsv"
        path.write_text(
            "# version: 1\n"
            "decrease moose population\tpower\t1\n"
            "decrease moose population\tstimulation\t1\n"
            "decrease moose population\thedonism\t1\n"
            "decrease moose population\tuniversalism\t-1\n",
            encoding="utf-8")
        load_associations(kb, path)
        e = kb.entities["e0001"]
        assert e.curated
        assert e.associations[PersonalValue.POWER] == 1
        assert e.associations[PersonalValue.STIMULATION] == 1
        assert e.associations[PersonalValue.HEDONISM] == 1
        assert e.associations[PersonalValue.UNIVERSALISM] == -1
        zeros = [v for v in VALUE_ORDER if e.associations[v] == 0]
        assert len(zeros) == 6
        assert not kb.entities["e0002"].curated

    def test_empty_file_curates_nothing(self, tmp_path):
        kb = self.make_kb()
        path = tmp_path / "assoc.tsv"
        path.write_text("# version: 1\n", encoding="utf-8")
        load_associations(kb, path)
        assert all(not e.curated for e in kb.entities.values())
        assert all(score == 0 for e in kb.entities.values()
                   for score in e.associations.values())

    def test_out_of_domain_score_is_row_error(self, tmp_path):
        kb = self.make_kb()
        path = tmp_path / "assoc.tsv"
        path.write_text("# version: 1\nwarming ocean\tpower\t2\n", encoding="utf-8")
        with pytest.raises(AssociationFileError, match="row 1"):
            load_associations(kb, path)

    def test_unknown_value_name_is_row_error(self, tmp_path):
        kb = self.make_kb()
        path = tmp_path / "assoc.tsv"
        path.write_text("# version: 1\nwarming ocean\tgreed\t1\n", encoding="utf-8")
        with pytest.raises(AssociationFileError, match="greed"):
            load_associations(kb, path)

    def test_unknown_keys_listed_together(self, tmp_path):
        kb = self.make_kb()
        path = tmp_path / "assoc.tsv"
        path.write_text(
            "# version: 1\n"
            "no such key\tpower\t1\n"
            "warming ocean\tpower\t1\n"
            "another missing\tsecurity\t-1\n",
            encoding="utf-8")
        with pytest.raises(AssociationFileError) as exc:
            load_associations(kb, path)
        message = str(exc.value)
        assert "no such key" in message and "another missing" in message
        # atomic: the valid row must not have been applied
        assert not kb.entities["e0002"].curated

    def test_synonym_alias_key_reaches_entity(self, tmp_path):
        kb = KBSnapshot()
        merged = entity("e0001", "rising carbon dioxide level")
        merged.keys = ["rising carbon dioxide level", "rising co2 level"]
        kb.add_entity(merged)
        path = tmp_path / "assoc.tsv"
        path.write_text("# version: 1\nrising co2 level\tsecurity\t1\n", encoding="utf-8")
        load_associations(kb, path)
        assert kb.entities["e0001"].associations[PersonalValue.SECURITY] == 1


class TestNativeSnapshot:
    def test_save_load_roundtrip(self, tmp_path):
        rng = random.Random(11)
        for _ in range(25):
            kb = random_kb(rng)
            path = tmp_path / "kb.jsonl"
            save_snapshot(kb, path)
            again = load_kb(path)
            assert kb_equal(kb, again)
            assert again.metadata.corpus_sha256 == kb.metadata.corpus_sha256

    def test_save_is_deterministic(self, tmp_path):
        rng = random.Random(13)
        kb = random_kb(rng)
        p1, p2 = tmp_path / "kb1.jsonl", tmp_path / "kb2.jsonl"
        save_snapshot(kb, p1)
        save_snapshot(kb, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_member_count_survives_reload(self, tmp_path, fixture_kb):
        path = tmp_path / "kb.jsonl"
        save_snapshot(fixture_kb, path)
        again = load_kb(path)
        for entity_id, original in fixture_kb.entities.items():
            assert again.entities[entity_id].member_count == original.member_count
