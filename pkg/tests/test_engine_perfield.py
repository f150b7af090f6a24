import random

import pytest

from oracles import VOCAB, random_records, reference_weighted_rank
from searchbridge.bridge import CapabilityUnsupported, Query, QueryKind, RankConfig, search_then_rank
from searchbridge.corpus import FieldName, Record
from searchbridge.engine_perfield import PerFieldEngine
from searchbridge.engine_unified import UnifiedEngine
from searchbridge.index_core import DuplicateDocument, IndexCommitted, IndexNotCommitted


def make_engine(records):
    engine = PerFieldEngine()
    engine.index_records(records)
    engine.commit()
    return engine


class TestLifecycle:
    def test_duplicate_record(self):
        engine = PerFieldEngine()
        engine.index_records([Record(id=1, title="a")])
        with pytest.raises(DuplicateDocument):
            engine.index_records([Record(id=1, title="b")])

    def test_commit_field_independence(self):
        engine = PerFieldEngine()
        engine.index_records([Record(id=1, title="higgs", abstract="boson")])
        engine.commit_field(FieldName.TITLE)
        assert not engine.committed
        # The committed database serves reads while the others stay closed.
        assert engine.search(Query(FieldName.TITLE, QueryKind.WORD, ("higgs",))).to_ids() == [1]
        with pytest.raises(IndexNotCommitted):
            engine.search(Query(FieldName.ABSTRACT, QueryKind.WORD, ("boson",)))
        # Engine-level indexing refuses a half-committed database set.
        with pytest.raises(IndexCommitted):
            engine.index_records([Record(id=2, title="x")])
        engine.commit()
        assert engine.committed

    def test_commit_all(self):
        engine = make_engine([Record(id=1, abstract="x")])
        assert all(db.committed for db in engine.databases.values())


class TestSearch:
    def test_fields_are_isolated(self):
        records = [Record(id=1, title="higgs", abstract="electron")]
        engine = make_engine(records)
        assert engine.search(Query(FieldName.TITLE, QueryKind.WORD, ("higgs",))).to_ids() == [1]
        assert engine.search(Query(FieldName.ABSTRACT, QueryKind.WORD, ("higgs",))).to_ids() == []

    def test_phrase(self):
        records = [Record(id=1, fulltext="higgs boson decay"), Record(id=2, fulltext="boson higgs")]
        engine = make_engine(records)
        hits = engine.search(Query(FieldName.FULLTEXT, QueryKind.PHRASE, ("higgs", "boson")))
        assert hits.to_ids() == [1]


class TestRank:
    def test_matches_reference(self):
        rng = random.Random(77)
        records = random_records(rng, 40)
        engine = make_engine(records)
        weights = {FieldName.TITLE: 3.0, FieldName.KEYWORD: 1.5}
        for term in rng.sample(VOCAB, 10):
            query = Query(FieldName.TITLE, QueryKind.WORD, (term,))
            hitset = engine.search(query)
            got = engine.rank(query, hitset, weights, top_k=500)
            want = reference_weighted_rank(records, [term], weights, set(hitset.to_ids()))
            assert [i for i, _ in got] == [i for i, _ in want]
            for (_, gs), (_, ws) in zip(got, want):
                assert gs == pytest.approx(ws, rel=1e-9)

    def test_rank_aggregate_alias(self):
        assert PerFieldEngine.rank_aggregate is PerFieldEngine.rank


class TestCrossEngineParity:
    """The two architectures must agree bit for bit, not just approximately."""

    @pytest.mark.parametrize("seed", range(5))
    def test_identical_ranked_lists(self, seed):
        rng = random.Random(900 + seed)
        records = random_records(rng, 55)
        unified = UnifiedEngine()
        unified.index_records(records)
        unified.commit()
        perfield = make_engine(records)
        for _ in range(15):
            field = rng.choice(list(FieldName))
            if rng.random() < 0.5:
                query = Query(field, QueryKind.WORD, (rng.choice(VOCAB),))
            else:
                query = Query(field, QueryKind.PHRASE, tuple(rng.choice(VOCAB) for _ in range(2)))
            weights = {
                f: rng.choice([0.0, 0.5, 1.0, 2.0, 3.5])
                for f in rng.sample(list(FieldName), rng.randrange(1, 6))
            }
            hits_u = unified.search(query)
            hits_p = perfield.search(query)
            assert hits_u == hits_p
            ranked_u = unified.rank(query, hits_u, weights, top_k=100)
            ranked_p = perfield.rank(query, hits_p, weights, top_k=100)
            assert ranked_u == ranked_p  # exact floats, same order

    def test_pipeline_parity(self):
        rng = random.Random(1234)
        records = random_records(rng, 60)
        unified = UnifiedEngine()
        unified.index_records(records)
        unified.commit()
        perfield = make_engine(records)
        query = Query(FieldName.FULLTEXT, QueryKind.WORD, ("higgs",))
        weights = {"title": 2.0, "fulltext": 1.0}
        cfg = RankConfig(top_k=25)
        hits_u, ranked_u = search_then_rank(unified, query, weights, cfg)
        hits_p, ranked_p = search_then_rank(perfield, query, weights, cfg)
        assert hits_u == hits_p
        assert ranked_u == ranked_p


def test_similar_unsupported():
    engine = make_engine([Record(id=1, title="x")])
    with pytest.raises(CapabilityUnsupported):
        engine.similar(1)
