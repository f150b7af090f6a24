import math
import random

import pytest

from oracles import VOCAB, random_records, reference_bm25, reference_weighted_rank, scan_phrase, scan_word
from searchbridge.bridge import Query, QueryKind, RankConfig, UnknownRecord, search_then_rank
from searchbridge.corpus import FieldName, Record
from searchbridge.engine_unified import DEFAULT_MLT_SOURCE_FIELDS, MltParams, UnifiedEngine
from searchbridge.index_core import DuplicateDocument, IndexCommitted, IndexNotCommitted


def make_engine(records):
    engine = UnifiedEngine()
    engine.index_records(records)
    engine.commit()
    return engine


class TestLifecycle:
    def test_duplicate_record(self):
        engine = UnifiedEngine()
        engine.index_records([Record(id=1, title="a")])
        with pytest.raises(DuplicateDocument):
            engine.index_records([Record(id=1, title="b")])

    def test_index_after_commit(self):
        engine = make_engine([Record(id=1, title="a")])
        with pytest.raises(IndexCommitted):
            engine.index_records([Record(id=2, title="b")])

    def test_read_before_commit(self):
        engine = UnifiedEngine()
        engine.index_records([Record(id=1, title="higgs")])
        with pytest.raises(IndexNotCommitted):
            engine.search(Query(FieldName.TITLE, QueryKind.WORD, ("higgs",)))
        with pytest.raises(IndexNotCommitted):
            engine.similar(1)

    def test_commit_flips_flag(self):
        engine = UnifiedEngine()
        assert not engine.committed
        engine.commit()
        assert engine.committed


class TestSearch:
    def test_word_and_phrase_per_field(self):
        records = [
            Record(id=1, title="higgs boson", abstract="electron scattering"),
            Record(id=2, title="boson higgs", abstract="higgs boson"),
        ]
        engine = make_engine(records)
        assert engine.search(Query(FieldName.TITLE, QueryKind.WORD, ("higgs",))).to_ids() == [1, 2]
        assert engine.search(Query(FieldName.TITLE, QueryKind.PHRASE, ("higgs", "boson"))).to_ids() == [1]
        assert engine.search(Query(FieldName.ABSTRACT, QueryKind.PHRASE, ("higgs", "boson"))).to_ids() == [2]

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_scan_oracles(self, seed):
        rng = random.Random(300 + seed)
        records = random_records(rng, 50)
        engine = make_engine(records)
        for field in FieldName:
            for term in rng.sample(VOCAB, 8):
                got = set(engine.search(Query(field, QueryKind.WORD, (term,))).to_ids())
                assert got == scan_word(records, field, term)
            phrase = tuple(rng.choice(VOCAB) for _ in range(2))
            got = set(engine.search(Query(field, QueryKind.PHRASE, phrase)).to_ids())
            assert got == scan_phrase(records, field, list(phrase))


class TestRank:
    def test_weighted_sum_matches_reference(self):
        rng = random.Random(42)
        records = random_records(rng, 45)
        engine = make_engine(records)
        weights = {FieldName.TITLE: 2.0, FieldName.ABSTRACT: 1.0, FieldName.FULLTEXT: 0.25}
        for _ in range(20):
            term = rng.choice(VOCAB)
            query = Query(FieldName.FULLTEXT, QueryKind.WORD, (term,))
            hitset = engine.search(query)
            got = engine.rank(query, hitset, weights, top_k=1000)
            want = reference_weighted_rank(records, [term], weights, set(hitset.to_ids()))
            assert [i for i, _ in got] == [i for i, _ in want]
            for (gi, gs), (wi, ws) in zip(got, want):
                assert gs == pytest.approx(ws, rel=1e-9)

    def test_unknown_hitset_ids_skipped(self):
        from searchbridge.intbitset import IntBitset

        records = [Record(id=1, title="higgs"), Record(id=2, title="higgs boson")]
        engine = make_engine(records)
        query = Query(FieldName.TITLE, QueryKind.WORD, ("higgs",))
        ranked = engine.rank(query, IntBitset([1, 2, 999]), {FieldName.TITLE: 1.0}, top_k=10)
        assert [i for i, _ in ranked] == [1, 2]

    def test_no_positive_weights(self):
        records = [Record(id=1, title="higgs")]
        engine = make_engine(records)
        query = Query(FieldName.TITLE, QueryKind.WORD, ("higgs",))
        assert engine.rank(query, engine.search(query), {FieldName.TITLE: 0.0}, 10) == []

    def test_top_k_truncates(self):
        records = [Record(id=i, title="higgs " * i) for i in range(1, 8)]
        engine = make_engine(records)
        query = Query(FieldName.TITLE, QueryKind.WORD, ("higgs",))
        ranked = engine.rank(query, engine.search(query), {FieldName.TITLE: 1.0}, top_k=3)
        assert len(ranked) == 3

    def test_search_then_rank_pipeline(self):
        records = [
            Record(id=1, title="higgs boson", fulltext="higgs"),
            Record(id=2, title="higgs higgs", fulltext=""),
            Record(id=3, title="electron", fulltext="nothing"),
        ]
        engine = make_engine(records)
        query = Query(FieldName.TITLE, QueryKind.WORD, ("higgs",))
        hitset, ranked = search_then_rank(
            engine, query, {"title": 1.0, "fulltext": 0.5}, RankConfig(top_k=10)
        )
        assert hitset.to_ids() == [1, 2]
        assert ranked[0].percent == 100.0
        assert {e.id for e in ranked} == {1, 2}


class TestMltSelectTerms:
    def test_thresholds_and_rarest_field_idf(self):
        records = [
            Record(id=10, title="higgs higgs decay", abstract="boson boson lattice", keywords=["rare"]),
            Record(id=11, title="higgs model", abstract="boson physics"),
            Record(id=12, title="higgs again", abstract="nothing here"),
        ]
        engine = make_engine(records)
        # tf >= 2 leaves higgs and boson; decay/lattice/rare have tf 1.
        # boson: df 2 in abstract -> idf ln(1.6); higgs: df 3 in title -> idf ln(8/7).
        assert engine.mlt_select_terms(10) == ["boson", "higgs"]

    def test_term_unique_to_source_is_dropped(self):
        records = [
            Record(id=1, title="quirk quirk common"),
            Record(id=2, title="common stuff"),
            Record(id=3, title="common things"),
        ]
        engine = make_engine(records)
        # quirk passes tf but its df is 1 everywhere; common fails tf.
        assert engine.mlt_select_terms(1) == []

    def test_tf_accumulates_across_source_fields(self):
        records = [
            Record(id=1, title="plasma", abstract="plasma"),
            Record(id=2, title="plasma", abstract="plasma"),
        ]
        engine = make_engine(records)
        # tf 1 + 1 across title and abstract reaches min_term_freq.
        assert engine.mlt_select_terms(1) == ["plasma"]

    def test_fulltext_not_a_source_by_default(self):
        records = [
            Record(id=1, fulltext="plasma plasma plasma"),
            Record(id=2, fulltext="plasma plasma"),
        ]
        engine = make_engine(records)
        assert engine.mlt_select_terms(1) == []
        with_ft = MltParams(source_fields=tuple(FieldName))
        assert engine.mlt_select_terms(1, with_ft) == ["plasma"]

    def test_tie_breaks_lexicographic(self):
        records = [
            Record(id=1, title="alpha alpha beta beta"),
            Record(id=2, title="beta alpha"),
        ]
        engine = make_engine(records)
        assert engine.mlt_select_terms(1) == ["alpha", "beta"]

    def test_max_query_terms_cap(self):
        records = [
            Record(id=1, title="alpha alpha beta beta gamma gamma gamma"),
            Record(id=2, title="alpha beta gamma"),
        ]
        engine = make_engine(records)
        assert engine.mlt_select_terms(1, MltParams(max_query_terms=1)) == ["gamma"]

    def test_tokens_past_cap_ignored(self):
        filler = "alpha beta " * 500  # exactly 1000 tokens
        records = [
            Record(id=1, abstract=filler + " zeta zeta zeta"),
            Record(id=2, abstract="alpha beta zeta zeta"),
            Record(id=3, abstract=filler),
        ]
        engine = make_engine(records)
        selected = engine.mlt_select_terms(1)
        assert selected == ["alpha", "beta"]
        # The tail beyond 1000 tokens contributes nothing: same selection as
        # the identical record without the tail.
        assert selected == engine.mlt_select_terms(3)

    def test_unknown_record(self):
        engine = make_engine([Record(id=1, title="x y x y")])
        with pytest.raises(UnknownRecord):
            engine.mlt_select_terms(99)

    def test_params_validation_and_field_order(self):
        with pytest.raises(ValueError):
            MltParams(top_k=0)
        with pytest.raises(ValueError):
            MltParams(max_tokens_per_field=0)
        p = MltParams(source_fields=(FieldName.KEYWORD, FieldName.TITLE))
        assert p.source_fields == (FieldName.TITLE, FieldName.KEYWORD)


class TestSimilar:
    def test_duplicate_content_ranks_first(self):
        rng = random.Random(5)
        records = random_records(rng, 30)
        twin_src = records[7]
        twin = Record(
            id=200,
            title=twin_src.title,
            abstract=twin_src.abstract,
            authors=list(twin_src.authors),
            keywords=list(twin_src.keywords),
            fulltext=twin_src.fulltext,
        )
        engine = make_engine(records + [twin])
        ranked = engine.similar(twin_src.id, MltParams(top_k=5))
        assert ranked and ranked[0][0] == twin.id

    def test_source_excluded(self):
        records = [
            Record(id=1, title="plasma beam plasma beam"),
            Record(id=2, title="plasma beam"),
            Record(id=3, title="plasma beam plasma"),
        ]
        engine = make_engine(records)
        ids = [i for i, _ in engine.similar(1, MltParams(top_k=10))]
        assert 1 not in ids
        assert set(ids) == {2, 3}

    def test_scores_match_reference_sum(self):
        records = [
            Record(id=1, title="plasma beam plasma beam", abstract="lattice"),
            Record(id=2, title="plasma beam", abstract="plasma lattice"),
            Record(id=3, title="beam beam", abstract=""),
        ]
        engine = make_engine(records)
        terms = engine.mlt_select_terms(1)
        ranked = engine.similar(1, MltParams(top_k=10))
        for doc_id, raw in ranked:
            want = sum(
                reference_bm25(records, f, terms, doc_id) for f in DEFAULT_MLT_SOURCE_FIELDS
            )
            assert raw == pytest.approx(want, rel=1e-9)

    def test_candidates_only_from_source_fields(self):
        records = [
            Record(id=1, title="plasma plasma"),
            Record(id=2, title="plasma"),
            Record(id=3, fulltext="plasma plasma plasma"),
        ]
        engine = make_engine(records)
        ids = [i for i, _ in engine.similar(1, MltParams(top_k=10))]
        assert ids == [2]

    def test_no_selected_terms_gives_empty(self):
        records = [Record(id=1, title="solo words only"), Record(id=2, title="other stuff")]
        engine = make_engine(records)
        assert engine.similar(1) == []

    def test_unknown_record(self):
        engine = make_engine([Record(id=1, title="x")])
        with pytest.raises(UnknownRecord):
            engine.similar(42)

    def test_top_k_truncates(self):
        records = [Record(id=1, title="plasma beam plasma beam")]
        records += [Record(id=i, title="plasma beam") for i in range(2, 9)]
        engine = make_engine(records)
        assert len(engine.similar(1, MltParams(top_k=3))) == 3


def test_default_source_fields_exclude_fulltext():
    assert FieldName.FULLTEXT not in DEFAULT_MLT_SOURCE_FIELDS
    assert DEFAULT_MLT_SOURCE_FIELDS == (
        FieldName.TITLE,
        FieldName.ABSTRACT,
        FieldName.AUTHOR,
        FieldName.KEYWORD,
    )
