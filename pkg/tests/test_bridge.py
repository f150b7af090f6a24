import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import take_largest
from searchbridge.bridge import (
    AdapterRegistry,
    AllZeroScores,
    DuplicateAdapterName,
    EmptyQuery,
    InvalidQuery,
    InvalidWeights,
    Query,
    QueryKind,
    RankConfig,
    RankedEntry,
    RegistryFrozen,
    UnknownAdapter,
    cap_hitset,
    coerce_weights,
    normalize_percent,
    rank_order,
)
from searchbridge.corpus import FieldName
from searchbridge.intbitset import IntBitset


class TestQuery:
    def test_from_text_analyzes(self):
        q = Query.from_text(FieldName.TITLE, QueryKind.PHRASE, "Higgs Boson!")
        assert q.terms == ("higgs", "boson")
        assert q.field is FieldName.TITLE

    def test_from_text_accepts_plain_strings(self):
        q = Query.from_text("abstract", "word", "Electron")
        assert q.field is FieldName.ABSTRACT
        assert q.kind is QueryKind.WORD

    def test_empty_text(self):
        with pytest.raises(EmptyQuery):
            Query.from_text(FieldName.TITLE, QueryKind.WORD, "  ... ")

    def test_word_query_single_term_only(self):
        with pytest.raises(InvalidQuery):
            Query(FieldName.TITLE, QueryKind.WORD, ("higgs", "boson"))

    def test_no_terms(self):
        with pytest.raises(EmptyQuery):
            Query(FieldName.TITLE, QueryKind.PHRASE, ())


class TestRankConfig:
    def test_defaults(self):
        cfg = RankConfig(top_k=10)
        assert cfg.hitset_cap == 10_000

    def test_validation(self):
        with pytest.raises(ValueError):
            RankConfig(top_k=0)
        with pytest.raises(ValueError):
            RankConfig(top_k=1, hitset_cap=0)


class TestCoerceWeights:
    def test_string_keys(self):
        w = coerce_weights({"title": 2, "fulltext": 0.5})
        assert w == {FieldName.TITLE: 2.0, FieldName.FULLTEXT: 0.5}

    def test_enum_keys_pass_through(self):
        assert coerce_weights({FieldName.AUTHOR: 1}) == {FieldName.AUTHOR: 1.0}

    def test_unknown_field(self):
        with pytest.raises(InvalidWeights):
            coerce_weights({"body": 1.0})

    def test_negative_weight(self):
        with pytest.raises(InvalidWeights):
            coerce_weights({"title": -0.5})

    def test_zero_weight_allowed(self):
        assert coerce_weights({"title": 0.0}) == {FieldName.TITLE: 0.0}


class TestCapHitset:
    def test_under_cap_identity(self):
        s = IntBitset([1, 2, 3])
        assert cap_hitset(s, 3) is s
        assert cap_hitset(s, 10) is s

    def test_keeps_largest_ids(self):
        s = IntBitset([5, 1, 9, 3, 7])
        assert cap_hitset(s, 2).to_ids() == [7, 9]

    def test_invalid_cap(self):
        with pytest.raises(ValueError):
            cap_hitset(IntBitset(), 0)

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_sort_oracle(self, seed):
        rng = random.Random(seed)
        ids = {rng.randrange(50_000) for _ in range(3_000)}
        for cap in (1, 17, 1_000, 2_999, 3_000, 50_000):
            got = set(cap_hitset(IntBitset(ids), cap).to_ids())
            assert got == take_largest(ids, cap)
            assert len(got) == min(cap, len(ids))


class TestRankOrder:
    def test_score_descending(self):
        assert rank_order([(1, 0.5), (2, 2.0), (3, 1.0)]) == [(2, 2.0), (3, 1.0), (1, 0.5)]

    def test_ties_latest_first(self):
        assert rank_order([(4, 1.0), (9, 1.0), (7, 1.0)]) == [(9, 1.0), (7, 1.0), (4, 1.0)]

    @given(
        st.lists(
            st.tuples(st.integers(1, 1000), st.floats(0, 100, allow_nan=False)),
            max_size=50,
            unique_by=lambda e: e[0],
        )
    )
    def test_total_order_properties(self, scored):
        ranked = rank_order(scored)
        assert sorted(ranked) == sorted(scored)
        for (id_a, score_a), (id_b, score_b) in zip(ranked, ranked[1:]):
            assert score_a > score_b or (score_a == score_b and id_a > id_b)


class TestNormalizePercent:
    def test_leader_is_exactly_100(self):
        ranked = normalize_percent([(1, 0.3), (2, 0.7), (3, 0.1)])
        assert ranked[0] == RankedEntry(2, 100.0)
        assert [e.id for e in ranked] == [2, 1, 3]
        assert ranked[1].percent == pytest.approx(100.0 * 0.3 / 0.7)

    def test_zero_scores_dropped(self):
        ranked = normalize_percent([(1, 0.5), (2, 0.0), (3, 0.25)])
        assert [e.id for e in ranked] == [1, 3]

    def test_all_zero_raises(self):
        with pytest.raises(AllZeroScores):
            normalize_percent([(1, 0.0), (2, 0.0)])

    def test_empty_input_is_empty(self):
        assert normalize_percent([]) == []

    def test_negative_raw_rejected(self):
        with pytest.raises(ValueError):
            normalize_percent([(1, -0.1)])

    def test_equal_scores_all_100_latest_first(self):
        ranked = normalize_percent([(3, 1.5), (8, 1.5)])
        assert ranked == [RankedEntry(8, 100.0), RankedEntry(3, 100.0)]

    @given(
        st.lists(
            st.tuples(st.integers(1, 10_000), st.floats(0.001, 1000, allow_nan=False)),
            min_size=1,
            max_size=80,
            unique_by=lambda e: e[0],
        )
    )
    def test_scale_invariance(self, scored):
        # Multiplying every raw score by a constant must not change output.
        ranked = normalize_percent(scored)
        scaled = normalize_percent([(i, 7.25 * s) for i, s in scored])
        assert [e.id for e in ranked] == [e.id for e in scaled]
        for a, b in zip(ranked, scaled):
            assert a.percent == pytest.approx(b.percent, rel=1e-12)
        assert ranked[0].percent == 100.0
        assert all(0 < e.percent <= 100.0 for e in ranked)


class TestRegistry:
    def test_register_resolve(self):
        reg = AdapterRegistry()
        marker = object()
        reg.register("unified", marker)
        assert reg.resolve("unified") is marker
        assert "unified" in reg
        assert reg.names() == ["unified"]

    def test_duplicate_name(self):
        reg = AdapterRegistry().register("x", object())
        with pytest.raises(DuplicateAdapterName):
            reg.register("x", object())

    def test_unknown(self):
        with pytest.raises(UnknownAdapter):
            AdapterRegistry().resolve("nope")

    def test_freeze(self):
        reg = AdapterRegistry().register("x", object()).freeze()
        with pytest.raises(RegistryFrozen):
            reg.register("y", object())
        assert reg.resolve("x") is not None
