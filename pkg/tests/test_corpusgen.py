import io
import random
from collections import Counter

import pytest

from oracles import scan_phrase, scan_word
from searchbridge.corpus import FieldName, analyze, parse_jsonl
from searchbridge.corpusgen import CorpusSpec, generate_records, make_vocab, write_corpus


def render(spec: CorpusSpec) -> str:
    buf = io.StringIO()
    write_corpus(spec, buf)
    return buf.getvalue()


class TestDeterminism:
    def test_same_seed_byte_identical(self):
        spec = CorpusSpec(n_docs=120, seed=9)
        assert render(spec) == render(spec)

    def test_different_seed_differs(self):
        assert render(CorpusSpec(n_docs=50, seed=1)) != render(CorpusSpec(n_docs=50, seed=2))

    def test_zero_docs_empty_file(self):
        assert render(CorpusSpec(n_docs=0)) == ""


class TestShape:
    def test_ids_ascend_from_one(self):
        records = list(generate_records(CorpusSpec(n_docs=25, seed=3)))
        assert [r.id for r in records] == list(range(1, 26))

    def test_round_trips_through_parser(self):
        text = render(CorpusSpec(n_docs=30, seed=4))
        records = parse_jsonl(text.splitlines())
        assert len(records) == 30
        assert all(r.title and r.abstract and r.fulltext for r in records)
        assert all(r.authors and r.keywords for r in records)

    def test_doc_length_near_mean(self):
        spec = CorpusSpec(n_docs=60, mean_doc_len=40, seed=5, marker_fraction=0.0)
        lengths = [len(analyze(r.fulltext)) for r in generate_records(spec)]
        assert all(20 <= n <= 60 for n in lengths)


class TestMarkerPlanting:
    @pytest.mark.parametrize("n,fraction", [(1000, 0.5), (200, 0.3), (50, 0.0), (40, 1.0)])
    def test_exact_phrase_count(self, n, fraction):
        spec = CorpusSpec(n_docs=n, seed=11, marker_fraction=fraction)
        records = list(generate_records(spec))
        hits = scan_phrase(records, FieldName.FULLTEXT, spec.marker_terms)
        assert len(hits) == spec.marker_count == int(round(n * fraction))

    def test_marker_terms_only_from_plants(self):
        # Word search on a marker term equals the phrase hitset: the terms
        # exist nowhere outside the planted blocks.
        spec = CorpusSpec(n_docs=300, seed=12, marker_fraction=0.25)
        records = list(generate_records(spec))
        phrase_hits = scan_phrase(records, FieldName.FULLTEXT, spec.marker_terms)
        for term in spec.marker_terms:
            assert scan_word(records, FieldName.FULLTEXT, term) == phrase_hits

    def test_title_carries_the_phrase_too(self):
        spec = CorpusSpec(n_docs=200, seed=13, marker_fraction=0.2)
        records = list(generate_records(spec))
        title_hits = scan_phrase(records, FieldName.TITLE, spec.marker_terms)
        assert len(title_hits) == spec.marker_count

    def test_custom_marker(self):
        spec = CorpusSpec(n_docs=100, seed=14, marker="dark matter wimp", marker_fraction=0.4)
        records = list(generate_records(spec))
        hits = scan_phrase(records, FieldName.FULLTEXT, ["dark", "matter", "wimp"])
        assert len(hits) == 40


class TestVocabulary:
    def test_excludes_forbidden_words(self):
        rng = random.Random(0)
        vocab = make_vocab(500, rng, forbidden={"bani", "dote"})
        assert len(vocab) == len(set(vocab)) == 500
        assert "bani" not in vocab and "dote" not in vocab

    def test_rank_skew(self):
        # Rank 1 must be drawn far more often than the rarest rank.
        spec = CorpusSpec(n_docs=200, vocab_size=50, seed=6, marker_fraction=0.0)
        vocab = make_vocab(50, random.Random(6), forbidden=set(spec.marker_terms))
        counts = Counter()
        for record in generate_records(spec):
            counts.update(t.term for t in analyze(record.fulltext))
        assert counts[vocab[0]] > 10 * max(1, counts[vocab[-1]])


class TestValidation:
    def test_bad_parameters(self):
        with pytest.raises(ValueError):
            CorpusSpec(n_docs=-1)
        with pytest.raises(ValueError):
            CorpusSpec(n_docs=1, vocab_size=0)
        with pytest.raises(ValueError):
            CorpusSpec(n_docs=1, marker_fraction=1.5)
        with pytest.raises(ValueError):
            CorpusSpec(n_docs=1, marker="...")
