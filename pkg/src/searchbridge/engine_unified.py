"""Unified-index engine: one logical index holding all five field indexes
behind a single adapter, with weighted ranking and more-like-this support.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from .bridge import Query, QueryKind, UnknownRecord, rank_order
from .corpus import FieldName, Record, analyze
from .index_core import Bm25Params, DuplicateDocument, FieldIndex, IndexCommitted, IndexNotCommitted
from .intbitset import IntBitset

__all__ = ["MltParams", "UnifiedEngine", "DEFAULT_MLT_SOURCE_FIELDS"]

#: Metadata-only default; full-text tends to drown out the focused metadata
#: signal, so it takes an explicit opt-in via ``source_fields``.
DEFAULT_MLT_SOURCE_FIELDS = (
    FieldName.TITLE,
    FieldName.ABSTRACT,
    FieldName.AUTHOR,
    FieldName.KEYWORD,
)


@dataclass(frozen=True)
class MltParams:
    """More-like-this tuning knobs.

    Only the first ``max_tokens_per_field`` tokens of each source field feed
    term selection; the selected terms are capped at ``max_query_terms``
    after frequency thresholds (``min_term_freq`` within the source record,
    ``min_doc_freq`` in at least one source field's index).
    """

    top_k: int = 10
    source_fields: tuple[FieldName, ...] = DEFAULT_MLT_SOURCE_FIELDS
    max_tokens_per_field: int = 1000
    max_query_terms: int = 25
    min_term_freq: int = 2
    min_doc_freq: int = 2

    def __post_init__(self):
        if self.top_k < 1:
            raise ValueError("top_k must be positive")
        if self.max_tokens_per_field < 1 or self.max_query_terms < 1:
            raise ValueError("token and term caps must be positive")
        # Canonicalize to declaration order so scoring sums are deterministic.
        ordered = tuple(f for f in FieldName if f in set(self.source_fields))
        object.__setattr__(self, "source_fields", ordered)


class UnifiedEngine:
    """All fields of all documents in one engine instance."""

    name = "unified"

    def __init__(self, bm25: Bm25Params | None = None):
        self.indexes: dict[FieldName, FieldIndex] = {
            f: FieldIndex(f, bm25) for f in FieldName
        }
        self.records: dict[int, Record] = {}
        self._committed = False

    @property
    def committed(self) -> bool:
        return self._committed

    def _require_committed(self) -> None:
        if not self._committed:
            raise IndexNotCommitted("unified engine: commit before reading")

    # -- adapter contract ------------------------------------------------

    def index_records(self, records: Iterable[Record]) -> None:
        """Analyze every field of every record into its field index."""
        if self._committed:
            raise IndexCommitted("unified engine is committed")
        for record in records:
            if record.id in self.records:
                raise DuplicateDocument(f"record {record.id} already indexed")
            for fname, index in self.indexes.items():
                index.add_document(record.id, analyze(record.field_text(fname)))
            self.records[record.id] = record

    def commit(self) -> None:
        for index in self.indexes.values():
            index.commit()
        self._committed = True

    def search(self, query: Query) -> IntBitset:
        index = self.indexes[query.field]
        if query.kind is QueryKind.WORD:
            return index.search_word(query.terms[0])
        return index.search_phrase(query.terms)

    def rank(
        self,
        query: Query,
        hitset: IntBitset,
        weights: Mapping[FieldName, float],
        top_k: int,
    ) -> list[tuple[int, float]]:
        """Weighted BM25 over the hitset: raw(d) = sum of w_f * bm25_f(d).

        Hitset ids unknown to the engine are skipped; zero-scored documents
        are excluded. Returns the top_k under the bridge total order.
        """
        self._require_committed()
        weighted = [(f, weights[f]) for f in FieldName if weights.get(f, 0.0) > 0.0]
        if not weighted:
            return []
        scored = []
        for doc_id in hitset.to_ids():
            if doc_id not in self.records:
                continue
            raw = 0.0
            for fname, weight in weighted:
                raw += weight * self.indexes[fname].bm25_score(query.terms, doc_id)
            if raw > 0.0:
                scored.append((doc_id, raw))
        return rank_order(scored)[:top_k]

    # -- more-like-this --------------------------------------------------

    def _source_tokens(self, record: Record, params: MltParams) -> dict[FieldName, list[str]]:
        """First ``max_tokens_per_field`` analyzed terms of each source field."""
        return {
            f: [t.term for t in analyze(record.field_text(f))[: params.max_tokens_per_field]]
            for f in params.source_fields
        }

    def mlt_select_terms(self, record_id: int, params: MltParams | None = None) -> list[str]:
        """Pick the record's most salient terms for a similarity query.

        Term frequency is counted across the capped token streams of all
        source fields. A term survives when its frequency reaches
        ``min_term_freq`` and its document frequency reaches ``min_doc_freq``
        in at least one source field's index. Survivors are scored tf * idf,
        taking idf from the source field where the term is rarest, and the
        top ``max_query_terms`` are kept (ties broken lexicographically).
        """
        self._require_committed()
        params = params or MltParams()
        record = self.records.get(record_id)
        if record is None:
            raise UnknownRecord(f"record {record_id} not indexed")
        tf = Counter()
        for terms in self._source_tokens(record, params).values():
            tf.update(terms)
        selected = []
        for term, freq in tf.items():
            if freq < params.min_term_freq:
                continue
            dfs = []
            for fname in params.source_fields:
                posting = self.indexes[fname].postings.get(term)
                if posting is not None and len(posting) > 0:
                    dfs.append((len(posting), fname))
            if not dfs or max(df for df, _ in dfs) < params.min_doc_freq:
                continue
            rarest_field = min(dfs)[1]
            score = freq * self.indexes[rarest_field].idf(term)
            selected.append((term, score))
        selected.sort(key=lambda it: (-it[1], it[0]))
        return [term for term, _ in selected[: params.max_query_terms]]

    def similar(self, record_id: int, params: MltParams | None = None) -> list[tuple[int, float]]:
        """Score candidates sharing selected terms with the source record.

        Candidates come from word searches over the selected terms in every
        source field; each candidate gets the unit-weight sum of per-field
        BM25 scores against the term set. The source record is excluded.
        """
        params = params or MltParams()
        terms = self.mlt_select_terms(record_id, params)
        if not terms:
            return []
        candidates = IntBitset()
        for fname in params.source_fields:
            index = self.indexes[fname]
            for term in terms:
                candidates = candidates | index.search_word(term)
        scored = []
        for doc_id in candidates.to_ids():
            if doc_id == record_id:
                continue
            raw = 0.0
            for fname in params.source_fields:
                raw += self.indexes[fname].bm25_score(terms, doc_id)
            if raw > 0.0:
                scored.append((doc_id, raw))
        return rank_order(scored)[: params.top_k]
