"""Per-field engine: one independent database per field.

Each field lives in its own self-contained :class:`FieldIndex` "database"
with its own statistics and its own commit. Ranking queries every weighted
database individually and aggregates the weighted per-database scores with
a plain sum, with no per-database normalization, which makes the math line
up exactly with the unified engine and gives a strong cross-engine oracle.

Similarity search is not part of this architecture; ``similar`` always
signals :class:`CapabilityUnsupported`.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .bridge import CapabilityUnsupported, Query, QueryKind, rank_order
from .corpus import FieldName, Record, analyze
from .index_core import Bm25Params, DuplicateDocument, FieldIndex, IndexCommitted
from .intbitset import IntBitset

__all__ = ["PerFieldEngine"]


class PerFieldEngine:
    """Independent committed databases sharing one doc id space."""

    name = "perfield"

    def __init__(self, bm25: Bm25Params | None = None):
        self.databases: dict[FieldName, FieldIndex] = {
            f: FieldIndex(f, bm25) for f in FieldName
        }

    @property
    def committed(self) -> bool:
        return all(db.committed for db in self.databases.values())

    # -- adapter contract ------------------------------------------------

    def index_records(self, records: Iterable[Record]) -> None:
        """Build every field database from the record stream."""
        # Any committed database blocks engine-level indexing; a partial
        # update of the still-open databases would desync the doc id space.
        if any(db.committed for db in self.databases.values()):
            raise IndexCommitted("per-field engine has committed databases")
        membership = self.databases[FieldName.TITLE].field_length
        for record in records:
            if record.id in membership:
                raise DuplicateDocument(f"record {record.id} already indexed")
            for fname, db in self.databases.items():
                db.add_document(record.id, analyze(record.field_text(fname)))

    def commit(self) -> None:
        for db in self.databases.values():
            db.commit()

    def commit_field(self, field: FieldName) -> None:
        """Commit one database; the others stay independently mutable."""
        self.databases[field].commit()

    def search(self, query: Query) -> IntBitset:
        db = self.databases[query.field]
        if query.kind is QueryKind.WORD:
            return db.search_word(query.terms[0])
        return db.search_phrase(query.terms)

    def rank(
        self,
        query: Query,
        hitset: IntBitset,
        weights: Mapping[FieldName, float],
        top_k: int,
    ) -> list[tuple[int, float]]:
        """Query each weighted database individually, then aggregate.

        raw(d) = sum over fields f of w_f * score_f(d), accumulated in field
        declaration order so the result is bit-identical to the unified
        engine's doc-major loop. Hitset ids unknown to a database are
        skipped there.
        """
        weighted = [(f, weights[f]) for f in FieldName if weights.get(f, 0.0) > 0.0]
        if not weighted:
            return []
        doc_ids = hitset.to_ids()
        raw: dict[int, float] = {}
        for fname, weight in weighted:
            db = self.databases[fname]
            for doc_id in doc_ids:
                if doc_id not in db.field_length:
                    continue
                score = db.bm25_score(query.terms, doc_id)
                raw[doc_id] = raw.get(doc_id, 0.0) + weight * score
        scored = [(doc_id, value) for doc_id, value in raw.items() if value > 0.0]
        return rank_order(scored)[:top_k]

    # Alias documenting the aggregation architecture.
    rank_aggregate = rank

    def similar(self, record_id: int, params=None) -> list[tuple[int, float]]:
        raise CapabilityUnsupported("per-field engine has no similarity support")
