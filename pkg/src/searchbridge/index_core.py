"""Positional inverted index for a single field, with BM25 scoring.

This is the machinery shared by both engine architectures. A
:class:`FieldIndex` follows a build-then-commit lifecycle: a single writer
adds documents, :meth:`FieldIndex.commit` freezes statistics, and from then
on any number of readers may search and score concurrently.

Scoring is BM25 with the always-positive idf variant::

    score(D, Q) = sum over distinct terms t in Q of
                  idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len/avglen))
    idf(t)      = ln(1 + (N - df + 0.5) / (df + 0.5))

where ``tf`` is the term frequency of ``t`` in the document's field, ``len``
the document's field length, ``avglen`` the average field length, ``N`` the
number of documents and ``df`` the term's document frequency. Terms with
``tf = 0`` contribute nothing. The positive idf keeps every score > 0, which
downstream percentage normalization relies on.
"""

from __future__ import annotations

import math
from array import array
from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .corpus import FieldName, Token
from .intbitset import IntBitset

import numpy as np

__all__ = [
    "Bm25Params",
    "FieldIndex",
    "PostingList",
    "FieldIndexError",
    "DuplicateDocument",
    "IndexCommitted",
    "IndexNotCommitted",
    "UnknownDocument",
    "EmptyPhrase",
]


class FieldIndexError(Exception):
    """Base class for index lifecycle and lookup errors."""


class DuplicateDocument(FieldIndexError):
    """A document id was added twice to the same field index."""


class IndexCommitted(FieldIndexError):
    """Mutation attempted after commit."""


class IndexNotCommitted(FieldIndexError):
    """Search or scoring attempted before commit."""


class UnknownDocument(FieldIndexError):
    """Scoring requested for a document the index has never seen."""


class EmptyPhrase(FieldIndexError):
    """Phrase search requires at least one term."""


@dataclass(frozen=True)
class Bm25Params:
    """BM25 free parameters; k1 saturates term frequency, b controls length
    normalization."""

    k1: float = 1.2
    b: float = 0.75

    def __post_init__(self):
        if self.k1 < 0:
            raise ValueError("k1 must be non-negative")
        if not 0.0 <= self.b <= 1.0:
            raise ValueError("b must lie in [0, 1]")


class PostingList:
    """Per-term postings: ascending doc ids with frequencies and positions.

    Positions are stored flattened with per-document bounds, which keeps
    millions of postings affordable in plain Python.
    """

    __slots__ = ("doc_ids", "tfs", "_bounds", "_positions")

    def __init__(self):
        self.doc_ids = array("q")
        self.tfs = array("q")
        self._bounds = array("q", [0])
        self._positions = array("q")

    def append(self, doc_id: int, positions: Sequence[int]) -> None:
        self.doc_ids.append(doc_id)
        self.tfs.append(len(positions))
        self._positions.extend(positions)
        self._bounds.append(len(self._positions))

    def __len__(self) -> int:
        return len(self.doc_ids)

    def positions(self, index: int) -> array:
        """Positions for the ``index``-th posting, strictly ascending."""
        return self._positions[self._bounds[index] : self._bounds[index + 1]]

    def find(self, doc_id: int) -> int:
        """Index of ``doc_id`` in this posting list, or -1."""
        i = bisect_left(self.doc_ids, doc_id)
        if i < len(self.doc_ids) and self.doc_ids[i] == doc_id:
            return i
        return -1

    def entries(self) -> Iterator[tuple[int, int, list[int]]]:
        """Iterate (doc id, term frequency, positions) tuples."""
        for i, doc_id in enumerate(self.doc_ids):
            yield doc_id, self.tfs[i], list(self.positions(i))

    def _sort_by_doc_id(self) -> None:
        order = sorted(range(len(self.doc_ids)), key=self.doc_ids.__getitem__)
        doc_ids = array("q")
        tfs = array("q")
        bounds = array("q", [0])
        positions = array("q")
        for i in order:
            doc_ids.append(self.doc_ids[i])
            tfs.append(self.tfs[i])
            positions.extend(self.positions(i))
            bounds.append(len(positions))
        self.doc_ids, self.tfs = doc_ids, tfs
        self._bounds, self._positions = bounds, positions

    def _is_sorted(self) -> bool:
        ids = self.doc_ids
        return all(ids[i] < ids[i + 1] for i in range(len(ids) - 1))


class FieldIndex:
    """Inverted index over one field of a document collection.

    Tracks per-document field lengths and collection statistics (``N``,
    average field length). Documents with an empty field still count toward
    ``N`` and the average, so both engine architectures agree on statistics
    exactly.
    """

    def __init__(self, field: FieldName, bm25: Bm25Params | None = None):
        self.field = field
        self.bm25 = bm25 or Bm25Params()
        self.postings: dict[str, PostingList] = {}
        self.field_length: dict[int, int] = {}
        self.avg_field_length = 0.0
        self._total_length = 0
        self._committed = False

    @property
    def doc_count(self) -> int:
        return len(self.field_length)

    @property
    def committed(self) -> bool:
        return self._committed

    # -- build phase -----------------------------------------------------

    def add_document(self, doc_id: int, tokens: Iterable[Token]) -> None:
        """Add one document's tokens. An empty token sequence still records
        a zero field length (the document counts toward statistics)."""
        if self._committed:
            raise IndexCommitted(f"{self.field}: index is committed")
        if doc_id in self.field_length:
            raise DuplicateDocument(f"{self.field}: doc {doc_id} already indexed")
        per_term: dict[str, list[int]] = {}
        count = 0
        for term, position in tokens:
            per_term.setdefault(term, []).append(position)
            count += 1
        for term, positions in per_term.items():
            posting = self.postings.get(term)
            if posting is None:
                posting = self.postings[term] = PostingList()
            posting.append(doc_id, positions)
        self.field_length[doc_id] = count
        self._total_length += count

    def commit(self) -> "FieldIndex":
        """Freeze the index. Idempotent; readers are safe afterwards."""
        if self._committed:
            return self
        for posting in self.postings.values():
            if not posting._is_sorted():
                posting._sort_by_doc_id()
        n = self.doc_count
        self.avg_field_length = self._total_length / n if n else 0.0
        self._committed = True
        return self

    # -- read phase ------------------------------------------------------

    def _require_committed(self) -> None:
        if not self._committed:
            raise IndexNotCommitted(f"{self.field}: commit before searching")

    def search_word(self, term: str) -> IntBitset:
        """Doc ids whose field contains ``term`` (already analyzer-normalized)."""
        self._require_committed()
        posting = self.postings.get(term)
        if posting is None:
            return IntBitset()
        return IntBitset(np.frombuffer(posting.doc_ids, dtype=np.int64))

    def search_phrase(self, terms: Sequence[str]) -> IntBitset:
        """Doc ids containing the terms at strictly consecutive positions,
        in order. A single-term phrase equals :meth:`search_word`."""
        self._require_committed()
        if not terms:
            raise EmptyPhrase("phrase needs at least one term")
        if len(terms) == 1:
            return self.search_word(terms[0])
        lists = []
        for term in terms:
            posting = self.postings.get(term)
            if posting is None:
                return IntBitset()
            lists.append(posting)
        # Intersect doc ids, seeding from the rarest posting list.
        seed = min(lists, key=len)
        common = set(seed.doc_ids)
        for posting in lists:
            if posting is not seed:
                common &= set(posting.doc_ids)
                if not common:
                    return IntBitset()
        matches = []
        for doc_id in common:
            starts = set(lists[0].positions(lists[0].find(doc_id)))
            for offset, posting in enumerate(lists[1:], start=1):
                next_positions = set(posting.positions(posting.find(doc_id)))
                starts = {p for p in starts if p + offset in next_positions}
                if not starts:
                    break
            if starts:
                matches.append(doc_id)
        return IntBitset(matches)

    def idf(self, term: str) -> float:
        """ln(1 + (N - df + 0.5)/(df + 0.5)); positive even at df = N."""
        df = len(self.postings.get(term, ()))
        n = self.doc_count
        return math.log(1.0 + (n - df + 0.5) / (df + 0.5))

    def bm25_score(self, terms: Sequence[str], doc_id: int, params: Bm25Params | None = None) -> float:
        """BM25 score of ``doc_id`` for the distinct terms of ``terms``."""
        self._require_committed()
        if doc_id not in self.field_length:
            raise UnknownDocument(f"{self.field}: doc {doc_id} not indexed")
        p = params or self.bm25
        length = self.field_length[doc_id]
        n = self.doc_count
        avg = self.avg_field_length
        # avg == 0 means no document has any token, so every tf is 0 and the
        # norm below is never reached.
        norm = p.k1 * (1.0 - p.b + p.b * (length / avg)) if avg else 0.0
        score = 0.0
        for term in dict.fromkeys(terms):  # distinct, first-seen order
            posting = self.postings.get(term)
            if posting is None:
                continue
            i = posting.find(doc_id)
            if i < 0:
                continue
            tf = posting.tfs[i]
            df = len(posting)
            idf = math.log(1.0 + (n - df + 0.5) / (df + 0.5))
            score += idf * (tf * (p.k1 + 1.0)) / (tf + norm)
        return score
