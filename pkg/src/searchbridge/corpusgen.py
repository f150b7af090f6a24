"""Deterministic synthetic corpus generator.

Desk-scale benchmarks need corpora whose difficulty is controllable:
realistic term-frequency skew, plus a phrase whose hit count is chosen
exactly rather than hoped for. The generator draws vocabulary terms from a
Zipf-like rank distribution and plants a marker phrase into an exact number
of documents, adjacently, so phrase searches return a precisely known
hitset. Everything is driven by one seeded ``random.Random``, so a given
parameter set always produces byte-identical JSONL output.

The marker's terms are excluded from the generated vocabulary. That makes
the planted occurrences the only possible phrase matches, which is what
turns "fraction 0.3" into "exactly int(round(n * 0.3)) hits".
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import IO, Iterator

from .corpus import Record, analyze, write_jsonl

__all__ = ["CorpusSpec", "generate_records", "make_vocab", "write_corpus"]

_SYLLABLES = [
    c + v
    for c in ("b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z")
    for v in ("a", "e", "i", "o", "u")
]

#: Zipf exponent for the rank-weighted vocabulary distribution.
_ZIPF_S = 1.1


@dataclass(frozen=True)
class CorpusSpec:
    """Parameters of one deterministic corpus."""

    n_docs: int
    vocab_size: int = 2000
    mean_doc_len: int = 80
    seed: int = 0
    marker: str = "higgs boson"
    marker_fraction: float = 0.3

    def __post_init__(self):
        if self.n_docs < 0:
            raise ValueError("n_docs must be >= 0")
        if self.vocab_size < 1 or self.mean_doc_len < 1:
            raise ValueError("vocab_size and mean_doc_len must be positive")
        if not 0.0 <= self.marker_fraction <= 1.0:
            raise ValueError("marker_fraction must lie in [0, 1]")
        if not analyze(self.marker):
            raise ValueError("marker must analyze to at least one term")

    @property
    def marker_terms(self) -> list[str]:
        return [t.term for t in analyze(self.marker)]

    @property
    def marker_count(self) -> int:
        """Exact number of documents the marker phrase is planted into."""
        return int(round(self.n_docs * self.marker_fraction))


def make_vocab(size: int, rng: random.Random, forbidden: set[str]) -> list[str]:
    """``size`` distinct pseudo-words of 2-4 syllables, none in ``forbidden``."""
    vocab: list[str] = []
    seen = set(forbidden)
    while len(vocab) < size:
        word = "".join(rng.choice(_SYLLABLES) for _ in range(rng.randint(2, 4)))
        if word in seen:
            continue
        seen.add(word)
        vocab.append(word)
    return vocab


def _zipf_cum_weights(size: int) -> list[float]:
    total = 0.0
    cum = []
    for rank in range(1, size + 1):
        total += 1.0 / rank**_ZIPF_S
        cum.append(total)
    return cum


def _name(rng: random.Random) -> str:
    surname = "".join(rng.choice(_SYLLABLES) for _ in range(rng.randint(2, 3)))
    return f"{rng.choice('abcdefghijklmnopqrstuvwxyz').upper()}. {surname.capitalize()}"


def generate_records(spec: CorpusSpec) -> Iterator[Record]:
    """Yield records with ids 1..n_docs in order, marker plants included.

    Documents are generated in id order from a single seeded generator, so
    the stream is fully deterministic. The marker phrase is inserted as one
    contiguous token block in the fulltext of exactly ``marker_count``
    documents (chosen uniformly), and each planted document also mentions
    the marker terms adjacently at the end of its title.
    """
    rng = random.Random(spec.seed)
    marker_terms = spec.marker_terms
    vocab = make_vocab(spec.vocab_size, rng, forbidden=set(marker_terms))
    cum = _zipf_cum_weights(spec.vocab_size)

    def words(k: int) -> list[str]:
        return rng.choices(vocab, cum_weights=cum, k=k)

    planted = set(rng.sample(range(1, spec.n_docs + 1), spec.marker_count)) if spec.n_docs else set()
    lo = max(1, spec.mean_doc_len // 2)
    hi = spec.mean_doc_len + spec.mean_doc_len // 2
    for doc_id in range(1, spec.n_docs + 1):
        title = words(rng.randint(3, 8))
        abstract = words(rng.randint(15, 40))
        authors = [_name(rng) for _ in range(rng.randint(1, 4))]
        keywords = words(rng.randint(1, 5))
        body = words(rng.randint(lo, hi))
        if doc_id in planted:
            at = rng.randint(0, len(body))
            body[at:at] = marker_terms
            title = title + marker_terms
        yield Record(
            id=doc_id,
            title=" ".join(title),
            abstract=" ".join(abstract),
            authors=authors,
            keywords=keywords,
            fulltext=" ".join(body),
        )


def write_corpus(spec: CorpusSpec, stream: IO[str]) -> int:
    """Generate and write the corpus as JSONL; returns the record count."""
    return write_jsonl(generate_records(spec), stream)
