"""The generic search/ranking bridge: adapter contract, registry, and the
two-phase pipeline.

Search and ranking are separate steps. The searcher produces a hitset of
record ids; the ranker then orders (a capped portion of) that hitset by
lexical relevance and reports scores as percentages of the best score. Any
engine can sit behind the bridge by implementing :class:`SearchRankAdapter`.

Large hitsets are not ranked whole: when a query matches more than
``hitset_cap`` records (default 10,000), only the cap's worth of
latest-added records (equivalently, the numerically largest ids, since ids
are assigned in ingestion order) is passed to the ranker. Recent records
are usually the relevant ones, and the cap keeps ranking cost bounded.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Protocol, Sequence, runtime_checkable

from .corpus import FieldName, Record, analyze
from .intbitset import IntBitset

__all__ = [
    "Query",
    "QueryKind",
    "RankConfig",
    "RankedEntry",
    "SearchRankAdapter",
    "AdapterRegistry",
    "cap_hitset",
    "coerce_weights",
    "normalize_percent",
    "rank_order",
    "search_then_rank",
    "find_similar",
    "BridgeError",
    "EmptyQuery",
    "InvalidQuery",
    "InvalidWeights",
    "AllZeroScores",
    "DuplicateAdapterName",
    "UnknownAdapter",
    "RegistryFrozen",
    "UnknownRecord",
    "CapabilityUnsupported",
]

DEFAULT_HITSET_CAP = 10_000


class BridgeError(Exception):
    """Base class for bridge-level errors."""


class EmptyQuery(BridgeError):
    """A query analyzed to zero terms."""


class InvalidQuery(BridgeError):
    """Query shape violates its kind (e.g. multi-term word query)."""


class InvalidWeights(BridgeError):
    """Field weights contain unknown fields or negative values."""


class AllZeroScores(BridgeError):
    """Every candidate scored zero: no similarity evidence. Callers
    translate this to an empty result."""


class DuplicateAdapterName(BridgeError):
    """Adapter name already registered."""


class UnknownAdapter(BridgeError):
    """No adapter registered under that name."""


class RegistryFrozen(BridgeError):
    """Registration attempted after the registry was frozen."""


class UnknownRecord(BridgeError):
    """Similarity requested for a record id the engine has never indexed."""


class CapabilityUnsupported(BridgeError):
    """The adapter does not implement the requested capability."""


class QueryKind(str, enum.Enum):
    WORD = "word"
    PHRASE = "phrase"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Query:
    """A single-field query over analyzer-normalized terms.

    Word queries carry exactly one term; phrase queries match their terms at
    strictly consecutive positions, in order.
    """

    field: FieldName
    kind: QueryKind
    terms: tuple[str, ...]

    def __post_init__(self):
        if not self.terms:
            raise EmptyQuery("query has no terms")
        if self.kind is QueryKind.WORD and len(self.terms) != 1:
            raise InvalidQuery(
                f"word query takes exactly one term, got {len(self.terms)}; use kind=phrase"
            )

    @classmethod
    def from_text(cls, field: FieldName, kind: QueryKind, text: str) -> "Query":
        """Analyze raw query text into a :class:`Query`."""
        terms = tuple(token.term for token in analyze(text))
        if not terms:
            raise EmptyQuery(f"query text {text!r} analyzed to no terms")
        return cls(field=FieldName(field), kind=QueryKind(kind), terms=terms)


@dataclass(frozen=True)
class RankConfig:
    """Per-call ranking configuration. The cap applies to the hitset first;
    ``top_k`` then truncates the ranked output (no ordering between the two
    values is required)."""

    top_k: int
    hitset_cap: int = DEFAULT_HITSET_CAP

    def __post_init__(self):
        if self.top_k < 1:
            raise ValueError("top_k must be positive")
        if self.hitset_cap < 1:
            raise ValueError("hitset_cap must be positive")


class RankedEntry(NamedTuple):
    """One ranked result: record id and percent of the best raw score."""

    id: int
    percent: float


@runtime_checkable
class SearchRankAdapter(Protocol):
    """Capability contract every pluggable engine implements.

    ``rank`` output ids must be a subset of the given hitset, and search
    results reflect only committed records. Engines without a similarity
    capability raise :class:`CapabilityUnsupported` from ``similar``.
    """

    def index_records(self, records: Iterable[Record]) -> None: ...

    def commit(self) -> None: ...

    def search(self, query: Query) -> IntBitset: ...

    def rank(
        self,
        query: Query,
        hitset: IntBitset,
        weights: Mapping[FieldName, float],
        top_k: int,
    ) -> list[tuple[int, float]]: ...

    def similar(self, record_id: int, params) -> list[tuple[int, float]]: ...


class AdapterRegistry:
    """Name-to-adapter mapping, frozen once the service starts serving."""

    def __init__(self):
        self._adapters: dict[str, SearchRankAdapter] = {}
        self._frozen = False

    def register(self, name: str, adapter: SearchRankAdapter) -> "AdapterRegistry":
        if self._frozen:
            raise RegistryFrozen("registry is frozen")
        if name in self._adapters:
            raise DuplicateAdapterName(f"adapter {name!r} already registered")
        self._adapters[name] = adapter
        return self

    def resolve(self, name: str) -> SearchRankAdapter:
        try:
            return self._adapters[name]
        except KeyError:
            raise UnknownAdapter(f"no adapter named {name!r}") from None

    def names(self) -> list[str]:
        return list(self._adapters)

    def adapters(self) -> list[SearchRankAdapter]:
        return list(self._adapters.values())

    def freeze(self) -> "AdapterRegistry":
        self._frozen = True
        return self

    def __contains__(self, name: str) -> bool:
        return name in self._adapters


def coerce_weights(weights: Mapping) -> dict[FieldName, float]:
    """Validate a field-weight mapping; keys may be names or FieldName."""
    coerced: dict[FieldName, float] = {}
    for key, value in weights.items():
        try:
            fname = FieldName(key)
        except ValueError:
            raise InvalidWeights(f"unknown field {key!r}") from None
        weight = float(value)
        if weight < 0:
            raise InvalidWeights(f"weight for {fname} is negative")
        coerced[fname] = weight
    return coerced


def cap_hitset(hitset: IntBitset, cap: int) -> IntBitset:
    """Keep the ``cap`` largest ids (the latest-added records); a hitset at
    or under the cap passes through unchanged."""
    if cap < 1:
        raise ValueError("cap must be positive")
    if len(hitset) <= cap:
        return hitset
    return IntBitset(hitset.to_array()[-cap:], max_id_limit=hitset.max_id_limit)


def rank_order(scored: Iterable[tuple[int, float]]) -> list[tuple[int, float]]:
    """The bridge's deterministic total order: raw score descending, ties
    broken by record id descending (latest first)."""
    return sorted(scored, key=lambda entry: (-entry[1], -entry[0]))


def normalize_percent(scored: Sequence[tuple[int, float]]) -> list[RankedEntry]:
    """Scale raw scores to percentages of the maximum.

    Zero-scored entries carry no similarity evidence and are dropped; if
    everything scored zero, :class:`AllZeroScores` is raised so callers can
    distinguish "no evidence" from "no candidates". The leading entry of a
    non-empty result is exactly 100.0.
    """
    positive = []
    for doc_id, raw in scored:
        if raw < 0:
            raise ValueError(f"negative raw score {raw} for doc {doc_id}")
        if raw > 0:
            positive.append((doc_id, raw))
    if not positive:
        if scored:
            raise AllZeroScores("all raw scores are zero")
        return []
    max_raw = max(raw for _, raw in positive)
    ranked = [RankedEntry(doc_id, 100.0 * (raw / max_raw)) for doc_id, raw in positive]
    ranked.sort(key=lambda entry: (-entry.percent, -entry.id))
    return ranked


def search_then_rank(
    adapter: SearchRankAdapter,
    query: Query,
    weights: Mapping[FieldName, float],
    config: RankConfig,
) -> tuple[IntBitset, list[RankedEntry]]:
    """Run the two-phase pipeline: search, cap, rank, normalize.

    Returns the full uncapped hitset (hit counts are reported uncapped)
    alongside the ranked list, whose ids are a subset of the capped hitset.
    """
    weights = coerce_weights(weights)
    hitset = adapter.search(query)
    capped = cap_hitset(hitset, config.hitset_cap)
    scored = adapter.rank(query, capped, weights, config.top_k)
    try:
        ranked = normalize_percent(scored)
    except AllZeroScores:
        ranked = []
    return hitset, ranked[: config.top_k]


def find_similar(adapter: SearchRankAdapter, record_id: int, params=None) -> list[RankedEntry]:
    """Records most similar to ``record_id``, excluding the record itself.

    ``params=None`` leaves parameter defaults, including truncation, to the
    adapter. Raises :class:`UnknownRecord` for unindexed ids and propagates
    :class:`CapabilityUnsupported` from adapters without similarity support.
    """
    scored = adapter.similar(record_id, params)
    try:
        ranked = normalize_percent(scored)
    except AllZeroScores:
        return []
    return ranked if params is None else ranked[: params.top_k]
