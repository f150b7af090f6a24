"""searchbridge: pluggable full-text search and word-similarity ranking.

A generic bridge over interchangeable engine architectures (one unified
index vs one database per field), a dense compressed bitset with a binary
wire format for bulk hitset transfer, weighted per-field BM25 ranking with
percentage normalization, more-like-this record similarity, an HTTP
service, and a benchmark harness.
"""

from .bridge import (
    AdapterRegistry,
    Query,
    QueryKind,
    RankConfig,
    RankedEntry,
    SearchRankAdapter,
    cap_hitset,
    find_similar,
    normalize_percent,
    search_then_rank,
)
from .bench import BenchReport, run_bench
from .corpus import FieldName, Record, Token, analyze, parse_jsonl, write_jsonl
from .corpusgen import CorpusSpec, generate_records, write_corpus
from .engine_perfield import PerFieldEngine
from .engine_unified import MltParams, UnifiedEngine
from .index_core import Bm25Params, FieldIndex
from .intbitset import IntBitset, set_op

__version__ = "0.1.0"

__all__ = [
    "AdapterRegistry",
    "BenchReport",
    "Bm25Params",
    "CorpusSpec",
    "FieldIndex",
    "FieldName",
    "IntBitset",
    "MltParams",
    "PerFieldEngine",
    "Query",
    "QueryKind",
    "RankConfig",
    "RankedEntry",
    "Record",
    "SearchRankAdapter",
    "Token",
    "UnifiedEngine",
    "analyze",
    "cap_hitset",
    "find_similar",
    "generate_records",
    "normalize_percent",
    "parse_jsonl",
    "run_bench",
    "search_then_rank",
    "set_op",
    "write_corpus",
    "write_jsonl",
]
