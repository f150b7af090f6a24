"""Record data model, JSON Lines ingestion, and the shared text analyzer.

Every engine sees the same analysis: Unicode lowercasing, then maximal runs
of alphanumeric characters as terms, with 0-based consecutive positions. No
stemming and no stopwords, so brute-force oracles and cross-engine
comparisons stay exact.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, NamedTuple

__all__ = [
    "FieldName",
    "Record",
    "Token",
    "analyze",
    "parse_jsonl",
    "write_jsonl",
    "CorpusError",
    "MalformedLine",
    "DuplicateId",
    "NonPositiveId",
]

# Maximal runs of word characters minus underscore, i.e. alphanumerics.
_TERM_RE = re.compile(r"[^\W_]+", re.UNICODE)


class CorpusError(Exception):
    """Base class for corpus ingestion errors."""


class MalformedLine(CorpusError):
    """A line is not a JSON object matching the record schema."""

    def __init__(self, line_number: int, reason: str):
        super().__init__(f"line {line_number}: {reason}")
        self.line_number = line_number


class DuplicateId(CorpusError):
    """The same record id appears twice."""


class NonPositiveId(CorpusError):
    """Record ids must be >= 1."""


class FieldName(str, enum.Enum):
    """The closed set of searchable fields; every index and weight is keyed
    by one of these."""

    TITLE = "title"
    ABSTRACT = "abstract"
    AUTHOR = "author"
    KEYWORD = "keyword"
    FULLTEXT = "fulltext"

    def __str__(self) -> str:  # "title" rather than "FieldName.TITLE"
        return self.value


class Token(NamedTuple):
    term: str
    position: int


@dataclass(frozen=True)
class Record:
    """One repository document: metadata fields plus optional full-text.

    Ids are positive and unique within a corpus, and ingestion order agrees
    with id order: a record ingested later has a strictly larger id. That
    convention is what lets "latest added" be computed from ids alone.
    """

    id: int
    title: str = ""
    abstract: str = ""
    authors: list[str] = field(default_factory=list)
    keywords: list[str] = field(default_factory=list)
    fulltext: str = ""

    def field_text(self, name: FieldName) -> str:
        """The raw text of one field; list fields join items with a single
        separator so each field analyzes as one token stream."""
        if name is FieldName.TITLE:
            return self.title
        if name is FieldName.ABSTRACT:
            return self.abstract
        if name is FieldName.AUTHOR:
            return " ".join(self.authors)
        if name is FieldName.KEYWORD:
            return " ".join(self.keywords)
        return self.fulltext

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "abstract": self.abstract,
            "authors": list(self.authors),
            "keywords": list(self.keywords),
            "fulltext": self.fulltext,
        }


def analyze(text: str) -> list[Token]:
    """Tokenize ``text`` into lowercased terms with consecutive positions."""
    return [Token(term, pos) for pos, term in enumerate(_TERM_RE.findall(text.lower()))]


def _require_str(value, line_number: int, key: str) -> str:
    if value is None:
        return ""
    if not isinstance(value, str):
        raise MalformedLine(line_number, f"{key} must be a string")
    return value


def _require_str_list(value, line_number: int, key: str) -> list[str]:
    if value is None:
        return []
    if not isinstance(value, list) or any(not isinstance(v, str) for v in value):
        raise MalformedLine(line_number, f"{key} must be an array of strings")
    return value


def parse_jsonl(stream: IO[str] | IO[bytes] | Iterable[str]) -> list[Record]:
    """Parse one record per non-empty line; missing keys default to empty.

    Raises :class:`MalformedLine` with the 1-based line number for anything
    that is not a record-shaped JSON object, :class:`NonPositiveId` for ids
    < 1, and :class:`DuplicateId` for repeated ids.
    """
    records: list[Record] = []
    seen: set[int] = set()
    for line_number, line in enumerate(stream, start=1):
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedLine(line_number, f"invalid JSON ({exc.msg})") from None
        if not isinstance(obj, dict):
            raise MalformedLine(line_number, "expected a JSON object")
        unknown = set(obj) - {"id", "title", "abstract", "authors", "keywords", "fulltext"}
        if unknown:
            raise MalformedLine(line_number, f"unknown keys {sorted(unknown)}")
        rid = obj.get("id")
        if isinstance(rid, bool) or not isinstance(rid, int):
            raise MalformedLine(line_number, "id must be an integer")
        if rid < 1:
            raise NonPositiveId(f"line {line_number}: id {rid} must be >= 1")
        if rid in seen:
            raise DuplicateId(f"line {line_number}: id {rid} already seen")
        seen.add(rid)
        records.append(
            Record(
                id=rid,
                title=_require_str(obj.get("title"), line_number, "title"),
                abstract=_require_str(obj.get("abstract"), line_number, "abstract"),
                authors=_require_str_list(obj.get("authors"), line_number, "authors"),
                keywords=_require_str_list(obj.get("keywords"), line_number, "keywords"),
                fulltext=_require_str(obj.get("fulltext"), line_number, "fulltext"),
            )
        )
    return records


def write_jsonl(records: Iterable[Record], stream: IO[str]) -> int:
    """Write records one JSON object per line; inverse of :func:`parse_jsonl`.

    Returns the number of records written.
    """
    count = 0
    for record in records:
        stream.write(json.dumps(record.to_json(), ensure_ascii=True))
        stream.write("\n")
        count += 1
    return count


def iter_jsonl(path: str) -> Iterator[Record]:
    """Parse a JSONL corpus file from disk."""
    with open(path, "r", encoding="utf-8") as fh:
        yield from parse_jsonl(fh)
