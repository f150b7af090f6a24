"""Dense bitset over non-negative record identifiers, plus its wire format.

An :class:`IntBitset` stores a set of record ids as one bit per id: bit ``j``
of 64-bit word ``w`` represents id ``64*w + j``. Words are held in canonical
form (no trailing zero words; the empty set has zero words), so equal sets
always have equal internal representations. Values are immutable: all set
operations return new instances, and instances are safe to share between
threads and to use as dict keys.

Hitsets routinely carry hundreds of thousands of ids, so the transfer format
matters more than in-memory layout. The ``IBS1`` binary format is:

====== ====== ===============================================================
offset size   content
====== ====== ===============================================================
0      4      magic ``IBS1`` (``49 42 53 31``)
4      1      version, currently ``1``
5      1      flags; bit0 set means the payload is a raw DEFLATE stream
              (RFC 1951); all other bits are reserved and must be zero
6      2      reserved, must be zero
8      8      word count, unsigned 64-bit little-endian
16     ...    payload: word-count 64-bit little-endian words, raw or
              DEFLATE-compressed
====== ====== ===============================================================

The serializer compresses exactly when the raw payload is at least
``COMPRESS_THRESHOLD`` bytes; below that the header plus DEFLATE overhead
costs more than it saves. Uncompressed output is byte-canonical (equal sets
serialize identically); compressed output guarantees only semantic equality,
since DEFLATE streams are not canonical across encoders.

The decoder is safe on arbitrary input: it validates the header before
allocating, rejects word counts beyond what ``max_id_limit`` allows, and
bounds decompression output, so it never reads past the buffer and never
allocates more than ``max_id_limit/8`` plus a constant number of bytes.
"""

from __future__ import annotations

import operator
import struct
import zlib
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "IntBitset",
    "set_op",
    "DEFAULT_MAX_ID_LIMIT",
    "COMPRESS_THRESHOLD",
    "IntBitsetError",
    "IdOutOfRange",
    "DeserializeError",
    "BadMagic",
    "UnsupportedVersion",
    "ReservedBitsSet",
    "TruncatedPayload",
    "PayloadSizeMismatch",
    "LimitExceeded",
]

#: Largest admissible identifier unless a caller overrides it. 2**27 ids
#: (~134M) bound the dense worst case at 16 MiB, which protects decoders
#: from adversarial inputs while fitting multi-million-record corpora.
DEFAULT_MAX_ID_LIMIT = 1 << 27

#: Compress the payload iff its raw size reaches this many bytes.
COMPRESS_THRESHOLD = 8192

MAGIC = b"IBS1"
VERSION = 1
FLAG_DEFLATE = 0x01

# magic, version, flags, reserved (2 bytes), word count: fixed 16 bytes.
_HEADER = struct.Struct("<4sBBHQ")
HEADER_SIZE = _HEADER.size


class IntBitsetError(Exception):
    """Base class for bitset errors."""


class IdOutOfRange(IntBitsetError, ValueError):
    """An id is negative or exceeds the configured ``max_id_limit``."""


class DeserializeError(IntBitsetError, ValueError):
    """Base class for wire-format decoding errors."""


class BadMagic(DeserializeError):
    """Input does not start with the ``IBS1`` magic bytes."""


class UnsupportedVersion(DeserializeError):
    """Header carries a version this decoder does not understand."""


class ReservedBitsSet(DeserializeError):
    """Reserved flag bits or reserved header bytes are non-zero."""


class TruncatedPayload(DeserializeError):
    """Payload ends before the header-promised word count is reached."""


class PayloadSizeMismatch(DeserializeError):
    """Payload size disagrees with the header word count."""


class LimitExceeded(DeserializeError):
    """Header implies ids beyond the configured ``max_id_limit``."""


def _pack_ids(ids: Iterable[int], max_id_limit: int) -> int:
    """Fold ids into the backing integer, validating the range."""
    if isinstance(ids, np.ndarray):
        arr = ids.astype(np.int64, copy=False).ravel()
    else:
        try:
            arr = np.fromiter(ids, dtype=np.int64)
        except (OverflowError, ValueError) as exc:
            raise IdOutOfRange(f"ids must be machine-sized integers: {exc}") from None
    if arr.size == 0:
        return 0
    lo = int(arr.min())
    hi = int(arr.max())
    if lo < 0:
        raise IdOutOfRange(f"negative id {lo}")
    if hi > max_id_limit:
        raise IdOutOfRange(f"id {hi} exceeds max_id_limit {max_id_limit}")
    buf = np.zeros(hi // 8 + 1, dtype=np.uint8)
    np.bitwise_or.at(buf, arr >> 3, np.left_shift(1, arr & 7).astype(np.uint8))
    return int.from_bytes(buf.tobytes(), "little")


class IntBitset:
    """Immutable set of non-negative integers with dense bit storage.

    Construct from any iterable of ids (duplicates collapse), or via
    :meth:`deserialize`. Supports the usual set operators ``| & - ^``,
    ``in``, ``len``, iteration in ascending order, and equality as semantic
    set equality regardless of each side's ``max_id_limit``.
    """

    __slots__ = ("_bits", "max_id_limit")

    def __init__(self, ids: Iterable[int] = (), *, max_id_limit: int = DEFAULT_MAX_ID_LIMIT):
        object.__setattr__(self, "max_id_limit", max_id_limit)
        object.__setattr__(self, "_bits", _pack_ids(ids, max_id_limit))

    def __setattr__(self, name, value):
        raise AttributeError("IntBitset is immutable")

    @classmethod
    def _from_bits(cls, bits: int, max_id_limit: int) -> "IntBitset":
        self = object.__new__(cls)
        object.__setattr__(self, "max_id_limit", max_id_limit)
        object.__setattr__(self, "_bits", bits)
        return self

    @classmethod
    def from_ids(cls, ids: Iterable[int], *, max_id_limit: int = DEFAULT_MAX_ID_LIMIT) -> "IntBitset":
        """Build a set containing exactly the distinct ids of ``ids``."""
        return cls(ids, max_id_limit=max_id_limit)

    # -- queries ---------------------------------------------------------

    def __contains__(self, id: int) -> bool:
        try:
            i = operator.index(id)
        except TypeError:
            return False
        if i < 0:
            return False
        return (self._bits >> i) & 1 == 1

    def contains(self, id: int) -> bool:
        """True iff ``id`` is a member; out-of-range ids are simply absent."""
        return id in self

    def __len__(self) -> int:
        return self._bits.bit_count()

    def __bool__(self) -> bool:
        return self._bits != 0

    def __iter__(self) -> Iterator[int]:
        return iter(self.to_ids())

    def to_ids(self) -> list[int]:
        """Members as a strictly ascending list."""
        return self.to_array().tolist()

    def to_array(self) -> np.ndarray:
        """Members as a strictly ascending int64 array."""
        if not self._bits:
            return np.empty(0, dtype=np.int64)
        raw = self._bits.to_bytes((self._bits.bit_length() + 7) // 8, "little")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
        return np.flatnonzero(bits).astype(np.int64)

    def max_id(self) -> int:
        """Largest member; -1 for the empty set."""
        return self._bits.bit_length() - 1

    # -- set algebra -----------------------------------------------------

    def _combine(self, bits: int, other: "IntBitset") -> "IntBitset":
        return IntBitset._from_bits(bits, max(self.max_id_limit, other.max_id_limit))

    def __or__(self, other: "IntBitset") -> "IntBitset":
        return self._combine(self._bits | other._bits, other)

    def __and__(self, other: "IntBitset") -> "IntBitset":
        return self._combine(self._bits & other._bits, other)

    def __sub__(self, other: "IntBitset") -> "IntBitset":
        return self._combine(self._bits & ~other._bits, other)

    def __xor__(self, other: "IntBitset") -> "IntBitset":
        return self._combine(self._bits ^ other._bits, other)

    def union(self, other: "IntBitset") -> "IntBitset":
        return self | other

    def intersection(self, other: "IntBitset") -> "IntBitset":
        return self & other

    def difference(self, other: "IntBitset") -> "IntBitset":
        return self - other

    def symmetric_difference(self, other: "IntBitset") -> "IntBitset":
        return self ^ other

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntBitset):
            return NotImplemented
        return self._bits == other._bits

    def __hash__(self) -> int:
        return hash(self._bits)

    def __repr__(self) -> str:
        n = len(self)
        if n <= 6:
            return f"IntBitset({self.to_ids()})"
        head = ", ".join(str(i) for i in self.to_array()[:4])
        return f"IntBitset([{head}, ...] <{n} ids, max {self.max_id()}>)"

    # -- wire format -----------------------------------------------------

    def serialize(self) -> bytes:
        """Encode as IBS1 bytes; see the module docstring for the layout."""
        word_count = (self._bits.bit_length() + 63) // 64
        raw = self._bits.to_bytes(word_count * 8, "little")
        flags = 0
        payload = raw
        if len(raw) >= COMPRESS_THRESHOLD:
            flags = FLAG_DEFLATE
            co = zlib.compressobj(6, zlib.DEFLATED, -15)
            payload = co.compress(raw) + co.flush()
        return _HEADER.pack(MAGIC, VERSION, flags, 0, word_count) + payload

    @classmethod
    def deserialize(cls, data: bytes, *, max_id_limit: int = DEFAULT_MAX_ID_LIMIT) -> "IntBitset":
        """Decode IBS1 bytes, tolerating producers that left trailing zero words.

        Safe on arbitrary input: raises a :class:`DeserializeError` subclass
        rather than crashing, and never allocates more than the dense
        ``max_id_limit`` worst case.
        """
        if len(data) < HEADER_SIZE:
            raise TruncatedPayload(f"need {HEADER_SIZE} header bytes, got {len(data)}")
        magic, version, flags, reserved, word_count = _HEADER.unpack_from(data, 0)
        if magic != MAGIC:
            raise BadMagic(f"bad magic {magic!r}")
        if version != VERSION:
            raise UnsupportedVersion(f"version {version}")
        if flags & ~FLAG_DEFLATE:
            raise ReservedBitsSet(f"reserved flag bits set: {flags:#04x}")
        if reserved != 0:
            raise ReservedBitsSet(f"reserved header bytes set: {reserved:#06x}")
        # Allocation guard: reject before touching the payload.
        if word_count > max_id_limit // 64 + 1:
            raise LimitExceeded(f"word count {word_count} implies ids beyond {max_id_limit}")
        expected = word_count * 8
        payload = data[HEADER_SIZE:]
        if flags & FLAG_DEFLATE:
            d = zlib.decompressobj(-15)
            try:
                raw = d.decompress(payload, expected + 1)
            except zlib.error as exc:
                raise TruncatedPayload(f"corrupt deflate payload: {exc}") from None
            if len(raw) > expected:
                raise PayloadSizeMismatch(f"decompressed beyond {expected} bytes")
            if not d.eof:
                raise TruncatedPayload("deflate stream ends before payload is complete")
            if d.unused_data:
                raise PayloadSizeMismatch(f"{len(d.unused_data)} trailing bytes after deflate stream")
            if len(raw) != expected:
                raise PayloadSizeMismatch(f"decompressed {len(raw)} bytes, header promised {expected}")
        else:
            if len(payload) < expected:
                raise TruncatedPayload(f"payload has {len(payload)} bytes, header promised {expected}")
            if len(payload) > expected:
                raise PayloadSizeMismatch(f"{len(payload) - expected} trailing payload bytes")
            raw = payload
        bits = int.from_bytes(raw, "little")
        if bits.bit_length() - 1 > max_id_limit:
            raise LimitExceeded(f"id {bits.bit_length() - 1} exceeds max_id_limit {max_id_limit}")
        return cls._from_bits(bits, max_id_limit)


_SET_OPS = frozenset({"union", "intersection", "difference", "symmetric_difference"})


def set_op(kind: str, a: IntBitset, b: IntBitset) -> IntBitset:
    """Apply a named set operation; ``kind`` is one of union, intersection,
    difference, symmetric_difference."""
    if kind not in _SET_OPS:
        raise ValueError(f"unknown set operation {kind!r}")
    return getattr(a, kind)(b)
