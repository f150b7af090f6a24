"""A close look at the hitset wire format.

Serializes a small and a large id set, prints the 16-byte header of each,
and shows where the deflate path takes over from the raw one.

    python3 demos/wire_format.py
"""

from searchbridge import IntBitset
from searchbridge.intbitset import COMPRESS_THRESHOLD, HEADER_SIZE


def describe(label: str, s: IntBitset) -> None:
    payload = s.serialize()
    header = payload[:HEADER_SIZE]
    flags = payload[5]
    mode = "deflate" if flags & 1 else "raw"
    print(f"{label}: {len(s)} ids, {len(payload)} bytes on the wire ({mode})")
    print(f"  header: {header.hex(' ')}")
    assert IntBitset.deserialize(payload) == s


def main() -> None:
    describe("tiny set", IntBitset([3, 64, 1000]))

    # A dense range: the raw bitset grows past the threshold and the
    # payload switches to deflate, which crushes the repetitive words.
    describe("dense range", IntBitset(range(200_000)))

    # Sparse high ids cost a full word range in raw form; deflate still
    # collapses the long runs of zero words between them.
    describe("sparse high ids", IntBitset(range(0, 3_000_000, 10_000)))

    raw_bytes_at_threshold = COMPRESS_THRESHOLD
    print(f"\nraw payloads of {raw_bytes_at_threshold} bytes or more are deflated;")
    print("smaller ones ship as canonical little-endian words, no trailing zeros.")


if __name__ == "__main__":
    main()
