"""Generate the client test fixtures from the primary package.

Writes into test/fixtures/:

- payloads.json: 1000 serialized hitsets. Sets of up to 300 ids carry the
  expected id list verbatim; larger ones carry count, head, tail, and a
  sha256 over the comma-joined ascending ids, which the client recomputes.
- corpus.jsonl: the corpus the test server preloads.
- expected.json: search/rank/similar results computed directly against the
  engines, bypassing HTTP, with the service's two-decimal rounding.

Run from the frontend directory: python3 scripts/make_fixtures.py
"""

import base64
import hashlib
import json
import random
from pathlib import Path

import numpy as np

from searchbridge import (
    FieldName,
    IntBitset,
    PerFieldEngine,
    Query,
    QueryKind,
    RankConfig,
    Record,
    UnifiedEngine,
    find_similar,
    search_then_rank,
    write_jsonl,
)

FIXTURES = Path(__file__).resolve().parent.parent / "test" / "fixtures"
EXPLICIT_IDS_MAX = 300

VOCAB = [
    "higgs", "boson", "electron", "muon", "quark", "photon", "neutrino",
    "gluon", "tau", "lepton", "hadron", "collider", "detector", "decay",
    "spin", "charge", "mass", "energy", "beam", "plasma", "field", "lattice",
]


def payload_entry(ids: list[int]) -> dict:
    payload = IntBitset(ids).serialize()
    entry: dict = {"payload": base64.b64encode(payload).decode()}
    if len(ids) <= EXPLICIT_IDS_MAX:
        entry["ids"] = ids
    else:
        joined = ",".join(map(str, ids))
        entry["count"] = len(ids)
        entry["sha256"] = hashlib.sha256(joined.encode()).hexdigest()
        entry["head"] = ids[:5]
        entry["tail"] = ids[-5:]
    return entry


def make_payloads() -> list[dict]:
    rng = np.random.default_rng(8842)
    entries = []
    universes = [5_000, 50_000, 200_000, 1_000_000]
    weights = [0.3, 0.3, 0.25, 0.15]
    for _ in range(940):
        universe = int(rng.choice(universes, p=weights))
        size = int(rng.integers(0, 2001))
        ids = np.unique(rng.integers(0, universe, size))
        entries.append(payload_entry(ids.tolist()))
    for _ in range(50):
        ids = np.unique(rng.integers(0, 400_000, int(rng.integers(20_000, 80_001))))
        entries.append(payload_entry(ids.tolist()))
    for _ in range(2):
        offset = int(rng.integers(0, 500_000))
        entries.append(payload_entry(list(range(offset, offset + 1_000_000))))
    for _ in range(4):
        ids = np.unique(rng.integers(0, 1 << 23, 110_000))[:100_000]
        entries.append(payload_entry(ids.tolist()))
    for _ in range(4):
        ids = np.unique(rng.integers(0, 1 << 24, 1_200_000))[:1_000_000]
        entries.append(payload_entry(ids.tolist()))
    assert len(entries) == 1000
    return entries


def make_corpus() -> list[Record]:
    rng = random.Random(9090)
    records = []
    for i in range(1, 61):
        records.append(
            Record(
                id=i,
                title=" ".join(rng.choices(VOCAB, k=rng.randint(1, 5))),
                abstract=" ".join(rng.choices(VOCAB, k=rng.randint(0, 20))),
                authors=[f"{rng.choice(VOCAB)} {rng.choice(VOCAB)}" for _ in range(rng.randint(0, 3))],
                keywords=rng.choices(VOCAB, k=rng.randint(0, 4)),
                fulltext=" ".join(rng.choices(VOCAB, k=rng.randint(0, 60))),
            )
        )
    # A duplicated pair with distinctive repeated terms, so similarity has
    # an unambiguous best answer, plus one partial match.
    records.append(Record(id=701, title="axion dilaton axion dilaton", keywords=["axion"]))
    records.append(Record(id=702, title="axion dilaton axion dilaton", keywords=["axion"]))
    records.append(Record(id=703, title="axion energy"))
    return records


def rounded(entries) -> list[dict]:
    return [{"id": e.id, "percent": round(e.percent, 2)} for e in entries]


def make_expected(records: list[Record]) -> dict:
    unified = UnifiedEngine()
    unified.index_records(records)
    unified.commit()
    perfield = PerFieldEngine()
    perfield.index_records(records)
    perfield.commit()
    engines = {"unified": unified, "perfield": perfield}

    searches = []
    for engine, field, kind, q in [
        ("unified", "title", "word", "higgs"),
        ("unified", "fulltext", "word", "quark"),
        ("unified", "abstract", "phrase", "higgs boson"),
        ("unified", "title", "word", "axion"),
        ("unified", "title", "word", "unguessable"),
        ("perfield", "title", "word", "higgs"),
        ("perfield", "fulltext", "phrase", "energy beam"),
    ]:
        terms = tuple(q.split())
        hitset = engines[engine].search(Query(FieldName(field), QueryKind(kind), terms))
        searches.append(
            {"engine": engine, "field": field, "kind": kind, "q": q,
             "count": len(hitset), "ids": list(hitset.to_ids())}
        )

    ranks = []
    for engine, field, kind, q, weights, top_k in [
        ("unified", "title", "word", "higgs", {"title": 2.0, "abstract": 1.0}, 10),
        ("unified", "fulltext", "phrase", "higgs boson", {"fulltext": 1.0}, 10),
        ("perfield", "title", "word", "higgs", {"title": 2.0, "abstract": 1.0}, 10),
        ("unified", "keyword", "word", "axion", {"keyword": 1.0, "title": 1.0}, 5),
    ]:
        query = Query(FieldName(field), QueryKind(kind), tuple(q.split()))
        fw = {FieldName(f): w for f, w in weights.items()}
        hitset, ranked = search_then_rank(engines[engine], query, fw, RankConfig(top_k=top_k))
        ranks.append(
            {"engine": engine, "query": {"field": field, "kind": kind, "q": q},
             "weights": weights, "top_k": top_k,
             "total_hits": len(hitset), "results": rounded(ranked)}
        )

    # One rank request with a caller-supplied hitset, honored verbatim.
    subset = IntBitset([701, 702, 703])
    query = Query(FieldName.TITLE, QueryKind.WORD, ("axion",))
    hitset, ranked = search_then_rank(
        _Fixed(unified, subset), query, {FieldName.TITLE: 1.0}, RankConfig(top_k=10)
    )
    provided = {
        "engine": "unified",
        "query": {"field": "title", "kind": "word", "q": "axion"},
        "weights": {"title": 1.0},
        "top_k": 10,
        "hitset": base64.b64encode(subset.serialize()).decode(),
        "total_hits": len(hitset),
        "results": rounded(ranked),
    }

    similars = []
    for record_id, top_k in [(701, 5), (1, 10)]:
        from searchbridge.engine_unified import MltParams

        entries = find_similar(unified, record_id, MltParams(top_k=top_k))
        similars.append({"record_id": record_id, "top_k": top_k, "results": rounded(entries)})

    return {
        "engines": ["unified", "perfield"],
        "searches": searches,
        "ranks": ranks,
        "provided_hitset_rank": provided,
        "similars": similars,
    }


class _Fixed:
    """Adapter wrapper whose search() returns a fixed hitset."""

    def __init__(self, inner, hitset):
        self._inner = inner
        self._hitset = hitset

    def search(self, query):
        return self._hitset

    def __getattr__(self, name):
        return getattr(self._inner, name)


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)

    payloads = make_payloads()
    (FIXTURES / "payloads.json").write_text(json.dumps(payloads))
    total = sum(len(p["payload"]) for p in payloads)
    print(f"payloads.json: 1000 entries, {total / 1e6:.1f} MB of base64")

    records = make_corpus()
    with (FIXTURES / "corpus.jsonl").open("w") as fh:
        write_jsonl(records, fh)
    (FIXTURES / "expected.json").write_text(json.dumps(make_expected(records), indent=1))
    print(f"corpus.jsonl: {len(records)} records; expected.json written")


if __name__ == "__main__":
    main()
