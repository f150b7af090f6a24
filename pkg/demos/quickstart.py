"""Index a handful of records, search, rank, and find similar ones.

Run from the repository root:

    python3 demos/quickstart.py
"""

from searchbridge import (
    FieldName,
    PerFieldEngine,
    Query,
    QueryKind,
    RankConfig,
    Record,
    UnifiedEngine,
    find_similar,
    search_then_rank,
)

RECORDS = [
    Record(id=1, title="higgs boson discovery", abstract="a five sigma excess near 125 GeV",
           authors=["atlas collaboration"], keywords=["higgs", "lhc"]),
    Record(id=2, title="standard model review", abstract="gauge bosons and the higgs mechanism",
           keywords=["higgs", "review"]),
    Record(id=3, title="neutrino oscillations", abstract="mass differences from oscillation data"),
    Record(id=4, title="higgs boson discovery", abstract="a five sigma excess near 125 GeV",
           authors=["atlas collaboration"], keywords=["higgs", "lhc"]),
    Record(id=5, title="collider detectors", abstract="tracking and calorimetry at high luminosity"),
]


def main() -> None:
    unified = UnifiedEngine()
    unified.index_records(RECORDS)
    unified.commit()

    perfield = PerFieldEngine()
    perfield.index_records(RECORDS)
    perfield.commit()

    query = Query.from_text(FieldName.ABSTRACT, QueryKind.PHRASE, "five sigma")
    hits = unified.search(query)
    print(f'phrase "five sigma" in abstract -> ids {list(hits.to_ids())}')

    weights = {FieldName.TITLE: 2.0, FieldName.ABSTRACT: 1.0, FieldName.KEYWORD: 1.0}
    word = Query.from_text(FieldName.TITLE, QueryKind.WORD, "higgs")
    for name, engine in (("unified", unified), ("perfield", perfield)):
        hitset, ranked = search_then_rank(engine, word, weights, RankConfig(top_k=10))
        rows = ", ".join(f"{e.id}:{e.percent:.2f}%" for e in ranked)
        print(f"{name:8s} {len(hitset)} hits, ranked: {rows}")

    # Record 4 duplicates record 1, yet record 2 outranks it here: with
    # "higgs" as the only selected term, an abstract mention is rarer in
    # this corpus than a title one and carries more idf weight.
    similar = find_similar(unified, 1)
    print("similar to record 1:", [(e.id, f"{e.percent:.2f}%") for e in similar])


if __name__ == "__main__":
    main()
