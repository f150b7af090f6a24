"""Generate a synthetic corpus and run the benchmark on it.

A scaled-down version of the measurement the CLI `bench` subcommand
produces; 2000 documents keep it under a few seconds.

    python3 demos/bench_small.py
"""

from searchbridge import (
    CorpusSpec,
    FieldName,
    PerFieldEngine,
    Query,
    QueryKind,
    UnifiedEngine,
    generate_records,
    run_bench,
)


def main() -> None:
    spec = CorpusSpec(n_docs=2000, seed=42, marker="higgs boson", marker_fraction=0.3)
    records = list(generate_records(spec))
    print(f"generated {len(records)} docs; {spec.marker_count} carry the marker phrase")

    engines = {}
    for name, engine in (("unified", UnifiedEngine()), ("perfield", PerFieldEngine())):
        engine.index_records(records)
        engine.commit()
        engines[name] = engine

    query = Query(FieldName.FULLTEXT, QueryKind.PHRASE, ("higgs", "boson"))
    report = run_bench(
        engines, query, {FieldName.FULLTEXT: 1.0},
        doc_count=len(records), seed=spec.seed, reps=3,
    )
    print()
    print(report.table())
    for warning in report.shape_warnings():
        print("note:", warning)


if __name__ == "__main__":
    main()
