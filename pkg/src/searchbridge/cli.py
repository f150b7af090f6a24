"""Command-line front end.

Each invocation is self-contained: corpus-reading subcommands parse the
JSONL file, build the requested engines in memory, run one operation and
exit. Nothing persists between runs; ``serve`` is the way to keep indexes
warm across many queries.

Exit codes: 0 success, 1 usage errors (bad flags, unknown subcommand),
2 data errors (malformed corpus, unknown records, engine capability or
consistency failures).
"""

from __future__ import annotations

import sys
from typing import Sequence

import click

from . import __version__
from .bench import TOP_KS, run_bench
from .bridge import (
    BridgeError,
    DEFAULT_HITSET_CAP,
    Query,
    RankConfig,
    coerce_weights,
    find_similar,
    search_then_rank,
)
from .corpus import CorpusError, FieldName, iter_jsonl
from .corpusgen import CorpusSpec, write_corpus
from .engine_perfield import PerFieldEngine
from .engine_unified import MltParams, UnifiedEngine
from .index_core import FieldIndexError
from .intbitset import IntBitsetError

_FIELDS = click.Choice([f.value for f in FieldName])
_KINDS = click.Choice(["word", "phrase"])
_ENGINES = click.Choice(["unified", "perfield", "all"])

corpus_argument = click.argument("corpus", type=click.Path(exists=True, dir_okay=False))
engine_option = click.option(
    "--engine", type=_ENGINES, default="unified", show_default=True, help="Engine architecture."
)


def load_corpus(path: str):
    return list(iter_jsonl(path))


def build_engines(records, which: str) -> dict:
    """Index the records into the selected architecture(s) and commit."""
    engines = {}
    if which in ("unified", "all"):
        engines["unified"] = UnifiedEngine()
    if which in ("perfield", "all"):
        engines["perfield"] = PerFieldEngine()
    for engine in engines.values():
        engine.index_records(records)
        engine.commit()
    return engines


def parse_weights(pairs: Sequence[str], default_field: str) -> dict:
    """``FIELD=VALUE`` options into a weight mapping; defaults to weight 1
    on the queried field when no option is given."""
    if not pairs:
        return {default_field: 1.0}
    weights = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep:
            raise click.BadParameter(f"expected FIELD=VALUE, got {pair!r}", param_hint="--weight")
        try:
            weights[name] = float(value)
        except ValueError:
            raise click.BadParameter(f"{value!r} is not a number", param_hint="--weight") from None
    return weights


@click.group(no_args_is_help=False)
@click.version_option(__version__, prog_name="searchbridge")
def cli():
    """Search and word-similarity ranking over JSONL corpora."""


@cli.command("gen-corpus")
@click.option("--n-docs", "-n", type=click.IntRange(min=0), required=True, help="Documents to generate.")
@click.option("--vocab-size", type=click.IntRange(min=1), default=2000, show_default=True)
@click.option("--mean-doc-len", type=click.IntRange(min=1), default=80, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--marker", default="higgs boson", show_default=True, help="Phrase planted verbatim.")
@click.option(
    "--marker-fraction",
    type=click.FloatRange(0.0, 1.0),
    default=0.3,
    show_default=True,
    help="Exact fraction of documents that contain the marker phrase.",
)
@click.option("--out", "-o", type=click.Path(dir_okay=False, allow_dash=True), default="-", show_default=True)
def gen_corpus_command(n_docs, vocab_size, mean_doc_len, seed, marker, marker_fraction, out):
    """Write a deterministic synthetic corpus as JSONL."""
    try:
        spec = CorpusSpec(
            n_docs=n_docs,
            vocab_size=vocab_size,
            mean_doc_len=mean_doc_len,
            seed=seed,
            marker=marker,
            marker_fraction=marker_fraction,
        )
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    with click.open_file(out, "w") as fh:
        count = write_corpus(spec, fh)
    click.echo(f"wrote {count} records ({spec.marker_count} contain the marker)", err=True)


@cli.command()
@corpus_argument
@click.option("--engine", type=_ENGINES, default="all", show_default=True)
def ingest(corpus, engine):
    """Parse, index and commit a corpus, reporting what was built."""
    records = load_corpus(corpus)
    engines = build_engines(records, engine)
    click.echo(f"ingested {len(records)} records into: {', '.join(engines)}")


@cli.command()
@corpus_argument
@click.argument("query_text")
@click.option("--field", type=_FIELDS, default="fulltext", show_default=True)
@click.option("--kind", type=_KINDS, default="word", show_default=True)
@engine_option
@click.option("--ids/--no-ids", default=True, show_default=True, help="Print matching ids to stdout.")
def search(corpus, query_text, field, kind, engine, ids):
    """Print the hit count (stderr) and matching record ids (stdout)."""
    records = load_corpus(corpus)
    engines = build_engines(records, engine)
    query = Query.from_text(field, kind, query_text)
    hitsets = {name: adapter.search(query) for name, adapter in engines.items()}
    first = next(iter(hitsets.values()))
    if any(hitset != first for hitset in hitsets.values()):
        raise BridgeError(f"engines disagree on the hitset: { {n: len(h) for n, h in hitsets.items()} }")
    click.echo(f"{len(first)} hits", err=True)
    if ids:
        for doc_id in first.to_ids():
            click.echo(doc_id)


@cli.command()
@corpus_argument
@click.argument("query_text")
@click.option("--field", type=_FIELDS, default="fulltext", show_default=True)
@click.option("--kind", type=_KINDS, default="word", show_default=True)
@engine_option
@click.option("--weight", "-w", "weight_pairs", multiple=True, metavar="FIELD=VALUE")
@click.option("--top-k", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--hitset-cap", type=click.IntRange(min=1), default=DEFAULT_HITSET_CAP, show_default=True)
def rank(corpus, query_text, field, kind, engine, weight_pairs, top_k, hitset_cap):
    """Search, then print the ranked ``id  percent`` table."""
    records = load_corpus(corpus)
    engines = build_engines(records, engine)
    query = Query.from_text(field, kind, query_text)
    weights = coerce_weights(parse_weights(weight_pairs, field))
    config = RankConfig(top_k=top_k, hitset_cap=hitset_cap)
    outputs = {
        name: search_then_rank(adapter, query, weights, config)
        for name, adapter in engines.items()
    }
    first_hits, first_ranked = next(iter(outputs.values()))
    for name, (hits, ranked) in outputs.items():
        if hits != first_hits or ranked != first_ranked:
            raise BridgeError(f"engines disagree on the ranked result ({name})")
    click.echo(f"{len(first_hits)} hits", err=True)
    for entry in first_ranked:
        click.echo(f"{entry.id}\t{entry.percent:.2f}")


@cli.command()
@corpus_argument
@click.argument("record_id", type=int)
@engine_option
@click.option("--top-k", type=click.IntRange(min=1), default=10, show_default=True)
def similar(corpus, record_id, engine, top_k):
    """Print records most similar to RECORD_ID as ``id  percent`` lines."""
    records = load_corpus(corpus)
    engines = build_engines(records, engine)
    results = {
        name: find_similar(adapter, record_id, MltParams(top_k=top_k))
        for name, adapter in engines.items()
    }
    first = next(iter(results.values()))
    for entry in first:
        click.echo(f"{entry.id}\t{entry.percent:.2f}")


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8080, show_default=True)
@click.option(
    "--corpus",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Preload this corpus (ingested and committed before serving).",
)
def serve(host, port, corpus):
    """Run the HTTP service (blocks until interrupted)."""
    import uvicorn

    from .service import ServiceConfig, create_app, default_registry

    registry = default_registry()
    if corpus is not None:
        records = load_corpus(corpus)
        for adapter in registry.adapters():
            adapter.index_records(records)
            adapter.commit()
        click.echo(f"preloaded {len(records)} records", err=True)
    app = create_app(registry, ServiceConfig(host=host, port=port))
    uvicorn.run(app, host=host, port=port)


@cli.command()
@corpus_argument
@click.option("--query", "query_text", default="higgs boson", show_default=True)
@click.option("--field", type=_FIELDS, default="fulltext", show_default=True)
@click.option("--kind", type=_KINDS, default="phrase", show_default=True)
@click.option("--weight", "-w", "weight_pairs", multiple=True, metavar="FIELD=VALUE")
@click.option("--reps", type=click.IntRange(min=3), default=3, show_default=True)
@click.option("--seed", type=int, default=None, help="Corpus seed, echoed into the report.")
@click.option("--csv", "csv_out", type=click.Path(dir_okay=False, allow_dash=True), default=None)
@click.option("--check-shape", is_flag=True, help="Warn (never fail) when the expected latency shape is absent.")
@click.option("--engine", type=_ENGINES, default="all", show_default=True)
def bench(corpus, query_text, field, kind, weight_pairs, reps, seed, csv_out, check_shape, engine):
    """Benchmark search and ranked-top-k latency on a corpus."""
    records = load_corpus(corpus)
    engines = build_engines(records, engine)
    query = Query.from_text(field, kind, query_text)
    weights = coerce_weights(parse_weights(weight_pairs, field))
    report = run_bench(
        engines,
        query,
        weights,
        doc_count=len(records),
        seed=seed,
        reps=reps,
        top_ks=TOP_KS,
        query_text=query_text,
    )
    click.echo(report.table())
    if csv_out is not None:
        with click.open_file(csv_out, "w") as fh:
            fh.write(report.csv())
    if check_shape:
        for warning in report.shape_warnings():
            click.echo(f"warning: {warning}", err=True)


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point with the documented exit-code contract."""
    try:
        cli.main(
            args=list(argv) if argv is not None else None,
            prog_name="searchbridge",
            standalone_mode=False,
        )
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:  # usage errors included
        exc.show()
        return 1
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except (CorpusError, FieldIndexError, BridgeError, IntBitsetError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
