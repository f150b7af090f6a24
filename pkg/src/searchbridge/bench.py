"""Query-latency benchmark producing a fixed-shape two-engine report.

For one query, each engine contributes six rows: the search result count,
the bare search time, and the time of the full search-then-rank pipeline at
top 10 / 100 / 1,000 / 10,000. Rank rows deliberately go through
:func:`searchbridge.bridge.search_then_rank`, the same path the HTTP
service uses; a benchmark of a special-cased fast path would measure
nothing real.

Every timing is the median of ``reps`` repetitions after one warm-up call,
which keeps desk-machine noise out of single numbers. The benchmark only
reads committed engines and never mutates them.

Absolute numbers are hardware- and corpus-bound; comparisons between the
two engine architectures on the same machine are the meaningful output.
The optional shape check warns (never fails) when the usual pattern (the
unified engine leading at small top-k, the per-field engine flatter across
top-k) does not show.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from time import perf_counter
from typing import Callable, Mapping, Sequence

from .bridge import Query, RankConfig, SearchRankAdapter, search_then_rank
from .corpus import FieldName

__all__ = ["TOP_KS", "EngineBench", "BenchReport", "run_bench"]

TOP_KS = (10, 100, 1_000, 10_000)


def _fmt_k(k: int) -> str:
    return f"{k // 1000}K" if k % 1000 == 0 and k >= 1000 else str(k)


def _median_seconds(fn: Callable[[], object], reps: int) -> float:
    fn()  # warm-up, untimed
    times = []
    for _ in range(reps):
        start = perf_counter()
        fn()
        times.append(perf_counter() - start)
    return statistics.median(times)


@dataclass(frozen=True)
class EngineBench:
    """One engine's six benchmark values."""

    engine: str
    result_count: int
    search_seconds: float
    rank_seconds: tuple[tuple[int, float], ...]  # (top_k, median seconds)

    def metrics(self) -> list[tuple[str, str, str]]:
        """(csv metric name, table label, formatted value) per row."""
        rows = [
            ("search_result_count", "Search result count", str(self.result_count)),
            ("search", "Search [sec]", f"{self.search_seconds:.6f}"),
        ]
        for top_k, seconds in self.rank_seconds:
            rows.append(
                (f"ranked_top_{top_k}", f"Ranked top {_fmt_k(top_k)} [sec]", f"{seconds:.6f}")
            )
        return rows


@dataclass(frozen=True)
class BenchReport:
    """The full report: corpus descriptor plus per-engine rows.

    ``table()`` and ``csv()`` render the identical numbers; the CSV keeps
    the fixed three columns ``engine,metric,seconds``, with the result-count
    row carrying the count (not a time) in the third column.
    """

    query: Query
    query_text: str
    doc_count: int
    seed: int | None
    reps: int
    engines: tuple[EngineBench, ...]

    def header(self) -> str:
        seed = f", seed {self.seed}" if self.seed is not None else ""
        return (
            f"Corpus: {self.doc_count} docs{seed} | "
            f'query: {self.query.kind} "{self.query_text}" in {self.query.field} | '
            f"median of {self.reps} reps"
        )

    def table(self) -> str:
        labels = [label for _, label, _ in self.engines[0].metrics()]
        widths = [max(len(label) for label in labels)]
        columns = []
        for bench in self.engines:
            values = [value for _, _, value in bench.metrics()]
            columns.append(values)
            widths.append(max(len(bench.engine), max(len(v) for v in values)))
        lines = [self.header()]
        head = "Metric".ljust(widths[0])
        for bench, width in zip(self.engines, widths[1:]):
            head += "  " + bench.engine.rjust(width)
        lines.append(head)
        lines.append("-" * len(head))
        for row, label in enumerate(labels):
            line = label.ljust(widths[0])
            for values, width in zip(columns, widths[1:]):
                line += "  " + values[row].rjust(width)
            lines.append(line)
        return "\n".join(lines)

    def csv(self) -> str:
        lines = ["engine,metric,seconds"]
        for bench in self.engines:
            for metric, _, value in bench.metrics():
                lines.append(f"{bench.engine},{metric},{value}")
        return "\n".join(lines) + "\n"

    def shape_warnings(self) -> list[str]:
        """Non-fatal observations about the expected latency pattern."""
        warnings = []
        counts = {b.result_count for b in self.engines}
        if len(counts) > 1:
            warnings.append(f"engines disagree on the search result count: {sorted(counts)}")
        by_name = {b.engine: b for b in self.engines}
        unified = by_name.get("unified")
        perfield = by_name.get("perfield")
        if unified is None or perfield is None or not unified.rank_seconds:
            return warnings
        small_k, unified_small = unified.rank_seconds[0]
        if unified_small >= dict(perfield.rank_seconds)[small_k]:
            warnings.append(
                f"expected the unified engine to lead at top {small_k}; it did not"
            )

        def spread(bench: EngineBench) -> float:
            times = [seconds for _, seconds in bench.rank_seconds]
            return max(times) / min(times) if min(times) > 0 else float("inf")

        if spread(perfield) > spread(unified):
            warnings.append(
                "expected the per-field engine to be flatter across top-k; it was not"
            )
        return warnings


def run_bench(
    adapters: Mapping[str, SearchRankAdapter],
    query: Query,
    weights: Mapping[FieldName, float],
    *,
    doc_count: int,
    seed: int | None = None,
    reps: int = 3,
    top_ks: Sequence[int] = TOP_KS,
    query_text: str | None = None,
) -> BenchReport:
    """Benchmark every adapter on one query; adapters must be committed."""
    if reps < 3:
        raise ValueError("reps must be >= 3 for a meaningful median")
    results = []
    for name, adapter in adapters.items():
        hitset = adapter.search(query)
        search_seconds = _median_seconds(lambda: adapter.search(query), reps)
        ranked = []
        for top_k in top_ks:
            config = RankConfig(top_k=top_k)
            seconds = _median_seconds(
                lambda: search_then_rank(adapter, query, weights, config), reps
            )
            ranked.append((top_k, seconds))
        results.append(
            EngineBench(
                engine=name,
                result_count=len(hitset),
                search_seconds=search_seconds,
                rank_seconds=tuple(ranked),
            )
        )
    return BenchReport(
        query=query,
        query_text=query_text if query_text is not None else " ".join(query.terms),
        doc_count=doc_count,
        seed=seed,
        reps=reps,
        engines=tuple(results),
    )
