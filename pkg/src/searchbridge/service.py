"""HTTP facade over the engine registry.

The service adds transport, never semantics: every response body is exactly
what the corresponding module call returns, with hitsets travelling as
binary IBS1 payloads instead of JSON id arrays. Ingestion fans out to every
registered engine so all of them see the identical corpus.

Lifecycle: ingest with ``PUT /records`` (JSONL body) any number of times,
freeze with ``POST /commit``, then read. Reads before the commit get 409,
as do writes after it.
"""

from __future__ import annotations

import binascii
import base64
from dataclasses import dataclass
from typing import Mapping, Optional

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict

from .bridge import (
    AdapterRegistry,
    BridgeError,
    CapabilityUnsupported,
    DEFAULT_HITSET_CAP,
    Query,
    RankConfig,
    RankedEntry,
    UnknownAdapter,
    UnknownRecord,
    find_similar,
    search_then_rank,
)
from .corpus import CorpusError, parse_jsonl
from .engine_perfield import PerFieldEngine
from .engine_unified import MltParams, UnifiedEngine
from .index_core import DuplicateDocument, FieldIndexError, IndexCommitted, IndexNotCommitted
from .intbitset import DeserializeError, IntBitset

__all__ = ["ServiceConfig", "create_app", "default_registry"]

BITSET_MEDIA_TYPE = "application/x-intbitset"


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    default_top_k: int = 10
    default_hitset_cap: int = DEFAULT_HITSET_CAP
    max_body_bytes: int = 64 * 1024 * 1024

    def __post_init__(self):
        if self.default_top_k < 1 or self.default_hitset_cap < 1:
            raise ValueError("default_top_k and default_hitset_cap must be positive")
        if self.max_body_bytes < 1:
            raise ValueError("max_body_bytes must be positive")


def default_registry() -> AdapterRegistry:
    """Both reference engines under their canonical names."""
    return AdapterRegistry().register("unified", UnifiedEngine()).register("perfield", PerFieldEngine())


class QueryModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    field: str
    kind: str
    q: str


class RankRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    query: QueryModel
    hitset: Optional[str] = None
    weights: Mapping[str, float]
    top_k: Optional[int] = None
    hitset_cap: Optional[int] = None


def _entries_json(entries: list[RankedEntry]) -> list[dict]:
    # Percents travel with two decimals; scores are comparative, not precise.
    return [{"id": e.id, "percent": round(e.percent, 2)} for e in entries]


def create_app(registry: AdapterRegistry | None = None, config: ServiceConfig | None = None) -> FastAPI:
    """Build the application around a frozen adapter registry."""
    registry = (registry or default_registry()).freeze()
    config = config or ServiceConfig()
    app = FastAPI(title="searchbridge", docs_url=None, redoc_url=None)

    def resolve_committed(engine: str):
        adapter = registry.resolve(engine)
        if not adapter.committed:
            raise IndexNotCommitted(f"engine {engine!r} is not committed yet")
        return adapter

    # -- error mapping ---------------------------------------------------

    def plain(status: int):
        def handler(request: Request, exc: Exception) -> JSONResponse:
            return JSONResponse(status_code=status, content={"detail": str(exc)})

        return handler

    for exc_type in (CorpusError, FieldIndexError, BridgeError, DeserializeError, ValueError):
        app.add_exception_handler(exc_type, plain(400))
    for exc_type in (UnknownAdapter, UnknownRecord):
        app.add_exception_handler(exc_type, plain(404))
    for exc_type in (IndexCommitted, IndexNotCommitted):
        app.add_exception_handler(exc_type, plain(409))
    app.add_exception_handler(CapabilityUnsupported, plain(501))

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.middleware("http")
    async def limit_body(request: Request, call_next):
        declared = request.headers.get("content-length")
        if declared and declared.isdigit() and int(declared) > config.max_body_bytes:
            return JSONResponse(status_code=413, content={"detail": "request body too large"})
        return await call_next(request)

    # -- ingestion -------------------------------------------------------

    seen_ids: set[int] = set()

    @app.put("/records")
    async def put_records(request: Request):
        body = await request.body()
        if len(body) > config.max_body_bytes:
            # Chunked uploads carry no Content-Length, so the middleware
            # cannot reject them up front.
            return JSONResponse(status_code=413, content={"detail": "request body too large"})
        for adapter in registry.adapters():
            if adapter.committed:
                raise IndexCommitted("corpus is committed; ingestion is closed")
        try:
            text = body.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorpusError(f"body is not valid UTF-8: {exc}") from None
        records = parse_jsonl(text.splitlines())
        # Validate cross-batch id uniqueness before touching any engine, so
        # a rejected batch never leaves the engines out of sync.
        clash = sorted(i for i in (r.id for r in records) if i in seen_ids)
        if clash:
            raise DuplicateDocument(f"ids already ingested: {clash[:10]}")
        # Fan out so every engine indexes the identical corpus.
        for adapter in registry.adapters():
            adapter.index_records(records)
        seen_ids.update(r.id for r in records)
        return {"ingested": len(records)}

    @app.post("/commit")
    def post_commit() -> dict:
        if all(adapter.committed for adapter in registry.adapters()):
            raise IndexCommitted("corpus is already committed")
        for adapter in registry.adapters():
            adapter.commit()
        return {"committed": True}

    # -- reads -----------------------------------------------------------

    @app.get("/engines")
    def get_engines() -> dict:
        return {"engines": registry.names()}

    @app.get("/{engine}/search")
    def get_search(engine: str, field: str, kind: str, q: str) -> Response:
        adapter = resolve_committed(engine)
        hitset = adapter.search(Query.from_text(field, kind, q))
        return Response(
            content=hitset.serialize(),
            media_type=BITSET_MEDIA_TYPE,
            headers={"X-Hit-Count": str(len(hitset))},
        )

    @app.post("/{engine}/rank")
    def post_rank(engine: str, body: RankRequest) -> dict:
        adapter = resolve_committed(engine)
        query = Query.from_text(body.query.field, body.query.kind, body.query.q)
        cfg = RankConfig(
            top_k=body.top_k if body.top_k is not None else config.default_top_k,
            hitset_cap=body.hitset_cap if body.hitset_cap is not None else config.default_hitset_cap,
        )
        if body.hitset is None:
            hitset, ranked = search_then_rank(adapter, query, body.weights, cfg)
        else:
            try:
                payload = base64.b64decode(body.hitset, validate=True)
            except binascii.Error as exc:
                raise DeserializeError(f"invalid base64 hitset: {exc}") from None
            provided = IntBitset.deserialize(payload)
            hitset, ranked = search_then_rank(
                _FixedHitset(adapter, provided), query, body.weights, cfg
            )
        return {"total_hits": len(hitset), "results": _entries_json(ranked)}

    @app.get("/{engine}/similar/{record_id}")
    def get_similar(engine: str, record_id: int, top_k: int | None = None) -> dict:
        adapter = resolve_committed(engine)
        params = MltParams(top_k=top_k if top_k is not None else config.default_top_k)
        return {"results": _entries_json(find_similar(adapter, record_id, params))}

    return app


class _FixedHitset:
    """Adapter view whose search step returns a caller-provided hitset.

    Lets a verbatim client hitset flow through the standard pipeline (cap,
    rank, normalize) without a parallel code path.
    """

    def __init__(self, adapter, hitset: IntBitset):
        self._adapter = adapter
        self._hitset = hitset

    def search(self, query: Query) -> IntBitset:
        return self._hitset

    def __getattr__(self, name):
        return getattr(self._adapter, name)
