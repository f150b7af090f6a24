/**
 * Thin client for the searchbridge HTTP service.
 *
 * Hitset responses arrive as binary IBS1 payloads and are decoded locally;
 * everything else is JSON. Transport failures (refused, timeout) surface as
 * TransportError, non-2xx responses as ProtocolError with the service's
 * detail message, and 501 as CapabilityUnsupported.
 */

import { decodeIntbitset } from "./intbitset.js";
import { CapabilityUnsupported, ProtocolError, TransportError } from "./errors.js";

export type QueryKind = "word" | "phrase";
export type FieldName = "title" | "abstract" | "author" | "keyword" | "fulltext";

export interface ClientSession {
  baseUrl: string;
  timeoutMs: number;
  engine: string;
}

export interface SearchResult {
  count: number;
  ids: number[];
}

export interface RankedEntry {
  id: number;
  percent: number;
}

export interface RankResult {
  totalHits: number;
  results: RankedEntry[];
}

export interface RankOptions {
  topK?: number;
  hitsetCap?: number;
  /** Raw IBS1 payload ranked verbatim in place of the search phase. */
  hitset?: Uint8Array;
}

export function createSession(
  baseUrl: string,
  options: { timeoutMs?: number; engine?: string } = {},
): ClientSession {
  if (!baseUrl) {
    throw new Error("baseUrl must be non-empty");
  }
  const timeoutMs = options.timeoutMs ?? 30_000;
  if (timeoutMs <= 0) {
    throw new Error("timeoutMs must be positive");
  }
  return {
    baseUrl: baseUrl.replace(/\/+$/, ""),
    timeoutMs,
    engine: options.engine ?? "unified",
  };
}

async function request(session: ClientSession, path: string, init?: RequestInit): Promise<Response> {
  let response: Response;
  try {
    response = await fetch(`${session.baseUrl}${path}`, {
      ...init,
      signal: AbortSignal.timeout(session.timeoutMs),
    });
  } catch (err) {
    throw new TransportError(`request to ${path} failed: ${(err as Error).message}`, {
      cause: err,
    });
  }
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    if (response.status === 501) {
      throw new CapabilityUnsupported(detail);
    }
    throw new ProtocolError(response.status, detail);
  }
  return response;
}

/** Word or phrase search; the hit count comes from X-Hit-Count and is
 * verified against the decoded payload's cardinality. */
export async function search(
  session: ClientSession,
  field: FieldName,
  kind: QueryKind,
  q: string,
): Promise<SearchResult> {
  const params = new URLSearchParams({ field, kind, q });
  const response = await request(session, `/${session.engine}/search?${params}`);
  const ids = decodeIntbitset(new Uint8Array(await response.arrayBuffer()));
  const header = response.headers.get("X-Hit-Count");
  const count = header === null ? NaN : Number(header);
  if (!Number.isInteger(count) || count !== ids.length) {
    throw new ProtocolError(
      200,
      `X-Hit-Count ${header} disagrees with decoded cardinality ${ids.length}`,
    );
  }
  return { count, ids };
}

export async function rank(
  session: ClientSession,
  query: { field: FieldName; kind: QueryKind; q: string },
  weights: Partial<Record<FieldName, number>>,
  options: RankOptions = {},
): Promise<RankResult> {
  const body: Record<string, unknown> = { query, weights };
  if (options.topK !== undefined) body.top_k = options.topK;
  if (options.hitsetCap !== undefined) body.hitset_cap = options.hitsetCap;
  if (options.hitset !== undefined) {
    body.hitset = Buffer.from(options.hitset).toString("base64");
  }
  const response = await request(session, `/${session.engine}/rank`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
  const json = (await response.json()) as {
    total_hits: number;
    results: RankedEntry[];
  };
  return { totalHits: json.total_hits, results: json.results };
}

export async function similar(
  session: ClientSession,
  recordId: number,
  topK?: number,
): Promise<RankedEntry[]> {
  const suffix = topK === undefined ? "" : `?top_k=${topK}`;
  const response = await request(session, `/${session.engine}/similar/${recordId}${suffix}`);
  const json = (await response.json()) as { results: RankedEntry[] };
  return json.results;
}

export async function engines(session: ClientSession): Promise<string[]> {
  const response = await request(session, "/engines");
  const json = (await response.json()) as { engines: string[] };
  return json.engines;
}
