export {
  decodeIntbitset,
  DeserializeError,
  BadMagic,
  UnsupportedVersion,
  ReservedBitsSet,
  TruncatedPayload,
  PayloadSizeMismatch,
  LimitExceeded,
  HEADER_SIZE,
  DEFAULT_MAX_ID_LIMIT,
} from "./intbitset.js";
export { TransportError, ProtocolError, CapabilityUnsupported } from "./errors.js";
export {
  createSession,
  search,
  rank,
  similar,
  engines,
} from "./client.js";
export type {
  ClientSession,
  FieldName,
  QueryKind,
  SearchResult,
  RankResult,
  RankedEntry,
  RankOptions,
} from "./client.js";
