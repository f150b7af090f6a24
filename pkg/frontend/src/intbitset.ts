/**
 * Decoder for the IBS1 hitset wire format.
 *
 * Layout: 4-byte magic "IBS1", u8 version (1), u8 flags (bit 0 = payload is
 * raw DEFLATE), 2 reserved zero bytes, u64 LE word count, then that many
 * 64-bit little-endian words (possibly deflated). Bit i set means id i is
 * in the set.
 *
 * Mirrors the server-side decoder including its error taxonomy and its
 * allocation guard: the word count is validated against the id limit
 * before the payload is touched.
 */

import { inflateRawSync } from "node:zlib";

export const MAGIC = "IBS1";
export const VERSION = 1;
export const FLAG_DEFLATE = 1;
export const HEADER_SIZE = 16;
export const DEFAULT_MAX_ID_LIMIT = 1 << 27;

export class DeserializeError extends Error {
  constructor(message: string) {
    super(message);
    this.name = new.target.name;
  }
}
export class BadMagic extends DeserializeError {}
export class UnsupportedVersion extends DeserializeError {}
export class ReservedBitsSet extends DeserializeError {}
export class TruncatedPayload extends DeserializeError {}
export class PayloadSizeMismatch extends DeserializeError {}
export class LimitExceeded extends DeserializeError {}

function pushWordIds(ids: number[], lo: number, hi: number, base: number): void {
  for (let bit = 0; lo !== 0; bit++, lo >>>= 1) {
    if (lo & 1) ids.push(base + bit);
  }
  for (let bit = 32; hi !== 0; bit++, hi >>>= 1) {
    if (hi & 1) ids.push(base + bit);
  }
}

/** Decode an IBS1 payload into its ascending list of ids. */
export function decodeIntbitset(
  data: Uint8Array,
  maxIdLimit: number = DEFAULT_MAX_ID_LIMIT,
): number[] {
  if (data.length < HEADER_SIZE) {
    throw new TruncatedPayload(`need ${HEADER_SIZE} header bytes, got ${data.length}`);
  }
  const view = new DataView(data.buffer, data.byteOffset, data.byteLength);
  const magic = String.fromCharCode(data[0]!, data[1]!, data[2]!, data[3]!);
  if (magic !== MAGIC) {
    throw new BadMagic(`bad magic ${JSON.stringify(magic)}`);
  }
  const version = view.getUint8(4);
  if (version !== VERSION) {
    throw new UnsupportedVersion(`version ${version}`);
  }
  const flags = view.getUint8(5);
  if (flags & ~FLAG_DEFLATE) {
    throw new ReservedBitsSet(`reserved flag bits set: 0x${flags.toString(16)}`);
  }
  const reserved = view.getUint16(6, true);
  if (reserved !== 0) {
    throw new ReservedBitsSet(`reserved header bytes set: 0x${reserved.toString(16)}`);
  }
  const wordCount = view.getBigUint64(8, true);
  // Allocation guard: reject before touching the payload.
  if (wordCount > BigInt(Math.floor(maxIdLimit / 64) + 1)) {
    throw new LimitExceeded(`word count ${wordCount} implies ids beyond ${maxIdLimit}`);
  }
  const expected = Number(wordCount) * 8;
  let payload = data.subarray(HEADER_SIZE);

  if (flags & FLAG_DEFLATE) {
    // info:true exposes the engine, whose bytesWritten is the consumed
    // input length; anything left over is trailing garbage.
    let raw: Buffer;
    let consumed: number;
    try {
      const result = inflateRawSync(payload, {
        maxOutputLength: expected + 1,
        info: true,
      } as object) as unknown as { buffer: Buffer; engine: { bytesWritten: number } };
      raw = result.buffer;
      consumed = result.engine.bytesWritten;
    } catch (err) {
      const code = (err as NodeJS.ErrnoException).code;
      if (code === "ERR_BUFFER_TOO_LARGE") {
        throw new PayloadSizeMismatch(`decompressed beyond ${expected} bytes`);
      }
      throw new TruncatedPayload(`corrupt deflate payload: ${(err as Error).message}`);
    }
    if (raw.length > expected) {
      throw new PayloadSizeMismatch(`decompressed beyond ${expected} bytes`);
    }
    if (consumed !== payload.length) {
      throw new PayloadSizeMismatch(
        `${payload.length - consumed} trailing bytes after deflate stream`,
      );
    }
    if (raw.length < expected) {
      throw new PayloadSizeMismatch(`decompressed ${raw.length} bytes, header promised ${expected}`);
    }
    payload = raw;
  } else {
    if (payload.length < expected) {
      throw new TruncatedPayload(`payload has ${payload.length} bytes, header promised ${expected}`);
    }
    if (payload.length > expected) {
      throw new PayloadSizeMismatch(`${payload.length - expected} trailing payload bytes`);
    }
  }

  const ids: number[] = [];
  const words = new DataView(payload.buffer, payload.byteOffset, payload.byteLength);
  for (let w = 0; w < expected / 8; w++) {
    const lo = words.getUint32(w * 8, true);
    const hi = words.getUint32(w * 8 + 4, true);
    if (lo !== 0 || hi !== 0) pushWordIds(ids, lo, hi, w * 64);
  }
  const last = ids[ids.length - 1];
  if (last !== undefined && last > maxIdLimit) {
    throw new LimitExceeded(`id ${last} exceeds max id limit ${maxIdLimit}`);
  }
  return ids;
}
