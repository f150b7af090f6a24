/** Errors raised by the HTTP client, kept distinct from decode errors. */

/** The request never produced an HTTP response: DNS, refused, timeout. */
export class TransportError extends Error {
  constructor(message: string, options?: { cause?: unknown }) {
    super(message, options);
    this.name = "TransportError";
  }
}

/** The service answered, but not with what the protocol promises. */
export class ProtocolError extends Error {
  readonly status: number;

  constructor(status: number, message: string) {
    super(message);
    this.name = new.target.name;
    this.status = status;
  }
}

/** 501: the engine does not implement the requested operation. */
export class CapabilityUnsupported extends ProtocolError {
  constructor(message: string) {
    super(501, message);
  }
}
