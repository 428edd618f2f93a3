import type { ProgressEvent } from "./types.js";

export interface StreamHandlers {
  onProgress: (ev: ProgressEvent) => void;
  onEnd?: (status: string) => void;
  onError?: (message: string) => void;
}

/**
 * SSE consumer with idempotent reconnection: the last seen sequence number
 * is replayed via the Last-Event-ID request header (EventSource does this
 * natively), and duplicate sequence numbers are dropped so reconnects never
 * double-append chart points.
 */
export class ProgressStream {
  private source: EventSource | null = null;
  private lastSeq = -1;
  closed = false;

  constructor(
    private readonly url: string,
    private readonly handlers: StreamHandlers,
    private readonly factory: (url: string) => EventSource = (u) => new EventSource(u),
  ) {}

  open(): void {
    this.source = this.factory(this.url);
    this.source.addEventListener("progress", (raw) => {
      const ev = JSON.parse((raw as MessageEvent).data) as ProgressEvent;
      if (ev.seq <= this.lastSeq) return; // replayed after reconnect
      this.lastSeq = ev.seq;
      this.handlers.onProgress(ev);
    });
    this.source.addEventListener("end", (raw) => {
      const body = JSON.parse((raw as MessageEvent).data) as { status: string };
      this.close();
      this.handlers.onEnd?.(body.status);
    });
    this.source.onerror = () => {
      if (this.closed) return;
      // EventSource reconnects on its own (readyState CONNECTING=0); only a
      // CLOSED (2) state is terminal and surfaced.
      if (this.source && this.source.readyState === 2) {
        this.handlers.onError?.("event stream closed unexpectedly");
      }
    };
  }

  close(): void {
    this.closed = true;
    this.source?.close();
  }
}
