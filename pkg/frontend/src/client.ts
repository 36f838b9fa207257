// WebSocket gateway client used by the browser app.

import { encodeMessage, LineDecoder } from "./protocol.js";
import type { ClientMessage, ServerMessage } from "./protocol.js";

export interface GatewayClientOptions {
  url: string;
  onMessage: (msg: ServerMessage) => void;
  onOpen?: () => void;
  onClose?: () => void;
}

export class GatewayClient {
  private ws: WebSocket | null = null;
  private decoder = new LineDecoder();
  private readonly opts: GatewayClientOptions;
  private clock = 0;

  constructor(opts: GatewayClientOptions) {
    this.opts = opts;
  }

  connect(): void {
    this.ws = new WebSocket(this.opts.url);
    this.ws.onopen = () => this.opts.onOpen?.();
    this.ws.onclose = () => this.opts.onClose?.();
    this.ws.onmessage = (ev) => {
      const payload = typeof ev.data === "string" ? ev.data : "";
      for (const msg of this.decoder.push(payload.endsWith("\n") ? payload : payload + "\n")) {
        if (msg !== null) this.opts.onMessage(msg);
      }
    };
  }

  get connected(): boolean {
    return this.ws !== null && this.ws.readyState === WebSocket.OPEN;
  }

  send(msg: ClientMessage): boolean {
    if (!this.connected || !this.ws) return false;
    this.ws.send(encodeMessage(msg));
    return true;
  }

  /** Monotone timestamp in seconds for stroke points. */
  nextTimestamp(): number {
    const t = performance.now() / 1000;
    this.clock = t > this.clock ? t : this.clock + 1e-6;
    return this.clock;
  }

  close(): void {
    this.ws?.close();
    this.ws = null;
  }
}
