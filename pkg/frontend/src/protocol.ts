// Wire protocol shared with the gateway: newline-delimited JSON messages.

export interface DroneSnapshot {
  id: number;
  x: number;
  y: number;
  z: number;
  vx: number;
  vy: number;
  vz: number;
  led: [number, number, number];
  led_on: boolean;
  status: "GROUNDED" | "AIRBORNE" | "LANDING";
}

export interface StateMessage {
  type: "state";
  session: string;
  t: number;
  mode: "GROUNDED" | "FLYING_IDLE" | "DRAWING" | "ERASING" | "PAINTING";
  drones: DroneSnapshot[];
  stroke: [number, number, number][];
  strokes?: [number, number, number][][];
  schedule_progress: number;
  schedule_len: number;
  zone?: { w: number; h: number };
}

export interface GestureMessage {
  type: "gesture";
  class: string;
  confidence: number;
}

export interface ReportMessage {
  type: "report";
  max_error: number;
  mean_error: number;
  rmse: number;
  duration: number;
  n_samples: number;
}

export interface PaintingMessage {
  type: "painting";
  w: number;
  h: number;
  data: string; // base64 binary PPM
}

export interface ErrorMessage {
  type: "error";
  reason: string;
}

export type ServerMessage =
  | StateMessage
  | GestureMessage
  | ReportMessage
  | PaintingMessage
  | ErrorMessage;

export type ClientMessage =
  | { type: "hello"; session?: string }
  | { type: "stroke_point"; x: number; y: number; t: number }
  | { type: "hand_frame"; landmarks: [number, number, number][]; t: number }
  | { type: "command"; name: string; x?: number; y?: number; radius?: number }
  | ({ type: "config" } & Record<string, unknown>);

export function encodeMessage(msg: ClientMessage): string {
  return JSON.stringify(msg) + "\n";
}

/** Split a transport chunk into parsed messages; bad lines become null. */
export function decodeLines(payload: string): (ServerMessage | null)[] {
  const out: (ServerMessage | null)[] = [];
  for (const line of payload.split("\n")) {
    const text = line.trim();
    if (!text) continue;
    try {
      out.push(JSON.parse(text) as ServerMessage);
    } catch {
      out.push(null);
    }
  }
  return out;
}

/** Stateful line framer for stream transports (TCP tests, chunked WS frames). */
export class LineDecoder {
  private buffer = "";

  push(chunk: string): (ServerMessage | null)[] {
    this.buffer += chunk;
    const lastBreak = this.buffer.lastIndexOf("\n");
    if (lastBreak < 0) return [];
    const complete = this.buffer.slice(0, lastBreak + 1);
    this.buffer = this.buffer.slice(lastBreak + 1);
    return decodeLines(complete);
  }
}
