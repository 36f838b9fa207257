// Client-side view state: the latest server snapshot plus locally-pending
// stroke points that have been sent but not yet confirmed by a broadcast.

import type { ServerMessage, StateMessage, ReportMessage } from "./protocol.js";

export type Tool = "draw" | "erase";

export interface ViewState {
  connected: boolean;
  snapshot: StateMessage | null;
  lastSnapshotAt: number; // ms epoch of last state message
  pending: [number, number, number][]; // sent stroke points awaiting confirmation
  tool: Tool;
  lastGesture: { class: string; confidence: number } | null;
  lastReport: ReportMessage | null;
  lastError: string | null;
  painting: { w: number; h: number; data: string } | null;
}

export function initialViewState(): ViewState {
  return {
    connected: false,
    snapshot: null,
    lastSnapshotAt: 0,
    pending: [],
    tool: "draw",
    lastGesture: null,
    lastReport: null,
    lastError: null,
    painting: null,
  };
}

export function applyMessage(state: ViewState, msg: ServerMessage, nowMs: number): ViewState {
  switch (msg.type) {
    case "state": {
      // server has processed everything up to the newest confirmed timestamp
      const confirmed = msg.stroke.length
        ? msg.stroke[msg.stroke.length - 1][2]
        : -Infinity;
      const pending = state.pending.filter(([, , t]) => t > confirmed);
      return { ...state, snapshot: msg, lastSnapshotAt: nowMs, pending };
    }
    case "gesture":
      return { ...state, lastGesture: { class: msg.class, confidence: msg.confidence } };
    case "report":
      return { ...state, lastReport: msg };
    case "painting":
      return { ...state, painting: { w: msg.w, h: msg.h, data: msg.data } };
    case "error":
      return { ...state, lastError: msg.reason };
  }
}

export function recordPendingPoint(state: ViewState, x: number, y: number, t: number): ViewState {
  return { ...state, pending: [...state.pending, [x, y, t]] };
}

/** Stroke to draw right now: confirmed points plus whatever is still in flight. */
export function renderedStroke(state: ViewState): [number, number, number][] {
  const confirmed = state.snapshot?.stroke ?? [];
  return [...confirmed, ...state.pending];
}

/** True when no snapshot has arrived for more than a second. */
export function isStale(state: ViewState, nowMs: number, limitMs = 1000): boolean {
  return state.snapshot !== null && nowMs - state.lastSnapshotAt > limitMs;
}
