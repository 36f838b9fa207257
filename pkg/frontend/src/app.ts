// Browser entry point: draws the flight zone, relays pointer input to the
// gateway, and mirrors every broadcast snapshot onto the canvas.

import { GatewayClient } from "./client.js";
import { DEFAULT_ZONE, displayToServer, serverToDisplay, worldToDisplay } from "./coords.js";
import { decodeBase64, decodePpm } from "./ppm.js";
import type { ServerMessage, StateMessage } from "./protocol.js";
import {
  applyMessage,
  initialViewState,
  isStale,
  recordPendingPoint,
  renderedStroke,
  type Tool,
  type ViewState,
} from "./state.js";

const COMMANDS = ["TAKE_OFF", "LAND", "BEGIN_PAINT", "CLEAR"] as const;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text) node.textContent = text;
  return node;
}

export function startApp(root: HTMLElement): void {
  const params = new URLSearchParams(location.search);
  const port = params.get("port") ?? "8765";
  const session = params.get("session") ?? `ui-${Math.random().toString(36).slice(2, 8)}`;
  const url = `ws://${location.hostname}:${port}/session?session=${session}`;

  let state: ViewState = initialViewState();
  const client = new GatewayClient({
    url,
    onMessage: (msg: ServerMessage) => {
      state = applyMessage(state, msg, Date.now());
      if (msg.type === "error") console.warn("gateway:", msg.reason);
    },
    onOpen: () => {
      state = { ...state, connected: true };
      client.send({ type: "hello", session });
    },
    onClose: () => {
      state = { ...state, connected: false };
    },
  });

  const banner = el("div", { class: "banner" });
  const canvas = el("canvas", { width: "640", height: "480", class: "zone" });
  const buttons = el("div", { class: "buttons" });
  const status = el("div", { class: "status" });
  const paintingView = el("canvas", { width: "640", height: "480", class: "painting" });

  for (const name of COMMANDS) {
    const b = el("button", {}, name.replace("_", " "));
    b.addEventListener("click", () => client.send({ type: "command", name }));
    buttons.appendChild(b);
  }
  const toolButton = el("button", {}, "tool: draw");
  toolButton.addEventListener("click", () => {
    const tool: Tool = state.tool === "draw" ? "erase" : "draw";
    state = { ...state, tool };
    toolButton.textContent = `tool: ${tool}`;
  });
  buttons.appendChild(toolButton);
  const snapButton = el("button", {}, "PAINTING");
  snapButton.addEventListener("click", () => client.send({ type: "command", name: "SNAPSHOT" }));
  buttons.appendChild(snapButton);

  root.append(banner, canvas, buttons, status, paintingView);

  const zoneOf = (snap: StateMessage | null) => snap?.zone ?? DEFAULT_ZONE;

  let drawing = false;
  const pointerPoint = (ev: PointerEvent) => {
    const rect = canvas.getBoundingClientRect();
    return displayToServer(ev.clientX - rect.left, ev.clientY - rect.top,
      { width: rect.width, height: rect.height }, zoneOf(state.snapshot));
  };
  canvas.addEventListener("pointerdown", (ev) => {
    drawing = true;
    canvas.setPointerCapture(ev.pointerId);
    emit(ev);
  });
  canvas.addEventListener("pointermove", (ev) => {
    if (drawing) emit(ev);
  });
  canvas.addEventListener("pointerup", () => {
    drawing = false;
  });

  function emit(ev: PointerEvent): void {
    if (!client.connected) return;
    const { x, y } = pointerPoint(ev);
    if (state.tool === "erase") {
      client.send({ type: "command", name: "ERASE_AT", x, y, radius: 30 });
      return;
    }
    const t = client.nextTimestamp();
    if (client.send({ type: "stroke_point", x, y, t })) {
      state = recordPendingPoint(state, x, y, t);
    }
  }

  function render(): void {
    const ctx = canvas.getContext("2d")!;
    const rect = { width: canvas.width, height: canvas.height };
    ctx.fillStyle = "#101018";
    ctx.fillRect(0, 0, rect.width, rect.height);
    ctx.strokeStyle = "#3a3a55";
    ctx.strokeRect(0.5, 0.5, rect.width - 1, rect.height - 1);
    const snap = state.snapshot;
    const zone = zoneOf(snap);

    // drawn trajectory in red, matching the live-session color convention
    ctx.strokeStyle = "#e04040";
    ctx.lineWidth = 2;
    const stroke = renderedStroke(state);
    ctx.beginPath();
    stroke.forEach(([sx, sy], i) => {
      const p = serverToDisplay(sx, sy, rect, zone);
      if (i === 0) ctx.moveTo(p.x, p.y);
      else ctx.lineTo(p.x, p.y);
    });
    ctx.stroke();

    if (snap) {
      // schedule target trajectory shown in green while painting
      if (snap.schedule_len > 0) {
        ctx.fillStyle = "#30c040";
        ctx.fillRect(8, rect.height - 16,
          (rect.width - 16) * (snap.schedule_progress / snap.schedule_len), 6);
      }
      for (const drone of snap.drones) {
        const p = worldToDisplay(drone.x, drone.z, rect);
        const [r, g, b] = drone.led;
        ctx.fillStyle = drone.led_on
          ? `rgb(${255 * r},${255 * g},${255 * b})`
          : "#8888aa";
        ctx.beginPath();
        ctx.arc(p.x, p.y, 7, 0, 2 * Math.PI);
        ctx.fill();
        ctx.fillStyle = "#ccc";
        ctx.fillText(String(drone.id), p.x + 9, p.y + 3);
      }
    }

    const stale = isStale(state, Date.now());
    banner.textContent = !state.connected
      ? "disconnected - input disabled"
      : stale
        ? "degraded - no recent snapshots"
        : `session ${session}`;
    banner.className = `banner ${!state.connected || stale ? "bad" : "ok"}`;
    status.textContent = snap
      ? `mode ${snap.mode} | t=${snap.t.toFixed(2)}s | drones ${snap.drones.length}` +
        (state.lastGesture
          ? ` | gesture ${state.lastGesture.class} (${state.lastGesture.confidence.toFixed(2)})`
          : "") +
        (state.lastReport
          ? ` | mean err ${state.lastReport.mean_error.toFixed(2)} cm`
          : "")
      : "waiting for snapshots";

    if (state.painting) {
      const img = decodePpm(decodeBase64(state.painting.data));
      paintingView.width = img.width;
      paintingView.height = img.height;
      paintingView
        .getContext("2d")!
        .putImageData(new ImageData(img.rgba, img.width, img.height), 0, 0);
      state = { ...state, painting: null };
    }
    requestAnimationFrame(render);
  }

  client.connect();
  requestAnimationFrame(render);
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  startApp(document.getElementById("app")!);
}
