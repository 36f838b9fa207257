import assert from "node:assert/strict";
import { test } from "node:test";

import { DEFAULT_ZONE, displayToServer, serverToDisplay, worldToDisplay } from "../src/coords.js";
import { decodeLines, encodeMessage, LineDecoder } from "../src/protocol.js";
import { decodeBase64, decodePpm } from "../src/ppm.js";
import {
  applyMessage,
  initialViewState,
  isStale,
  recordPendingPoint,
  renderedStroke,
} from "../src/state.js";
import type { StateMessage } from "../src/protocol.js";

function snapshot(partial: Partial<StateMessage> = {}): StateMessage {
  return {
    type: "state",
    session: "s",
    t: 1.0,
    mode: "FLYING_IDLE",
    drones: [],
    stroke: [],
    schedule_progress: 0,
    schedule_len: 0,
    zone: { w: 640, h: 480 },
    ...partial,
  };
}

test("coordinate round trip stays within one pixel at any display size", () => {
  const sizes = [
    { width: 640, height: 480 },
    { width: 960, height: 720 },
    { width: 333, height: 250 },
    { width: 1921, height: 1080 },
  ];
  for (const rect of sizes) {
    for (let k = 0; k < 200; k++) {
      const px = (k * 7919) % rect.width;
      const py = (k * 104729) % rect.height;
      const s = displayToServer(px, py, rect);
      const back = serverToDisplay(s.x, s.y, rect);
      assert.ok(Math.abs(back.x - px) < 1, `x off by ${back.x - px} at ${rect.width}`);
      assert.ok(Math.abs(back.y - py) < 1, `y off by ${back.y - py}`);
      assert.ok(s.x >= 0 && s.x <= DEFAULT_ZONE.w);
      assert.ok(s.y >= 0 && s.y <= DEFAULT_ZONE.h);
    }
  }
});

test("resized window maps to the same server point", () => {
  const a = displayToServer(100, 100, { width: 640, height: 480 });
  const b = displayToServer(200, 200, { width: 1280, height: 960 });
  assert.ok(Math.abs(a.x - b.x) < 1e-9 && Math.abs(a.y - b.y) < 1e-9);
});

test("world-plane markers land inside the display", () => {
  const rect = { width: 640, height: 480 };
  const center = worldToDisplay(0, 1.5, rect);
  assert.ok(Math.abs(center.x - 320) < 1e-9 && Math.abs(center.y - 240) < 1e-9);
  const corner = worldToDisplay(-1.5, 2.5, rect);
  assert.deepEqual([corner.x, corner.y], [0, 0]);
});

test("protocol encode/decode round trip with newline framing", () => {
  const text = encodeMessage({ type: "stroke_point", x: 1.5, y: 2.5, t: 0.1 });
  assert.ok(text.endsWith("\n"));
  const [msg] = decodeLines(text);
  assert.deepEqual(msg, { type: "stroke_point", x: 1.5, y: 2.5, t: 0.1 });
});

test("decoder reports malformed lines as null and keeps going", () => {
  const msgs = decodeLines('{"type":"error","reason":"x"}\n{oops\n{"type":"gesture","class":"ONE","confidence":1}\n');
  assert.equal(msgs.length, 3);
  assert.equal(msgs[0]?.type, "error");
  assert.equal(msgs[1], null);
  assert.equal(msgs[2]?.type, "gesture");
});

test("line decoder buffers partial chunks across pushes", () => {
  const dec = new LineDecoder();
  assert.deepEqual(dec.push('{"type":"err'), []);
  const msgs = dec.push('or","reason":"split"}\n');
  assert.equal(msgs.length, 1);
  assert.equal((msgs[0] as { reason: string }).reason, "split");
});

test("ppm decode produces RGBA pixels", () => {
  const header = new TextEncoder().encode("P6\n2 2\n255\n");
  const rgb = new Uint8Array([255, 0, 0, 0, 255, 0, 0, 0, 255, 9, 9, 9]);
  const bytes = new Uint8Array(header.length + rgb.length);
  bytes.set(header);
  bytes.set(rgb, header.length);
  const img = decodePpm(bytes);
  assert.equal(img.width, 2);
  assert.equal(img.height, 2);
  assert.deepEqual([...img.rgba.slice(0, 4)], [255, 0, 0, 255]);
  assert.deepEqual([...img.rgba.slice(12, 16)], [9, 9, 9, 255]);
});

test("base64 decode matches node Buffer", () => {
  const data = Buffer.from("P6 test payload").toString("base64");
  assert.deepEqual([...decodeBase64(data)], [...Buffer.from("P6 test payload")]);
});

test("pending stroke points reconcile against snapshots", () => {
  let state = initialViewState();
  state = recordPendingPoint(state, 10, 10, 0.1);
  state = recordPendingPoint(state, 20, 20, 0.2);
  assert.equal(renderedStroke(state).length, 2);
  // server confirms up to t=0.1
  state = applyMessage(state, snapshot({ stroke: [[10, 10, 0.1]] }), 1000);
  assert.equal(state.pending.length, 1);
  assert.equal(renderedStroke(state).length, 2); // 1 confirmed + 1 pending
  // server confirms everything
  state = applyMessage(state, snapshot({ stroke: [[10, 10, 0.1], [20, 20, 0.2]] }), 1033);
  assert.equal(state.pending.length, 0);
  assert.equal(renderedStroke(state).length, 2);
});

test("reloading rebuilds the identical scene from snapshots alone", () => {
  const snap = snapshot({ stroke: [[1, 2, 0.1], [3, 4, 0.2]], mode: "DRAWING" });
  const a = applyMessage(initialViewState(), snap, 50);
  const b = applyMessage(initialViewState(), snap, 900);
  assert.deepEqual(renderedStroke(a), renderedStroke(b));
  assert.deepEqual(a.snapshot, b.snapshot);
});

test("staleness indicator after one second without snapshots", () => {
  let state = applyMessage(initialViewState(), snapshot(), 1000);
  assert.equal(isStale(state, 1500), false);
  assert.equal(isStale(state, 2100), true);
});
