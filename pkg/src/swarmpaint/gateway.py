"""Live session gateway: recognition -> command FSM -> pipeline -> sim.

The session core is synchronous and single-writer: every client message
mutates exactly one session, messages are processed strictly in arrival
order, and a broadcast tick advances the simulation and fans immutable
snapshots out to every subscriber.  Transports are a websocket endpoint
(`/session`, resuming by id via query parameter) and an optional
NDJSON-over-TCP listener for headless harnesses; both speak the same
newline-delimited JSON messages.
"""

from __future__ import annotations

import asyncio
import base64
import json
import time
import urllib.parse
from dataclasses import dataclass, field

import numpy as np

from .canvas import ExposureCanvas, render_ppm
from .commands import (
    AIRBORNE_MODES,
    Command,
    CommandState,
    GestureMapping,
    Mode,
    apply_command,
    default_mapping,
    step_fsm,
)
from .errors import ConfigError, SwarmPaintError
from .gestures import HandFrame, classify, extract_features, hand_position
from .gestures.hands import N_LANDMARKS
from .metrics import GroundTruthShape, trace_errors
from .sim import AIRBORNE, GROUNDED, SimConfig, World, dispatch_waypoints, step
from .field import FieldParams
from .trajectory import (
    FilterParams,
    FlightZoneConfig,
    RawStroke,
    process,
    screen_to_world,
)

BROADCAST_HZ = 30.0
PAINT_SETTLE = 1.0  # seconds to hold after the last waypoint before finishing


def _error(reason: str) -> dict:
    return {"type": "error", "reason": reason}


@dataclass
class SessionConfig:
    zone: FlightZoneConfig = field(default_factory=FlightZoneConfig)
    sim: SimConfig = field(default_factory=lambda: SimConfig(n_drones=2))
    field_params: FieldParams = field(default_factory=FieldParams)
    filter_params: FilterParams = field(default_factory=FilterParams)
    mapping: GestureMapping = field(default_factory=default_mapping)
    spacing_px: float = 10.0
    speed: float = 0.3
    truth: GroundTruthShape | None = None
    splat_intensity: float = 0.05
    splat_sigma: float = 2.0
    exposure_gain: float = 1.0

    @classmethod
    def from_overrides(cls, overrides: dict | None) -> "SessionConfig":
        cfg = cls()
        if not overrides:
            return cfg
        if not isinstance(overrides, dict):
            raise ConfigError("config overrides must be an object")
        simple = {k: overrides[k] for k in ("spacing_px", "speed", "splat_intensity",
                                            "splat_sigma", "exposure_gain") if k in overrides}
        for k, v in simple.items():
            if not isinstance(v, (int, float)) or v <= 0:
                raise ConfigError(f"{k} must be a positive number")
            setattr(cfg, k, float(v))
        filt = {k: overrides[k] for k in ("alpha", "beta", "fallback_dt") if k in overrides}
        if filt:
            cfg.filter_params = FilterParams(**filt)
        fieldp = {k: overrides[k] for k in ("k_att", "f_max", "k_rep", "d0", "d_safe")
                  if k in overrides}
        if fieldp:
            cfg.field_params = FieldParams(**fieldp)
        mapping = {k: overrides[k] for k in ("threshold", "debounce_frames", "erase_radius")
                   if k in overrides}
        if mapping:
            cfg.mapping = GestureMapping(map=cfg.mapping.map, **mapping)
        if "mapping" in overrides:
            cfg.mapping = GestureMapping.from_json(json.dumps(overrides["mapping"]))
        sim_keys = ("dt", "v_max", "tau", "takeoff_altitude", "n_drones", "seed",
                    "formation_spacing", "arrival_based")
        sim_over = {k: overrides[k] for k in sim_keys if k in overrides}
        if sim_over:
            cfg.sim = SimConfig(**{**cfg.sim.__dict__, **sim_over})
        if "zone" in overrides:
            zone_doc = {k: tuple(v) if isinstance(v, list) else v
                        for k, v in overrides["zone"].items()}
            cfg.zone = FlightZoneConfig(**zone_doc)
        if "truth" in overrides:
            t = overrides["truth"]
            cfg.truth = GroundTruthShape(str(t["kind"]).upper(), float(t["size"]),
                                         tuple(t.get("center", (0.0, 1.5))))
        return cfg


class Session:
    """One isolated drawing/flight session."""

    def __init__(self, session_id: str, overrides: dict | None = None, model=None):
        self.id = session_id
        self.overrides = dict(overrides or {})
        self.config = SessionConfig.from_overrides(self.overrides)
        self.model = model
        self.fsm = CommandState()
        self.mapping = self.config.mapping
        self.strokes: list[list[tuple[float, float, float]]] = [[]]
        self.world = World(self.config.sim, self.config.field_params)
        self.canvas = ExposureCanvas(
            int(self.config.zone.screen_w), int(self.config.zone.screen_h), self.config.zone
        )
        self.schedule = None
        self.paint_segments: list[tuple[float, float]] = []
        self.pending: list[dict] = []  # queued broadcast messages (reports)
        self._accum = 0.0
        self._last_stroke_t: float | None = None

    # -- helpers -------------------------------------------------------------

    def _active_stroke(self) -> list:
        return self.strokes[-1]

    def _append_point(self, x: float, y: float, t: float) -> None:
        if self._last_stroke_t is not None and t <= self._last_stroke_t:
            t = np.nextafter(self._last_stroke_t, np.inf)
        self._last_stroke_t = t
        self._active_stroke().append((float(x), float(y), float(t)))

    def _erase_at(self, x: float, y: float, radius: float) -> None:
        new_strokes: list[list] = []
        for stroke in self.strokes:
            run: list = []
            for p in stroke:
                if np.hypot(p[0] - x, p[1] - y) > radius:
                    run.append(p)
                elif run:
                    new_strokes.append(run)
                    run = []
            if run:
                new_strokes.append(run)
        self.strokes = new_strokes or [[]]

    def _plan_paint(self) -> bool:
        """Build the flight schedule from the drawn strokes; False if nothing usable."""
        cfg = self.config
        waypoints = []
        segments = []
        t_cursor = 0.0
        for stroke in self.strokes:
            if len(stroke) < 2:
                continue
            try:
                plan = process(RawStroke(np.asarray(stroke)), cfg.filter_params,
                               cfg.spacing_px, cfg.zone, cfg.speed)
            except SwarmPaintError:
                continue
            if not plan:
                continue
            start = t_cursor
            if waypoints:
                hop = float(np.linalg.norm(
                    np.asarray(plan[0].position) - np.asarray(waypoints[-1][0])))
                start = t_cursor + max(hop / cfg.speed, cfg.sim.dt)
            for wp in plan:
                waypoints.append((wp.position, start + wp.dispatch_offset))
            segments.append((start, start + plan[-1].dispatch_offset))
            t_cursor = segments[-1][1]
        if not waypoints:
            return False
        from .trajectory import TimedWaypoint

        self.schedule = [TimedWaypoint(p, o) for p, o in waypoints]
        self.paint_segments = segments
        self.world.start_schedule(self.schedule)
        return True

    def _finish_paint(self) -> None:
        self.world.stop_schedule()
        self.schedule = None
        self.paint_segments = []
        if self.fsm.mode is Mode.PAINTING:
            self.fsm = CommandState(mode=Mode.FLYING_IDLE)
        if self.config.truth is not None:
            report = self._report()
            if report is not None:
                self.pending.append(report)

    def _report(self) -> dict | None:
        pts = [p for stroke in self.strokes for p in stroke]
        if len(pts) < 2:
            return None
        arr = np.asarray(pts)
        world = screen_to_world(arr[:, :2], self.config.zone)
        plane = np.column_stack([world[:, 0], world[:, 2], arr[:, 2]])
        rep = trace_errors(plane, self.config.truth)
        return {"type": "report", **rep.to_dict()}

    def _apply_event(self, event) -> list[dict]:
        kind = event.kind
        if kind == "TAKE_OFF":
            self.world.take_off()
        elif kind == "LAND":
            if self.schedule is not None:
                self._finish_paint()
            self.world.land()
        elif kind == "DRAW_POINT":
            self._append_point(event.x, event.y, event.t if event.t is not None else self.world.t)
        elif kind == "ERASE_AT":
            self._erase_at(event.x, event.y, event.radius or self.mapping.erase_radius)
        elif kind == "BEGIN_PAINT":
            if not self._plan_paint():
                self.fsm = CommandState(mode=Mode.FLYING_IDLE)
                return [_error("nothing to paint: no stroke with two distinct points")]
        elif kind == "CLEAR":
            self.strokes = [[]]
            self._last_stroke_t = None
        return []

    # -- message handling ------------------------------------------------------

    def handle(self, msg: dict) -> list[dict]:
        """Process one client message; returns direct replies to the sender."""
        if not isinstance(msg, dict) or "type" not in msg:
            return [_error("message must be an object with a 'type' field")]
        mtype = msg["type"]
        try:
            if mtype == "hand_frame":
                return self._handle_hand_frame(msg)
            if mtype == "stroke_point":
                return self._handle_stroke_point(msg)
            if mtype == "command":
                return self._handle_command(msg)
            if mtype == "config":
                return self._handle_config(msg)
            if mtype == "hello":
                return [self.snapshot()]
            return [_error(f"unknown message type {mtype!r}")]
        except SwarmPaintError as exc:
            return [_error(str(exc))]

    def _handle_hand_frame(self, msg: dict) -> list[dict]:
        landmarks = msg.get("landmarks")
        if not isinstance(landmarks, list) or len(landmarks) != N_LANDMARKS:
            got = len(landmarks) if isinstance(landmarks, list) else "none"
            return [_error(f"expected {N_LANDMARKS} landmarks, got {got}")]
        if self.model is None:
            return [_error("no gesture model loaded on this gateway")]
        t = float(msg.get("t", self.world.t))
        frame = HandFrame(np.asarray(landmarks, dtype=float), t)
        label, conf = classify(self.model, extract_features(frame))
        cursor = hand_position(frame, self.config.zone.screen_w, self.config.zone.screen_h)
        self.fsm, event = step_fsm(self.fsm, label, conf, cursor, self.mapping, t=t)
        replies = self._apply_event(event)
        return [{"type": "gesture", "class": label.name, "confidence": conf}] + replies

    def _handle_stroke_point(self, msg: dict) -> list[dict]:
        try:
            x, y, t = float(msg["x"]), float(msg["y"]), float(msg["t"])
        except (KeyError, TypeError, ValueError):
            return [_error("stroke_point needs numeric x, y, t")]
        self._append_point(x, y, t)
        return []

    def _handle_command(self, msg: dict) -> list[dict]:
        name = msg.get("name")
        if name == "SNAPSHOT":
            data = render_ppm(self.canvas, self.config.exposure_gain)
            return [{
                "type": "painting",
                "w": self.canvas.width,
                "h": self.canvas.height,
                "data": base64.b64encode(data).decode("ascii"),
            }]
        if name == "REPORT":
            if self.config.truth is None:
                return [_error("no ground-truth shape configured")]
            report = self._report()
            return [report] if report else [_error("nothing drawn yet")]
        if name == "ERASE_AT":
            try:
                x, y = float(msg["x"]), float(msg["y"])
            except (KeyError, TypeError, ValueError):
                return [_error("ERASE_AT needs numeric x, y")]
            radius = float(msg.get("radius", self.mapping.erase_radius))
            self._erase_at(x, y, radius)
            return []
        if name == "DRAW_POINT":
            try:
                self._append_point(float(msg["x"]), float(msg["y"]), float(msg["t"]))
            except (KeyError, TypeError, ValueError):
                return [_error("DRAW_POINT needs numeric x, y, t")]
            return []
        if name == "NONE":
            return []
        if name == "BEGIN_PAINT":
            name = Command.PAINT.value
        try:
            command = Command(name)
        except ValueError:
            return [_error(f"unknown command {name!r}")]
        if command is Command.PAINT and self.fsm.mode not in AIRBORNE_MODES:
            return [_error("cannot paint while grounded")]
        self.fsm, event = apply_command(self.fsm, command, t=self.world.t)
        return self._apply_event(event)

    def _handle_config(self, msg: dict) -> list[dict]:
        new_keys = {k: v for k, v in msg.items() if k != "type"}
        grounded = all(d.status == GROUNDED for d in self.world.drones)
        merged = {**self.overrides, **new_keys}
        new_cfg = SessionConfig.from_overrides(merged)  # raises ConfigError on bad values
        rebuild_keys = ("n_drones", "zone", "dt", "v_max", "tau", "seed")
        rebuild = any(k in new_keys for k in rebuild_keys)
        if rebuild and not grounded:
            return [_error("swarm size, zone and sim parameters can only change while grounded")]
        self.overrides = merged
        self.config = new_cfg
        self.mapping = new_cfg.mapping
        if rebuild:
            self.world = World(new_cfg.sim, new_cfg.field_params)
            self.canvas = ExposureCanvas(int(new_cfg.zone.screen_w),
                                         int(new_cfg.zone.screen_h), new_cfg.zone)
        else:
            self.world.params = new_cfg.field_params
        return []

    # -- simulation tick -------------------------------------------------------

    def advance(self, wall_dt: float) -> None:
        """Run the fixed-dt simulation for `wall_dt` seconds of wall time."""
        dt = self.config.sim.dt
        self._accum += max(wall_dt, 0.0)
        while self._accum >= dt:
            self._accum -= dt
            if self.schedule is not None:
                dispatch_waypoints(self.world)
                self._update_leds()
            step(self.world)
            if self.schedule is not None:
                for drone in self.world.drones:
                    if drone.led_on:
                        self.canvas.accumulate(drone.position, drone.led,
                                               self.config.splat_intensity,
                                               self.config.splat_sigma)
                elapsed = self.world.t - self.world.paint_start
                if elapsed > self.schedule[-1].dispatch_offset + PAINT_SETTLE:
                    self._finish_paint()

    def _update_leds(self) -> None:
        if self.world.paint_start is None:
            return
        elapsed = self.world.t - self.world.paint_start
        lit = any(a <= elapsed <= b for a, b in self.paint_segments)
        for drone in self.world.drones:
            drone.led_on = lit and drone.status == AIRBORNE

    def snapshot(self) -> dict:
        drones = [
            {
                "id": d.id,
                "x": float(d.position[0]),
                "y": float(d.position[1]),
                "z": float(d.position[2]),
                "vx": float(d.velocity[0]),
                "vy": float(d.velocity[1]),
                "vz": float(d.velocity[2]),
                "led": [float(v) for v in d.led],
                "led_on": bool(d.led_on),
                "status": d.status,
            }
            for d in self.world.drones
        ]
        progress = 0
        if self.schedule is not None and self.world.drones:
            progress = max(0, self.world.drones[0].waypoint_index + 1)
        return {
            "type": "state",
            "session": self.id,
            "t": float(self.world.t),
            "mode": self.fsm.mode.value,
            "drones": drones,
            "stroke": [[p[0], p[1], p[2]] for s in self.strokes for p in s],
            "strokes": [[[p[0], p[1], p[2]] for p in s] for s in self.strokes if s],
            "schedule_progress": progress,
            "schedule_len": len(self.schedule) if self.schedule else 0,
            "zone": {"w": self.config.zone.screen_w, "h": self.config.zone.screen_h},
        }

    def drain_pending(self) -> list[dict]:
        out, self.pending = self.pending, []
        return out


def open_session(session_id: str = "default", overrides: dict | None = None,
                 model=None) -> Session:
    """Create a fresh session; invalid overrides raise ConfigError."""
    return Session(session_id, overrides, model)


# ---------------------------------------------------------------------------
# async transport shell


class _Hub:
    def __init__(self, model=None, default_overrides: dict | None = None):
        self.model = model
        self.default_overrides = dict(default_overrides or {})
        self.sessions: dict[str, Session] = {}
        self.subscribers: dict[str, set] = {}

    def get(self, session_id: str) -> Session:
        if session_id not in self.sessions:
            self.sessions[session_id] = Session(session_id, dict(self.default_overrides),
                                                model=self.model)
            self.subscribers[session_id] = set()
        return self.sessions[session_id]

    def subscribe(self, session_id: str, sink) -> Session:
        session = self.get(session_id)
        self.subscribers[session_id].add(sink)
        return session

    def unsubscribe(self, session_id: str, sink) -> None:
        self.subscribers.get(session_id, set()).discard(sink)


def _decode_lines(payload: str) -> list[dict | None]:
    """Each newline-separated JSON document; None marks a parse failure."""
    docs: list[dict | None] = []
    for line in payload.split("\n"):
        line = line.strip()
        if not line:
            continue
        try:
            docs.append(json.loads(line))
        except json.JSONDecodeError:
            docs.append(None)
    return docs


async def _broadcast_loop(hub: _Hub, hz: float) -> None:
    period = 1.0 / hz
    last = time.monotonic()
    while True:
        await asyncio.sleep(period)
        now = time.monotonic()
        elapsed, last = now - last, now
        for sid, session in list(hub.sessions.items()):
            session.advance(elapsed)
            messages = session.drain_pending() + [session.snapshot()]
            sinks = list(hub.subscribers.get(sid, ()))
            for msg in messages:
                data = json.dumps(msg) + "\n"
                for sink in sinks:
                    try:
                        await sink(data)
                    except Exception:
                        hub.unsubscribe(sid, sink)


async def _serve_websocket(hub: _Hub, bind: str, port: int):
    import websockets

    async def handler(ws):
        query = urllib.parse.urlparse(ws.request.path).query
        params = urllib.parse.parse_qs(query)
        session_id = params.get("session", [f"ws-{id(ws)}"])[0]

        async def sink(data: str):
            await ws.send(data)

        session = hub.subscribe(session_id, sink)
        try:
            async for raw in ws:
                for doc in _decode_lines(raw if isinstance(raw, str) else raw.decode()):
                    replies = [_error("malformed JSON message")] if doc is None else session.handle(doc)
                    for reply in replies:
                        await ws.send(json.dumps(reply) + "\n")
        finally:
            hub.unsubscribe(session_id, sink)

    return await websockets.serve(handler, bind, port)


async def _serve_tcp(hub: _Hub, bind: str, port: int):
    async def handler(reader: asyncio.StreamReader, writer: asyncio.StreamWriter):
        peer = writer.get_extra_info("peername")
        session_id = f"tcp-{peer[0]}-{peer[1]}"
        session: Session | None = None
        sink_registered: str | None = None

        async def sink(data: str):
            writer.write(data.encode("utf-8"))
            await writer.drain()

        try:
            while True:
                line = await reader.readline()
                if not line:
                    break
                text = line.decode("utf-8").strip()
                if not text:
                    continue
                try:
                    doc = json.loads(text)
                except json.JSONDecodeError:
                    writer.write((json.dumps(_error("malformed JSON message")) + "\n").encode())
                    await writer.drain()
                    continue
                if session is None:
                    if isinstance(doc, dict) and doc.get("type") == "hello" and doc.get("session"):
                        session_id = str(doc["session"])
                    session = hub.subscribe(session_id, sink)
                    sink_registered = session_id
                replies = session.handle(doc)
                for reply in replies:
                    writer.write((json.dumps(reply) + "\n").encode("utf-8"))
                await writer.drain()
        except (ConnectionResetError, asyncio.IncompleteReadError):
            pass
        finally:
            if sink_registered:
                hub.unsubscribe(sink_registered, sink)
            writer.close()

    return await asyncio.start_server(handler, bind, port)


def _serve_ui(ui_dir: str, bind: str, port: int):
    import functools
    import http.server
    import threading

    handler = functools.partial(http.server.SimpleHTTPRequestHandler, directory=ui_dir)
    httpd = http.server.ThreadingHTTPServer((bind, port), handler)
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    return httpd


async def run_server(bind: str = "127.0.0.1", port: int = 8765,
                     tcp_port: int | None = None, model=None,
                     ui_dir: str | None = None, broadcast_hz: float = BROADCAST_HZ,
                     default_overrides: dict | None = None,
                     ready_callback=None) -> None:
    SessionConfig.from_overrides(default_overrides)  # fail fast on bad config files
    hub = _Hub(model=model, default_overrides=default_overrides)
    ws_server = await _serve_websocket(hub, bind, port)
    ws_port = ws_server.sockets[0].getsockname()[1]
    tcp_server = None
    tcp_bound = None
    if tcp_port is not None:
        tcp_server = await _serve_tcp(hub, bind, tcp_port)
        tcp_bound = tcp_server.sockets[0].getsockname()[1]
    httpd = None
    if ui_dir:
        httpd = _serve_ui(ui_dir, bind, ws_port + 1)
        print(f"ui http://{bind}:{ws_port + 1}/", flush=True)
    print(f"listening ws={ws_port}" + (f" tcp={tcp_bound}" if tcp_bound else ""), flush=True)
    if ready_callback:
        ready_callback(ws_port, tcp_bound)
    try:
        await _broadcast_loop(hub, broadcast_hz)
    finally:
        ws_server.close()
        if tcp_server:
            tcp_server.close()
        if httpd:
            httpd.shutdown()


def serve_forever(bind: str = "127.0.0.1", port: int = 8765, tcp_port: int | None = None,
                  model=None, ui_dir: str | None = None,
                  default_overrides: dict | None = None) -> None:
    asyncio.run(run_server(bind, port, tcp_port, model, ui_dir,
                           default_overrides=default_overrides))
