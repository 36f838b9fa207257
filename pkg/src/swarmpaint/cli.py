"""Headless command-line entry points for every pipeline stage.

Exit codes: 0 success, 1 input/configuration error, 2 internal error.
All randomness flows from --seed so repeated runs produce byte-identical
artifacts.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import gestures
from .canvas import ExposureCanvas, save_ppm
from .errors import ConfigError, SwarmPaintError
from .metrics import GroundTruthShape, trace_errors
from .report import (
    format_report_grid,
    save_comparison_figure,
    save_report,
    save_trace_figure,
)
from .scenario import load_scenario
from .sim import load_trace, min_separation, run_episode, run_point_mission, save_events, save_trace
from .trajectory import load_trajectory, screen_to_world, process

DEFAULT_PORT = 8765
PORT_ENV = "SWARMPAINT_PORT"


def _cmd_synth_data(args) -> int:
    ds = gestures.synth_dataset(per_class=args.per_class, jitter=args.jitter, seed=args.seed)
    out = args.out or "gestures.jsonl"
    gestures.save_dataset(ds, out)
    print(f"wrote {len(ds)} samples ({len(ds.train)} train / {len(ds.test)} test) to {out}")
    return 0


def _cmd_train(args) -> int:
    if args.data:
        ds = gestures.load_dataset(args.data)
    else:
        ds = gestures.synth_dataset(seed=args.seed)
    cfg = gestures.TrainingConfig(epochs=args.epochs, learning_rate=args.learning_rate,
                                  batch_size=args.batch_size, seed=args.seed)
    model = gestures.train_classifier(ds, cfg)
    out = args.out or "gesture_model.json"
    gestures.save_model(model, out)
    acc, _ = gestures.evaluate(model, ds.test if len(ds.test) else ds)
    print(f"trained {cfg.epochs} epochs; held-out accuracy {acc:.4f}; model -> {out}")
    return 0


def _cmd_eval(args) -> int:
    model = gestures.load_model(args.model)
    ds = gestures.load_dataset(args.data) if args.data else gestures.synth_dataset(seed=args.seed)
    subset = ds.subset(args.split) if args.split and ds.split else ds
    acc, confusion = gestures.evaluate(model, subset)
    print(f"accuracy {acc:.4f} over {len(subset)} samples")
    names = gestures.GESTURE_NAMES
    width = max(len(n) for n in names)
    print(" " * width + "  " + " ".join(n[:6].rjust(6) for n in names))
    for i, row in enumerate(confusion):
        print(names[i].rjust(width) + "  " + " ".join(str(v).rjust(6) for v in row))
    return 0


def _cmd_classify(args) -> int:
    model = gestures.load_model(args.model)
    with open(args.frames, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            doc = json.loads(line)
            if "landmarks" not in doc:
                continue  # header or metadata line
            frame = gestures.HandFrame(np.asarray(doc["landmarks"], dtype=float), doc.get("t", 0.0))
            label, conf = gestures.classify(model, gestures.extract_features(frame))
            print(f"{label.name} {conf:.4f}")
    return 0


def _cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.seed is not None:
        scenario.sim.seed = args.seed
    out_dir = args.out or "."
    os.makedirs(out_dir, exist_ok=True)
    paths = {name: os.path.join(out_dir, name) for name in
             ("trace.csv", "events.ndjson", "painting.ppm", "report.json",
              "drawn_vs_truth.png", "flight_paths.png")}

    canvas_cfg = scenario.canvas
    canvas = ExposureCanvas(
        width=int(canvas_cfg.get("width", scenario.zone.screen_w)),
        height=int(canvas_cfg.get("height", scenario.zone.screen_h)),
        zone=scenario.zone,
    )

    if scenario.input_kind == "goals":
        starts, goals, max_time = scenario.goals_input()
        trace, events, _ = run_point_mission(
            scenario.sim, scenario.field_params, starts, goals,
            obstacles=scenario.obstacles, max_time=max_time)
        drawn_world = None
    else:
        stroke = scenario.build_stroke(seed_override=args.seed)
        schedule = process(stroke, scenario.filter_params, scenario.spacing_px,
                           scenario.zone, scenario.speed)
        trace, events = run_episode(
            scenario.sim, scenario.field_params, schedule,
            obstacles=scenario.obstacles, canvas=canvas,
            splat_intensity=canvas_cfg.get("intensity", 0.05),
            splat_sigma=canvas_cfg.get("sigma_px", 2.0),
        )
        drawn_world = screen_to_world(stroke.points[:, :2], scenario.zone)

    save_trace(paths["trace.csv"], trace)
    save_events(paths["events.ndjson"], events)
    save_ppm(paths["painting.ppm"], canvas, canvas_cfg.get("gain", 1.0))
    save_trace_figure(paths["flight_paths.png"], trace)

    if scenario.truth is not None and drawn_world is not None:
        stroke_plane = np.column_stack([drawn_world[:, 0], drawn_world[:, 2],
                                        stroke.points[:, 2]])
        report = trace_errors(stroke_plane, scenario.truth)
        save_report(paths["report.json"], report)
        save_comparison_figure(paths["drawn_vs_truth.png"], stroke_plane, scenario.truth,
                               report, title="drawn vs truth")
        print(format_report_grid({(scenario.truth.kind.title(), "drawn"): report}), end="")
    else:
        print("no ground-truth shape in scenario; report skipped")

    if trace.n_drones >= 2:
        print(f"min separation: {min_separation(trace):.3f} m")
    print(f"artifacts in {out_dir}: " + ", ".join(sorted(
        n for n, p in paths.items() if os.path.exists(p))))
    return 0


def _cmd_render(args) -> int:
    trace = load_trace(args.trace)
    canvas = ExposureCanvas(width=args.width, height=args.height)
    lit = 0
    for k in range(len(trace.times)):
        for i in range(trace.n_drones):
            led = trace.led[k, i]
            if np.any(led > 0):
                canvas.accumulate(trace.positions[k, i], led, args.intensity, args.sigma)
                lit += 1
    out = args.out or "painting.ppm"
    save_ppm(out, canvas, args.gain)
    print(f"rendered {lit} splats -> {out}")
    return 0


def _cmd_metrics(args) -> int:
    if args.manifest:
        with open(args.manifest, "r", encoding="utf-8") as fh:
            manifest = json.load(fh)
        base = os.path.dirname(os.path.abspath(args.manifest))
        grid = {}
        for entry in manifest["entries"]:
            truth = GroundTruthShape(entry["truth"]["kind"], entry["truth"]["size"],
                                     tuple(entry["truth"].get("center", (0.0, 1.5))))
            path = entry["file"]
            if not os.path.isabs(path):
                path = os.path.join(base, path)
            drawn = load_trajectory(path)
            grid[(entry["shape"], entry["method"])] = trace_errors(drawn, truth)
        print(format_report_grid(grid), end="")
        return 0

    if not args.drawn:
        raise ConfigError("metrics needs a drawn trajectory file (or --manifest)")
    drawn = load_trajectory(args.drawn)
    center = tuple(args.center) if args.center else (0.0, 1.5)
    truth = GroundTruthShape(args.shape.upper(), args.side, center)
    report = trace_errors(drawn, truth)
    print(format_report_grid({(truth.kind.title(), args.method): report}), end="")
    if args.out:
        save_report(args.out, report)
        print(f"report -> {args.out}")
    if args.figure:
        save_comparison_figure(args.figure, drawn, truth, report)
        print(f"figure -> {args.figure}")
    return 0


def _cmd_serve(args) -> int:
    from .gateway import serve_forever

    port = args.port if args.port is not None else int(os.environ.get(PORT_ENV, DEFAULT_PORT))
    model = gestures.load_model(args.model) if args.model else None
    overrides = None
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            overrides = json.load(fh)
    serve_forever(bind=args.bind, port=port, tcp_port=args.tcp_port, model=model,
                  ui_dir=args.ui_dir, default_overrides=overrides)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swarmpaint",
                                     description="gesture-driven swarm light painting toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth-data", help="generate a synthetic gesture dataset")
    p.add_argument("--per-class", type=int, default=1000)
    p.add_argument("--jitter", type=float, default=0.015)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", help="output dataset file (JSONL)")
    p.set_defaults(func=_cmd_synth_data)

    p = sub.add_parser("train", help="train the gesture classifier")
    p.add_argument("--data", help="dataset file; defaults to a synthetic one")
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--learning-rate", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", help="output model file")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="evaluate a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--data", help="dataset file; defaults to a synthetic one")
    p.add_argument("--split", default="test")
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("classify", help="classify landmark frames from a JSONL file")
    p.add_argument("frames", help="JSONL file with landmark records")
    p.add_argument("--model", required=True)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("simulate", help="run a scenario file end to end")
    p.add_argument("scenario")
    p.add_argument("--seed", type=int, default=None, help="override scenario seeds")
    p.add_argument("--out", help="artifact output directory")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("render", help="re-render a painting from a trace file")
    p.add_argument("trace")
    p.add_argument("--out", help="output PPM path")
    p.add_argument("--width", type=int, default=640)
    p.add_argument("--height", type=int, default=480)
    p.add_argument("--gain", type=float, default=1.0)
    p.add_argument("--sigma", type=float, default=2.0)
    p.add_argument("--intensity", type=float, default=0.05)
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("metrics", help="tracing-error report for a trajectory file")
    p.add_argument("drawn", nargs="?", help="trajectory file with x,y,t rows (meters)")
    p.add_argument("--shape", default="square", choices=["square", "circle", "triangle"])
    p.add_argument("--side", type=float, default=1.0, help="side length or radius, meters")
    p.add_argument("--center", type=float, nargs=2, default=None)
    p.add_argument("--method", default="drawn", help="column label")
    p.add_argument("--manifest", help="JSON manifest for a full (shape x method) grid")
    p.add_argument("--out", help="write report JSON here")
    p.add_argument("--figure", help="write overlay figure PNG here")
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("serve", help="run the live session gateway")
    p.add_argument("--bind", default="127.0.0.1")
    p.add_argument("--port", type=int, default=None,
                   help=f"websocket port (default {DEFAULT_PORT}, env {PORT_ENV})")
    p.add_argument("--tcp-port", type=int, default=None, help="optional NDJSON-over-TCP port")
    p.add_argument("--model", help="trained gesture model file")
    p.add_argument("--config", help="JSON file of session-config defaults")
    p.add_argument("--ui-dir", help="serve this directory over HTTP for the browser UI")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SwarmPaintError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 130
    except Exception as exc:  # internal failure
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
