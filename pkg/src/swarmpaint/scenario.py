"""Scenario documents: everything a headless simulation run needs.

A scenario is one JSON document holding the flight zone, sim and field
parameters, swarm layout, obstacles and exactly one input source: inline
stroke points, a named ground-truth shape with noise and seed, a stroke
trajectory file, or explicit per-drone start/goal points.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .field import FieldParams, Slab, Sphere
from .metrics import GroundTruthShape
from .sim import SimConfig
from .synth import shape_stroke_px
from .trajectory import FilterParams, FlightZoneConfig, RawStroke, load_trajectory

SCENARIO_FORMAT = "swarmpaint-scenario"
SCENARIO_VERSION = 1

INPUT_KEYS = ("stroke", "shape", "trajectory_file", "goals")


@dataclass
class Scenario:
    zone: FlightZoneConfig
    sim: SimConfig
    field_params: FieldParams
    filter_params: FilterParams
    spacing_px: float
    speed: float
    obstacles: list
    input_kind: str
    input: dict
    truth: GroundTruthShape | None
    canvas: dict = field(default_factory=dict)

    def build_stroke(self, seed_override: int | None = None) -> RawStroke:
        """Materialize the pixel-space stroke for stroke/shape/file inputs."""
        if self.input_kind == "stroke":
            return RawStroke(np.asarray(self.input["stroke"], dtype=float))
        if self.input_kind == "shape":
            spec = self.input["shape"]
            shape = _shape_from(spec)
            return shape_stroke_px(
                shape,
                zone=self.zone,
                duration=spec.get("duration", 15.0),
                fps=spec.get("fps", 30.0),
                wobble_px=spec.get("wobble_px", 0.0),
                flicker_px=spec.get("flicker_px", 2.0),
                seed=seed_override if seed_override is not None else spec.get("seed", 0),
            )
        if self.input_kind == "trajectory_file":
            rows = load_trajectory(self.input["trajectory_file"])
            if rows.shape[1] != 3:
                raise ConfigError("stroke trajectory files must have x,y,t rows")
            return RawStroke(rows)
        raise ConfigError("scenario input provides goals, not a stroke")

    def goals_input(self) -> tuple[np.ndarray, np.ndarray, float]:
        if self.input_kind != "goals":
            raise ConfigError("scenario input is not a goals mission")
        g = self.input["goals"]
        return (
            np.asarray(g["starts"], dtype=float),
            np.asarray(g["goals"], dtype=float),
            float(g.get("max_time", 30.0)),
        )


def _shape_from(spec: dict) -> GroundTruthShape:
    try:
        return GroundTruthShape(
            kind=str(spec["kind"]).upper(),
            size=float(spec["size"]),
            center=tuple(spec.get("center", (0.0, 1.5))),
        )
    except KeyError as exc:
        raise ConfigError(f"shape spec missing field {exc}") from None


def _build(doc: dict, base_dir: str) -> Scenario:
    if doc.get("format") != SCENARIO_FORMAT:
        raise ConfigError("not a scenario document (missing format tag)")
    if doc.get("version") != SCENARIO_VERSION:
        raise ConfigError(f"unsupported scenario version {doc.get('version')}")

    zone = FlightZoneConfig(**{k: tuple(v) if isinstance(v, list) else v
                               for k, v in doc.get("zone", {}).items()})
    sim_doc = dict(doc.get("sim", {}))
    if "formation_offsets" in sim_doc and sim_doc["formation_offsets"] is not None:
        sim_doc["formation_offsets"] = tuple(tuple(o) for o in sim_doc["formation_offsets"])
    for key in ("bounds_lo", "bounds_hi"):
        if key in sim_doc:
            sim_doc[key] = tuple(sim_doc[key])
    sim = SimConfig(**sim_doc)
    field_params = FieldParams(**doc.get("field", {}))
    filter_params = FilterParams(**doc.get("filter", {}))

    obstacles = []
    for spec in doc.get("obstacles", []):
        kind = spec.get("type")
        if kind == "sphere":
            obstacles.append(Sphere(tuple(spec["center"]), float(spec["radius"])))
        elif kind == "slab":
            lo = tuple(float(v) if v is not None else -np.inf for v in spec["lo"])
            hi = tuple(float(v) if v is not None else np.inf for v in spec["hi"])
            obstacles.append(Slab(lo, hi))
        else:
            raise ConfigError(f"unknown obstacle type {kind!r}")

    inputs = doc.get("input", {})
    present = [k for k in INPUT_KEYS if k in inputs]
    if len(present) != 1:
        raise ConfigError(f"scenario must define exactly one input source, got {present}")
    input_kind = present[0]
    if input_kind == "trajectory_file":
        path = inputs["trajectory_file"]
        if not os.path.isabs(path):
            path = os.path.join(base_dir, path)
            inputs = {**inputs, "trajectory_file": path}
        if not os.path.exists(path):
            raise ConfigError(f"referenced trajectory file does not exist: {path}")

    truth = None
    if "truth" in doc:
        truth = _shape_from(doc["truth"])
    elif input_kind == "shape":
        truth = _shape_from(inputs["shape"])

    return Scenario(
        zone=zone,
        sim=sim,
        field_params=field_params,
        filter_params=filter_params,
        spacing_px=float(doc.get("spacing_px", 10.0)),
        speed=float(doc.get("speed", 0.3)),
        obstacles=obstacles,
        input_kind=input_kind,
        input=inputs,
        truth=truth,
        canvas=dict(doc.get("canvas", {})),
    )


def load_scenario(path) -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"scenario file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"scenario is not valid JSON: {exc}") from None
    try:
        return _build(doc, os.path.dirname(os.path.abspath(path)))
    except TypeError as exc:
        raise ConfigError(f"bad scenario field: {exc}") from None
