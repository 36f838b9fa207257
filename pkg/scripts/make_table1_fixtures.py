"""Regenerate the demo tracing-error fixtures in fixtures/table1/.

Each fixture is a synthetic drawn trajectory over one ground-truth shape,
with its wobble amplitude calibrated so the mean tracing error lands on a
documented reference magnitude for that (shape, input-method) pair.  The
stored reports.json freezes the exact TraceReport of every file so tests
can assert bit-exact reproduction.

Run from the repository root:  python scripts/make_table1_fixtures.py
"""

import json
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from swarmpaint.metrics import GroundTruthShape, trace_errors
from swarmpaint.synth import shape_path_world
from swarmpaint.trajectory import save_trajectory

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "fixtures", "table1")

# (shape kind, size m, method, target mean error cm, drawing time s, seed)
SPECS = [
    ("Square", "SQUARE", 1.0, "hand", 6.45, 15.50, 101),
    ("Square", "SQUARE", 1.0, "mouse", 3.69, 5.52, 102),
    ("Circle", "CIRCLE", 0.5, "hand", 6.33, 13.47, 103),
    ("Circle", "CIRCLE", 0.5, "mouse", 3.29, 4.89, 104),
    ("Triangle", "TRIANGLE", 1.0, "hand", 4.13, 12.04, 105),
    ("Triangle", "TRIANGLE", 1.0, "mouse", 2.19, 4.50, 106),
]


def calibrate(shape, method, target_mean_cm, duration, seed):
    flicker = 0.004 if method == "hand" else 0.002
    wobble = target_mean_cm / 100.0  # starting guess, meters
    path = None
    for _ in range(6):
        path = shape_path_world(shape, duration=duration, wobble_m=wobble,
                                flicker_m=flicker, seed=seed)
        mean = trace_errors(path, shape).mean_error
        if abs(mean - target_mean_cm) / target_mean_cm < 0.002:
            break
        wobble *= target_mean_cm / mean
    return path


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    reports = {}
    entries = []
    for label, kind, size, method, target, duration, seed in SPECS:
        shape = GroundTruthShape(kind, size, (0.0, 1.5))
        path = calibrate(shape, method, target, duration, seed)
        name = f"{label.lower()}_{method}.csv"
        save_trajectory(os.path.join(OUT_DIR, name), path)
        report = trace_errors(path, shape)
        reports[f"{label}/{method}"] = report.to_dict()
        entries.append({
            "shape": label,
            "method": method,
            "file": name,
            "truth": {"kind": kind, "size": size, "center": [0.0, 1.5]},
            "reference_mean_cm": target,
        })
        print(f"{label:8s} {method:5s} mean {report.mean_error:6.3f} cm "
              f"(target {target}) rmse {report.rmse:6.3f} time {report.duration}")

    with open(os.path.join(OUT_DIR, "reports.json"), "w", encoding="utf-8") as fh:
        json.dump(reports, fh, indent=2, sort_keys=True)
    with open(os.path.join(OUT_DIR, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump({"entries": entries}, fh, indent=2)
    print(f"fixtures written to {os.path.abspath(OUT_DIR)}")


if __name__ == "__main__":
    main()
