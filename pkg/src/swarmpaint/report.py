"""Human-readable tracing reports: text tables, JSON exports and figures.

The grid formatter prints one column per (shape, input-method) pair and
the four metric rows used throughout the project:  max / mean / RMSE
tracing error in centimeters plus drawing time in seconds.  The figure
path overlays the evaluated path (red) on the ground truth (green),
matching the on-screen color convention of the live UI.
"""

from __future__ import annotations

import json

import numpy as np

from .metrics import GroundTruthShape, TraceReport, confidence_interval

ROW_LABELS = (
    ("Max error, cm", "max_error"),
    ("Mean error, cm", "mean_error"),
    ("RMSE, cm", "rmse"),
    ("Time, sec", "duration"),
)


def format_report_grid(grid: dict[tuple[str, str], TraceReport]) -> str:
    """Text table over (shape, method) columns with the standard metric rows.

    `grid` maps (shape, method) -> TraceReport; columns are grouped by
    shape in insertion order.
    """
    shapes: list[str] = []
    methods: list[str] = []
    for shape, method in grid:
        if shape not in shapes:
            shapes.append(shape)
        if method not in methods:
            methods.append(method)
    cols = [(s, m) for s in shapes for m in methods if (s, m) in grid]

    label_w = max(len(lbl) for lbl, _ in ROW_LABELS)
    col_w = max(8, *(len(s) for s in shapes))
    lines = []
    shape_cells = []
    for s in shapes:
        n = len([1 for c in cols if c[0] == s])
        shape_cells.append(s.center(col_w * n + (n - 1)))
    lines.append(" " * label_w + " | " + " | ".join(shape_cells))
    lines.append(" " * label_w + " | " + " | ".join(m.center(col_w) for _, m in cols))
    lines.append("-" * len(lines[-1]))
    for label, attr in ROW_LABELS:
        cells = [f"{getattr(grid[c], attr):.2f}".rjust(col_w) for c in cols]
        lines.append(label.ljust(label_w) + " | " + " | ".join(cells))
    return "\n".join(lines) + "\n"


def report_to_json(report: TraceReport, errors_cm=None, level: float = 0.95) -> str:
    doc = report.to_dict()
    if errors_cm is not None and len(errors_cm) >= 2:
        lo, hi = confidence_interval(np.asarray(errors_cm, dtype=float), level)
        doc["ci_level"] = level
        doc["ci_lo"] = lo
        doc["ci_hi"] = hi
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def save_report(path, report: TraceReport, errors_cm=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(report_to_json(report, errors_cm))


def save_comparison_figure(path, drawn: np.ndarray, truth: GroundTruthShape | np.ndarray,
                           report: TraceReport | None = None, title: str = "trace") -> None:
    """PNG overlay: ground truth in green, evaluated path dashed red."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    poly = truth.polyline() if isinstance(truth, GroundTruthShape) else np.asarray(truth)
    drawn = np.atleast_2d(np.asarray(drawn, dtype=float))
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.plot(poly[:, 0], poly[:, 1], "-", color="green", linewidth=2, label="target")
    ax.plot(drawn[:, 0], drawn[:, 1], "--", color="red", linewidth=1, label="drawn")
    ax.set_aspect("equal")
    ax.set_xlabel("x, m")
    ax.set_ylabel("z, m")
    if report is not None:
        title = f"{title}  mean {report.mean_error:.2f} cm / RMSE {report.rmse:.2f} cm"
    ax.set_title(title)
    ax.legend(loc="upper right")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_trace_figure(path, trace, title: str = "flight") -> None:
    """PNG of every drone's flown path projected on the painting plane."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 6))
    for i in range(trace.n_drones):
        ax.plot(trace.positions[:, i, 0], trace.positions[:, i, 2], linewidth=1, label=f"drone {i}")
    ax.set_aspect("equal")
    ax.set_xlabel("x, m")
    ax.set_ylabel("z, m")
    ax.set_title(title)
    ax.legend(loc="upper right")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
