import json

import numpy as np

from swarmpaint.metrics import GroundTruthShape, TraceReport, trace_errors
from swarmpaint.report import format_report_grid, report_to_json, save_comparison_figure


def sample_report(mean=6.45, rmse=8.09, mx=18.61, dur=15.5):
    return TraceReport(max_error=mx, mean_error=mean, rmse=rmse, duration=dur, n_samples=100)


def test_grid_has_standard_row_labels():
    grid = {
        ("Square", "hand"): sample_report(),
        ("Square", "mouse"): sample_report(3.69, 4.61, 10.51, 5.52),
        ("Circle", "hand"): sample_report(6.33, 7.85, 17.36, 13.47),
    }
    text = format_report_grid(grid)
    for label in ("Max error, cm", "Mean error, cm", "RMSE, cm", "Time, sec"):
        assert label in text
    assert "Square" in text and "Circle" in text
    assert "hand" in text and "mouse" in text
    assert "6.45" in text and "3.69" in text


def test_grid_column_order_follows_insertion():
    grid = {
        ("Triangle", "hand"): sample_report(),
        ("Square", "hand"): sample_report(),
    }
    text = format_report_grid(grid)
    assert text.index("Triangle") < text.index("Square")


def test_report_json_includes_ci():
    doc = json.loads(report_to_json(sample_report(), errors_cm=[5.0, 6.0, 7.0, 8.0]))
    assert doc["mean_error"] == 6.45
    assert doc["ci_lo"] < doc["ci_hi"]
    assert doc["ci_level"] == 0.95


def test_comparison_figure_written(tmp_path):
    truth = GroundTruthShape("SQUARE", 1.0, (0.0, 1.5))
    poly = truth.polyline()
    drawn = np.column_stack([poly + 0.01, np.linspace(0, 5, len(poly))])
    report = trace_errors(drawn, truth)
    out = tmp_path / "figure.png"
    save_comparison_figure(out, drawn, truth, report)
    data = out.read_bytes()
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    assert len(data) > 1000
