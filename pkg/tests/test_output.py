"""Tests for the CSV, JSON and SVG writers."""

import csv
import json

import numpy as np
import pytest

from geomopt.const import (
    FLAG_NON_LORENTZIAN,
    MATERIAL_CSV_HEADER,
    METRIC_CSV_HEADER,
    RAY_CSV_HEADER,
)
from geomopt.constitutive import MaterialTensors
from geomopt.geometrize import isotropic_metric_from_index
from geomopt.output import (
    MaterialRow,
    MetricRow,
    format_number,
    material_summary,
    view_box,
    write_json,
    write_material_csv,
    write_metric_csv,
    write_ray_csv,
    write_rays_svg,
)
from geomopt.raytrace import Trajectory, maxwell_fisheye_index


def _read(path):
    with path.open(encoding="utf-8", newline="") as handle:
        return list(csv.reader(handle))


def _trajectory():
    lam = np.linspace(0.0, 1.0, 5)
    x = np.column_stack((lam, np.cos(lam), np.sin(lam), np.zeros(5)))
    k = np.tile([1.0, -1.0, 0.0, 0.0], (5, 1))
    return Trajectory(lam, x, k, np.zeros(5))


def test_format_number():
    """Test round-trip number text."""
    assert format_number(0.1) == "0.10000000000000001"
    assert float(format_number(1 / 3)) == 1 / 3
    assert format_number(2.0) == "2"


def test_material_csv(tmp_path):
    """Test the material table, including a flagged row."""
    rows = [
        MaterialRow(
            (0.0, 0.0, 0.0),
            MaterialTensors(2.0 * np.eye(3), 2.0 * np.eye(3), np.zeros(3)),
        ),
        MaterialRow((1.0, 0.0, 0.0), None, FLAG_NON_LORENTZIAN),
    ]
    path = write_material_csv(tmp_path / "sub" / "materials.csv", rows)
    table = _read(path)
    assert table[0] == MATERIAL_CSV_HEADER
    assert len(table) == 3
    assert table[1][3] == "2"
    assert table[1][4] == "0"
    assert table[1][-1] == "ok"
    assert table[2][3:-1] == ["nan"] * 21
    assert table[2][-1] == FLAG_NON_LORENTZIAN
    assert path.read_text(encoding="utf-8").endswith("\n")
    assert "\r" not in path.read_text(encoding="utf-8")


def test_metric_csv(tmp_path):
    """Test the upper-triangle metric table."""
    rows = [MetricRow((0.0, 0.0, 0.0), isotropic_metric_from_index(2.0))]
    table = _read(write_metric_csv(tmp_path / "metric.csv", rows))
    assert table[0] == METRIC_CSV_HEADER
    values = dict(zip(table[0], table[1], strict=True))
    assert values["g00"] == "1"
    assert values["g11"] == "-4"
    assert values["g33"] == "-4"
    assert values["g01"] == "0"
    assert values["flag"] == "ok"


def test_ray_csv(tmp_path):
    """Test the ray table."""
    table = _read(write_ray_csv(tmp_path / "ray_000.csv", _trajectory()))
    assert table[0] == RAY_CSV_HEADER
    assert len(table) == 6
    assert table[1][:3] == ["0", "0", "1"]
    assert table[-1][0] == "1"


def test_material_summary():
    """Test eigenvalue range, anisotropy and flag counts."""
    rows = [
        MaterialRow(
            (0.0, 0.0, 0.0),
            MaterialTensors(np.diag([0.5, 2.0, 2.0]), np.eye(3), np.zeros(3)),
        ),
        MaterialRow((1.0, 0.0, 0.0), MaterialTensors.vacuum()),
        MaterialRow((2.0, 0.0, 0.0), None, FLAG_NON_LORENTZIAN),
    ]
    summary = material_summary(rows)
    assert summary["points"] == 3
    assert summary["flags"] == {FLAG_NON_LORENTZIAN: 1, "ok": 2}
    assert summary["eps_eigenvalues"] == pytest.approx({"min": 0.5, "max": 2.0})
    assert summary["anisotropy"] == pytest.approx({"max": 4.0, "mean": 2.5})


def test_material_summary_all_flagged():
    """Test a summary without valid rows."""
    summary = material_summary([MaterialRow((0.0, 0.0, 0.0), None, FLAG_NON_LORENTZIAN)])
    assert summary == {"points": 1, "flags": {FLAG_NON_LORENTZIAN: 1}}


def test_write_json(tmp_path):
    """Test indented JSON with sorted keys."""
    path = write_json(tmp_path / "summary.json", {"b": 1, "a": [1, 2]})
    text = path.read_text(encoding="utf-8")
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": [1, 2], "b": 1}


def test_rays_svg(tmp_path):
    """Test that the ray plot is a reproducible SVG."""
    first, second = (
        write_rays_svg(
            tmp_path / name, [_trajectory()], maxwell_fisheye_index, title="fisheye"
        )
        for name in ("a.svg", "b.svg")
    )
    text = first.read_text(encoding="utf-8")
    assert "<svg" in text
    assert first.read_bytes() == second.read_bytes()


def test_rays_svg_without_rays(tmp_path):
    """Test an empty plot."""
    path = write_rays_svg(tmp_path / "empty.svg", [])
    assert "<svg" in path.read_text(encoding="utf-8")


def test_view_box_from_grid():
    """Test that grid bounds set the view regardless of the rays."""
    center, half = view_box([_trajectory()], ((0.0, 0.0), (2.0, 1.0)))
    np.testing.assert_array_equal(center, [1.0, 0.5])
    assert half == 1.0
    center, half = view_box([], ((1.0, 1.0), (1.0, 1.0)))
    np.testing.assert_array_equal(center, [1.0, 1.0])
    assert half == 0.5


def test_view_box_from_rays():
    """Test the fitted view without grid bounds."""
    center, half = view_box([_trajectory()])
    ray = _trajectory().x[:, 1:3]
    np.testing.assert_allclose(center, 0.5 * (ray.min(axis=0) + ray.max(axis=0)))
    assert half == pytest.approx(0.55)
