"""CSV, JSON and SVG writers for material maps, metric maps and rays."""

from __future__ import annotations

from collections import Counter
from collections.abc import Callable, Iterable, Sequence
import csv
from dataclasses import dataclass
import json
import logging
from pathlib import Path

import matplotlib
from matplotlib.figure import Figure
import numpy as np

from .const import (
    FLAG_OK,
    MATERIAL_CSV_HEADER,
    METRIC_CSV_HEADER,
    RAY_CSV_HEADER,
    SVG_CONTOUR_LEVELS,
    SVG_DPI,
    SVG_SIZE_PX,
)
from .constitutive import MaterialTensors
from .raytrace import Trajectory
from .tensor_core import Metric4

_LOGGER = logging.getLogger(__name__)

_UPPER_TRIANGLE = np.triu_indices(4)


@dataclass(frozen=True)
class MaterialRow:
    """One grid point of a material map; material is None on flagged rows."""

    point: tuple[float, float, float]
    material: MaterialTensors | None
    flag: str = FLAG_OK


@dataclass(frozen=True)
class MetricRow:
    """One grid point of a metric map; metric is None on flagged rows."""

    point: tuple[float, float, float]
    metric: Metric4 | None
    flag: str = FLAG_OK


def format_number(value: float) -> str:
    """Round-trip decimal text."""
    return format(float(value), ".17g")


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[str]]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    _LOGGER.debug("Wrote %s", path)
    return path


def _numbers(values: Iterable[float]) -> list[str]:
    return [format_number(v) for v in values]


def write_material_csv(path: Path, rows: Sequence[MaterialRow]) -> Path:
    """x, y, z, eps11..eps33, mu11..mu33, w1..w3, flag."""
    width = len(MATERIAL_CSV_HEADER) - 4

    def render(row: MaterialRow) -> list[str]:
        if row.material is None:
            values = ["nan"] * width
        else:
            m = row.material
            values = _numbers(np.concatenate((m.eps.ravel(), m.mu.ravel(), m.w)))
        return [*_numbers(row.point), *values, row.flag]

    return _write_csv(path, MATERIAL_CSV_HEADER, (render(r) for r in rows))


def write_metric_csv(path: Path, rows: Sequence[MetricRow]) -> Path:
    """x, y, z, the ten independent g_ab, flag."""
    width = len(METRIC_CSV_HEADER) - 4

    def render(row: MetricRow) -> list[str]:
        if row.metric is None:
            values = ["nan"] * width
        else:
            values = _numbers(row.metric.components[_UPPER_TRIANGLE])
        return [*_numbers(row.point), *values, row.flag]

    return _write_csv(path, METRIC_CSV_HEADER, (render(r) for r in rows))


def write_ray_csv(path: Path, trajectory: Trajectory) -> Path:
    """lambda, t, x, y, z, kt, kx, ky, kz, H."""
    return _write_csv(path, RAY_CSV_HEADER, (_numbers(r) for r in trajectory.rows()))


def material_summary(rows: Sequence[MaterialRow]) -> dict[str, object]:
    """Eigenvalue range and anisotropy of eps over the valid rows, plus flag counts."""
    eigenvalues = [
        np.linalg.eigvalsh(row.material.eps) for row in rows if row.material is not None
    ]
    summary: dict[str, object] = {
        "points": len(rows),
        "flags": dict(sorted(Counter(row.flag for row in rows).items())),
    }
    if eigenvalues:
        values = np.array(eigenvalues)
        spread = np.abs(values[:, -1]) / np.maximum(np.abs(values[:, 0]), np.finfo(float).tiny)
        summary["eps_eigenvalues"] = {
            "min": float(values.min()),
            "max": float(values.max()),
        }
        summary["anisotropy"] = {"max": float(spread.max()), "mean": float(spread.mean())}
    return summary


def write_json(path: Path, data: dict[str, object]) -> Path:
    """Indented JSON with sorted keys."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


Bounds = tuple[tuple[float, float], tuple[float, float]]


def view_box(
    trajectories: Sequence[Trajectory], bounds: Bounds | None = None
) -> tuple[np.ndarray, float]:
    """Centre and half-width of the square x-y view.

    With bounds the view is the grid box, else it is fitted to the rays with a margin.
    """
    if bounds is not None:
        low, high = np.asarray(bounds[0], dtype=float), np.asarray(bounds[1], dtype=float)
        span = float(np.max(high - low))
        return 0.5 * (low + high), (0.5 * span if span > 0 else 0.5)
    points = (
        np.concatenate([t.x[:, 1:3] for t in trajectories])
        if trajectories
        else np.zeros((1, 2))
    )
    low, high = points.min(axis=0), points.max(axis=0)
    return 0.5 * (low + high), 0.55 * max(float(np.max(high - low)), 1.0)


def write_rays_svg(
    path: Path,
    trajectories: Sequence[Trajectory],
    index: Callable[[float], float] | None = None,
    *,
    title: str | None = None,
    bounds: Bounds | None = None,
) -> Path:
    """Rays as polylines in the x-y plane over iso-index contours of n(r)."""
    center, half = view_box(trajectories, bounds)

    size = SVG_SIZE_PX / SVG_DPI
    fig = Figure(figsize=(size, size), dpi=SVG_DPI)
    ax = fig.add_axes((0.0, 0.0, 1.0, 1.0))
    ax.set_xlim(center[0] - half, center[0] + half)
    ax.set_ylim(center[1] - half, center[1] + half)
    ax.set_aspect("equal")
    ax.set_axis_off()

    if index is not None:
        xs = np.linspace(center[0] - half, center[0] + half, 200)
        ys = np.linspace(center[1] - half, center[1] + half, 200)
        grid_x, grid_y = np.meshgrid(xs, ys)
        n = np.vectorize(index)(np.hypot(grid_x, grid_y))
        if np.ptp(n) > 0:
            ax.contour(grid_x, grid_y, n, levels=SVG_CONTOUR_LEVELS, colors="0.7", linewidths=0.5)
    for trajectory in trajectories:
        ax.plot(trajectory.x[:, 1], trajectory.x[:, 2], color="C0", linewidth=1)
    if title:
        ax.text(0.02, 0.98, title, transform=ax.transAxes, va="top")

    path.parent.mkdir(parents=True, exist_ok=True)
    with matplotlib.rc_context({"svg.hashsalt": "geomopt"}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    return path
