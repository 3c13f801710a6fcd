"""Command-line front end."""

from __future__ import annotations

import argparse
import asyncio
from collections.abc import Mapping, Sequence
from functools import cache
import json
import logging
from pathlib import Path
from typing import Any

import numpy as np

from .config import SceneConfig, load_config
from .const import (
    FLAG_NON_LORENTZIAN,
    FLAG_NON_POSITIVE_INDEX,
    FLAG_OK,
    FLAG_SINGULAR_METRIC,
    FLAG_ZERO_G00,
    MODES,
)
from .diagnostics import format_report, run_suite, suite_passed
from .exceptions import (
    ConfigError,
    GeomOptError,
    MetricError,
    NonLorentzianError,
    NonNullLaunchError,
    NonPositiveIndexError,
    SingularMetricError,
    ZeroG00Error,
)
from .geometrize import (
    MetricField,
    constant_metric_field,
    coordinate_metric,
    isotropic_metric_from_index,
    plebanski_cartesian,
    plebanski_curvilinear,
)
from .output import (
    MaterialRow,
    MetricRow,
    material_summary,
    write_json,
    write_material_csv,
    write_metric_csv,
    write_ray_csv,
    write_rays_svg,
)
from .raytrace import MediumCatalogEntry, catalog_entry, launch_covector
from .sweep import async_trace_each, map_points
from .tensor_core import Metric4

_LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_ERROR = 2

_FLAGS: Mapping[type[GeomOptError], str] = {
    NonLorentzianError: FLAG_NON_LORENTZIAN,
    SingularMetricError: FLAG_SINGULAR_METRIC,
    ZeroG00Error: FLAG_ZERO_G00,
    NonPositiveIndexError: FLAG_NON_POSITIVE_INDEX,
}


@cache
def version() -> str:
    """Version from manifest.json."""
    manifest = Path(__file__).with_name("manifest.json")
    return json.loads(manifest.read_text(encoding="utf-8"))["version"]


def _flag(err: GeomOptError) -> str:
    return _FLAGS.get(type(err), type(err).__name__)


def _radius(system: str, point: np.ndarray) -> float:
    """Distance from the origin of a point given in the scene's coordinates."""
    if system == "spherical":
        return float(abs(point[0]))
    if system == "cylindrical":
        return float(np.hypot(point[0], point[2]))
    return float(np.linalg.norm(point))


def _medium(config: SceneConfig) -> MediumCatalogEntry | None:
    if config.medium is None:
        return None
    return catalog_entry(config.medium.name, **config.medium.parameters)


def _background(config: SceneConfig, point: np.ndarray) -> Metric4 | None:
    if config.coordinates == "cartesian":
        return None
    return coordinate_metric(config.coordinates, point)


def _scene_metric(config: SceneConfig, point: np.ndarray) -> Metric4:
    """Metric at a grid point: the explicit matrix, else the lifted medium."""
    if config.matrix is not None:
        return Metric4(np.array(config.matrix))
    entry = _medium(config)
    if entry is None:
        raise ConfigError("scene needs a metric matrix or a medium")
    return isotropic_metric_from_index(
        entry.index(_radius(config.coordinates, point)), _background(config, point)
    )


def cmd_geometrize(config: SceneConfig) -> int:
    """Write the material map and its summary."""
    if config.matrix is None and config.medium is None:
        raise ConfigError("geometrize needs a metric matrix or a medium")

    def row(point: np.ndarray) -> MaterialRow:
        coords = tuple(float(x) for x in point)
        try:
            g = _scene_metric(config, point)
            gamma = _background(config, point)
            res = plebanski_cartesian(g) if gamma is None else plebanski_curvilinear(g, gamma)
        except (MetricError, NonPositiveIndexError) as err:
            _LOGGER.warning("Flagging point %s: %s", coords, err)
            return MaterialRow(coords, None, _flag(err))
        return MaterialRow(coords, res.material, res.warnings[0] if res.warnings else FLAG_OK)

    rows = map_points(row, config.grid.points())
    write_material_csv(config.out_dir / "materials.csv", rows)
    write_json(config.out_dir / "materials.json", material_summary(rows))
    return EXIT_OK


def cmd_inverse(config: SceneConfig) -> int:
    """Write the metric map of an isotropic index profile."""
    entry = _medium(config)
    if entry is None:
        raise ConfigError("inverse needs a medium")

    def row(point: np.ndarray) -> MetricRow:
        coords = tuple(float(x) for x in point)
        try:
            n = entry.index(_radius(config.coordinates, point))
            g = isotropic_metric_from_index(n, _background(config, point))
        except (MetricError, NonPositiveIndexError) as err:
            _LOGGER.warning("Flagging point %s: %s", coords, err)
            return MetricRow(coords, None, _flag(err))
        return MetricRow(coords, g)

    write_metric_csv(config.out_dir / "metric.csv", map_points(row, config.grid.points()))
    return EXIT_OK


def _trace_field(config: SceneConfig) -> MetricField:
    if config.coordinates != "cartesian":
        raise ConfigError("trace works in cartesian coordinates")
    entry = _medium(config)
    if entry is not None:
        return entry.metric_field()
    if config.matrix is not None:
        return constant_metric_field(Metric4(np.array(config.matrix)), "matrix")
    raise ConfigError("trace needs a medium or a metric matrix")


def cmd_trace(config: SceneConfig) -> int:
    """Trace the configured rays, one CSV each plus a combined SVG."""
    field = _trace_field(config)
    rays = config.rays
    indices = []
    launches = []
    failed = 0
    for i, start in enumerate(rays.starts):
        try:
            k0 = launch_covector(field, start, rays.direction, rays.omega)
        except NonNullLaunchError as err:
            _LOGGER.error("Ray %s: %s", i, err)
            failed += 1
            continue
        indices.append(i)
        launches.append((np.concatenate(([0.0], start)), k0))

    results = asyncio.run(async_trace_each(field, launches, rays.step, rays.steps))
    trajectories = []
    for i, trajectory in zip(indices, results, strict=True):
        if trajectory is None:
            _LOGGER.error("Ray %s was not traced", i)
            failed += 1
            continue
        write_ray_csv(config.out_dir / f"ray_{i:03d}.csv", trajectory)
        trajectories.append(trajectory)
    if config.svg:
        write_rays_svg(
            config.out_dir / "rays.svg",
            trajectories,
            field.index,
            title=field.name,
            bounds=config.grid.bounds_xy() if config.grid_explicit else None,
        )
    return EXIT_VERIFICATION_FAILED if failed else EXIT_OK


def cmd_verify(config: SceneConfig) -> int:
    """Print the verification report."""
    results = run_suite(config.seed, config.draws, step=config.rays.step, c=config.c)
    print(format_report(results))
    return EXIT_OK if suite_passed(results) else EXIT_VERIFICATION_FAILED


COMMANDS = {
    "geometrize": cmd_geometrize,
    "inverse": cmd_inverse,
    "trace": cmd_trace,
    "verify": cmd_verify,
}


def _resolution(value: str) -> list[int]:
    try:
        counts = [int(part) for part in value.split(",")]
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"expected NX,NY,NZ, got {value!r}") from err
    if len(counts) != 3:
        raise argparse.ArgumentTypeError(f"expected NX,NY,NZ, got {value!r}")
    return counts


def _matrix(value: str) -> list[list[float]]:
    if value in ("eta", "minkowski"):
        return np.diag([1.0, -1.0, -1.0, -1.0]).tolist()
    try:
        return json.loads(value)
    except json.JSONDecodeError as err:
        raise argparse.ArgumentTypeError(f"--metric expects a JSON 4x4 matrix: {err.msg}") from err


def _medium_arg(value: str) -> dict[str, Any]:
    name, _, n = value.partition(":")
    if not n:
        return {"name": name}
    try:
        return {"name": name, "n": float(n)}
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"bad index in {value!r}") from err


def build_parser() -> argparse.ArgumentParser:
    """Argument parser for the geomopt command."""
    parser = argparse.ArgumentParser(
        prog="geomopt", description="Effective-metric optics: material maps, rays and checks."
    )
    parser.add_argument("command", nargs="?", choices=MODES, help="what to run")
    parser.add_argument("--config", type=Path, help="JSON scene file")
    parser.add_argument("--mode", choices=MODES, help="same as the command argument")
    parser.add_argument("--out-dir", type=Path, help="directory for CSV, JSON and SVG output")
    parser.add_argument("--seed", type=int, help="seed of the verification suite")
    parser.add_argument("--draws", type=int, help="random draws per verification check")
    parser.add_argument("--step", type=float, help="affine step of the ray integrator")
    parser.add_argument("--steps", type=int, help="number of integration steps")
    parser.add_argument("--grid", type=_resolution, help="grid resolution NX,NY,NZ")
    parser.add_argument("--metric", type=_matrix, help="constant metric as JSON, or 'eta'")
    parser.add_argument("--medium", type=_medium_arg, help="catalog medium, NAME or NAME:n")
    parser.add_argument("--c", type=float, help="speed of light")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    parser.add_argument("--version", action="version", version=f"%(prog)s {version()}")
    return parser


def _compact(data: Mapping[str, Any]) -> dict[str, Any]:
    """Drop None values and empty sections."""
    result: dict[str, Any] = {}
    for key, value in data.items():
        if isinstance(value, Mapping):
            value = _compact(value)
            if not value:
                continue
        if value is not None:
            result[key] = value
    return result


def overrides_from_args(args: argparse.Namespace) -> dict[str, Any]:
    """Scene keys set on the command line."""
    return _compact(
        {
            "mode": args.command or args.mode,
            "output": {"dir": None if args.out_dir is None else str(args.out_dir)},
            "seed": args.seed,
            "draws": args.draws,
            "rays": {"step": args.step, "steps": args.steps},
            "grid": {"resolution": args.grid},
            "metric": None if args.metric is None else {"matrix": args.metric},
            "medium": args.medium,
            "c": args.c,
        }
    )


def main(argv: Sequence[str] | None = None) -> int:
    """Run one command and return its exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = load_config(args.config, overrides_from_args(args))
        return COMMANDS[config.mode](config)
    except GeomOptError as err:
        _LOGGER.error("%s", err)
        return EXIT_ERROR
