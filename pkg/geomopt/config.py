"""Scene configuration: JSON file, schema validation and flag overrides."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
import json
import logging
from pathlib import Path
from typing import Any

import numpy as np
import voluptuous as vol

from .const import (
    COORDINATE_SYSTEMS,
    DEFAULT_C,
    DEFAULT_DRAWS,
    DEFAULT_SEED,
    DEFAULT_STEP,
    DEFAULT_STEPS,
    MODES,
)
from .exceptions import ConfigError

_LOGGER = logging.getLogger(__name__)

CONF_MODE = "mode"
CONF_METRIC = "metric"
CONF_MATRIX = "matrix"
CONF_MEDIUM = "medium"
CONF_NAME = "name"
CONF_INDEX = "n"
CONF_COORDINATES = "coordinates"
CONF_GRID = "grid"
CONF_ORIGIN = "origin"
CONF_EXTENT = "extent"
CONF_RESOLUTION = "resolution"
CONF_RAYS = "rays"
CONF_STARTS = "starts"
CONF_DIRECTION = "direction"
CONF_STEP = "step"
CONF_STEPS = "steps"
CONF_OMEGA = "omega"
CONF_OUTPUT = "output"
CONF_DIR = "dir"
CONF_SVG = "svg"
CONF_SEED = "seed"
CONF_DRAWS = "draws"
CONF_C = "c"

MEDIUM_NAMES = ("maxwell_fisheye", "luneburg", "homogeneous")

# Range also rejects NaN.
_number = vol.All(vol.Coerce(float), vol.Range(min=-1e300, max=1e300))
_positive = vol.All(vol.Coerce(float), vol.Range(min=0, min_included=False))


def _triple(item: Any) -> vol.All:
    return vol.All(vol.Length(min=3, max=3), [item])


_MATRIX = vol.All(
    vol.Length(min=4, max=4), [vol.All(vol.Length(min=4, max=4), [_number])]
)


def _sampled_axes(grid: dict[str, Any]) -> dict[str, Any]:
    """A non-zero extent needs at least two samples; a zero extent exactly one."""
    for axis, (extent, count) in enumerate(
        zip(grid[CONF_EXTENT], grid[CONF_RESOLUTION], strict=True)
    ):
        if extent != 0 and count < 2:
            raise vol.Invalid(
                f"axis {axis} has extent {extent} but only {count} point",
                path=[CONF_RESOLUTION, axis],
            )
        if extent == 0 and count != 1:
            raise vol.Invalid(
                f"axis {axis} has zero extent but {count} points",
                path=[CONF_RESOLUTION, axis],
            )
    return grid


GRID_SCHEMA = vol.All(
    vol.Schema(
        {
            vol.Optional(CONF_ORIGIN, default=[0.0, 0.0, 0.0]): _triple(_number),
            vol.Optional(CONF_EXTENT, default=[1.0, 1.0, 0.0]): _triple(
                vol.All(vol.Coerce(float), vol.Range(min=0))
            ),
            vol.Optional(CONF_RESOLUTION, default=[2, 2, 1]): _triple(
                vol.All(int, vol.Range(min=1))
            ),
        }
    ),
    _sampled_axes,
)

MEDIUM_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_NAME): vol.In(MEDIUM_NAMES),
        vol.Optional(CONF_INDEX): _positive,
    }
)

RAYS_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_STARTS, default=[[-2.0, 0.0, 0.0]]): [_triple(_number)],
        vol.Optional(CONF_DIRECTION, default=[1.0, 0.0, 0.0]): _triple(_number),
        vol.Optional(CONF_STEP, default=DEFAULT_STEP): _positive,
        vol.Optional(CONF_STEPS, default=DEFAULT_STEPS): vol.All(int, vol.Range(min=1)),
        vol.Optional(CONF_OMEGA, default=1.0): _positive,
    }
)

SCENE_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_MODE, default="verify"): vol.In(MODES),
        vol.Optional(CONF_METRIC): vol.Schema({vol.Required(CONF_MATRIX): _MATRIX}),
        vol.Optional(CONF_MEDIUM): MEDIUM_SCHEMA,
        vol.Optional(CONF_COORDINATES, default="cartesian"): vol.In(COORDINATE_SYSTEMS),
        vol.Optional(CONF_GRID, default={}): GRID_SCHEMA,
        vol.Optional(CONF_RAYS, default={}): RAYS_SCHEMA,
        vol.Optional(CONF_OUTPUT, default={}): vol.Schema(
            {
                vol.Optional(CONF_DIR, default="out"): str,
                vol.Optional(CONF_SVG, default=True): bool,
            }
        ),
        vol.Optional(CONF_SEED, default=DEFAULT_SEED): vol.All(int, vol.Range(min=0)),
        vol.Optional(CONF_DRAWS, default=DEFAULT_DRAWS): vol.All(int, vol.Range(min=1)),
        vol.Optional(CONF_C, default=DEFAULT_C): _positive,
    }
)


@dataclass(frozen=True)
class MediumSpec:
    """Catalog medium named in a scene."""

    name: str
    n: float | None = None

    @property
    def parameters(self) -> dict[str, float]:
        """Keyword arguments for raytrace.catalog_entry."""
        return {} if self.n is None else {"n": self.n}


@dataclass(frozen=True)
class GridConfig:
    """Sampling grid over the spatial coordinates of the scene."""

    origin: tuple[float, float, float]
    extent: tuple[float, float, float]
    resolution: tuple[int, int, int]

    def points(self) -> np.ndarray:
        """All grid points as rows, x varying slowest."""
        axes = [
            o + np.linspace(0.0, e, n)
            for o, e, n in zip(self.origin, self.extent, self.resolution, strict=True)
        ]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack(mesh, axis=-1).reshape(-1, 3)

    def bounds_xy(self) -> tuple[tuple[float, float], tuple[float, float]]:
        """((x_min, y_min), (x_max, y_max)) of the grid."""
        (x0, y0, _), (dx, dy, _) = self.origin, self.extent
        return (x0, y0), (x0 + dx, y0 + dy)


@dataclass(frozen=True)
class RayConfig:
    """Launch points, direction and integration settings."""

    starts: tuple[tuple[float, float, float], ...]
    direction: tuple[float, float, float]
    step: float = DEFAULT_STEP
    steps: int = DEFAULT_STEPS
    omega: float = 1.0


@dataclass(frozen=True)
class SceneConfig:
    """Validated scene."""

    mode: str
    grid: GridConfig
    rays: RayConfig
    out_dir: Path
    coordinates: str = "cartesian"
    matrix: tuple[tuple[float, ...], ...] | None = None
    medium: MediumSpec | None = None
    svg: bool = True
    seed: int = DEFAULT_SEED
    draws: int = DEFAULT_DRAWS
    c: float = DEFAULT_C
    grid_explicit: bool = False


def _merge(base: dict[str, Any], overrides: Mapping[str, Any]) -> dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), Mapping):
            merged[key] = _merge(dict(merged[key]), value)
        elif value is not None:
            merged[key] = value
    return merged


def _path(err: vol.Invalid) -> str:
    return ".".join(str(part) for part in err.path) or "<root>"


def validate(data: Mapping[str, Any]) -> SceneConfig:
    """Validate a raw scene mapping."""
    try:
        conf = SCENE_SCHEMA(dict(data))
    except vol.MultipleInvalid as err:
        raise ConfigError(
            "; ".join(f"{_path(e)}: {e.msg}" for e in err.errors)
        ) from err
    except vol.Invalid as err:
        raise ConfigError(f"{_path(err)}: {err.msg}") from err

    grid, rays, output = conf[CONF_GRID], conf[CONF_RAYS], conf[CONF_OUTPUT]
    medium = conf.get(CONF_MEDIUM)
    metric = conf.get(CONF_METRIC)
    return SceneConfig(
        mode=conf[CONF_MODE],
        grid=GridConfig(
            tuple(grid[CONF_ORIGIN]), tuple(grid[CONF_EXTENT]), tuple(grid[CONF_RESOLUTION])
        ),
        rays=RayConfig(
            tuple(tuple(s) for s in rays[CONF_STARTS]),
            tuple(rays[CONF_DIRECTION]),
            rays[CONF_STEP],
            rays[CONF_STEPS],
            rays[CONF_OMEGA],
        ),
        out_dir=Path(output[CONF_DIR]),
        coordinates=conf[CONF_COORDINATES],
        matrix=None if metric is None else tuple(tuple(r) for r in metric[CONF_MATRIX]),
        medium=None if medium is None else MediumSpec(medium[CONF_NAME], medium.get(CONF_INDEX)),
        svg=output[CONF_SVG],
        seed=conf[CONF_SEED],
        draws=conf[CONF_DRAWS],
        c=conf[CONF_C],
        grid_explicit=CONF_GRID in data,
    )


def load_config(
    path: str | Path | None = None, overrides: Mapping[str, Any] | None = None
) -> SceneConfig:
    """Read a JSON scene (or start empty), apply overrides and validate."""
    data: dict[str, Any] = {}
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as err:
            raise ConfigError(f"cannot read {path}: {err.strerror}") from err
        try:
            data = json.loads(text)
        except json.JSONDecodeError as err:
            raise ConfigError(f"{path}: line {err.lineno}: {err.msg}") from err
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top level must be an object")
    if overrides:
        data = _merge(data, overrides)
    _LOGGER.debug("Scene configuration: %s", data)
    return validate(data)
