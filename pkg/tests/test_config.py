"""Tests for the scene configuration."""

import json
from pathlib import Path

import numpy as np
import pytest

from geomopt.config import MediumSpec, load_config, validate
from geomopt.const import DEFAULT_DRAWS, DEFAULT_SEED, DEFAULT_STEP, DEFAULT_STEPS
from geomopt.exceptions import ConfigError


def test_defaults():
    """Test an empty scene."""
    config = load_config()
    assert config.mode == "verify"
    assert config.seed == DEFAULT_SEED
    assert config.draws == DEFAULT_DRAWS
    assert config.c == 1.0
    assert config.coordinates == "cartesian"
    assert config.out_dir == Path("out")
    assert config.svg is True
    assert config.matrix is None
    assert config.medium is None
    assert config.grid.resolution == (2, 2, 1)
    assert config.rays.step == DEFAULT_STEP
    assert config.rays.steps == DEFAULT_STEPS
    assert config.rays.starts == ((-2.0, 0.0, 0.0),)


def test_load_file(fixture_path):
    """Test reading a scene file."""
    config = load_config(fixture_path("geometrize_eta.json"))
    assert config.mode == "geometrize"
    assert config.matrix[0] == (1.0, 0.0, 0.0, 0.0)
    assert config.matrix[3][3] == -1.0
    assert config.svg is False
    assert config.grid.extent == (1.0, 1.0, 0.0)


def test_load_medium(fixture_path):
    """Test a catalog medium."""
    config = load_config(fixture_path("trace_fisheye.json"))
    assert config.medium == MediumSpec("maxwell_fisheye")
    assert config.medium.parameters == {}
    assert config.rays.starts == ((0.5, 0.0, 0.0), (0.25, 0.0, 0.0))
    assert config.rays.direction == (0.0, 1.0, 0.0)
    assert config.rays.steps == 700


def test_overrides_merge(fixture_path):
    """Test that overrides replace single keys inside sections."""
    config = load_config(
        fixture_path("geometrize_eta.json"),
        {"grid": {"resolution": [3, 2, 1]}, "seed": 7, "output": {"dir": "elsewhere"}},
    )
    assert config.grid.resolution == (3, 2, 1)
    assert config.grid.extent == (1.0, 1.0, 0.0)
    assert config.seed == 7
    assert config.out_dir == Path("elsewhere")
    assert config.svg is False


def test_overrides_skip_none():
    """Test that None overrides keep the file value."""
    config = load_config(None, {"mode": "trace", "seed": None})
    assert config.mode == "trace"
    assert config.seed == DEFAULT_SEED


def test_medium_index():
    """Test the homogeneous index parameter."""
    config = validate({"medium": {"name": "homogeneous", "n": 2}})
    assert config.medium.parameters == {"n": 2.0}


def test_grid_points():
    """Test grid points with x varying slowest."""
    config = validate({"grid": {"origin": [1, 0, 0], "extent": [1, 1, 0], "resolution": [2, 2, 1]}})
    np.testing.assert_array_equal(
        config.grid.points(),
        [[1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [2.0, 0.0, 0.0], [2.0, 1.0, 0.0]],
    )


@pytest.mark.parametrize(
    ("data", "key"),
    [
        ({"mode": "render"}, "mode"),
        ({"metric": {"matrix": [[1, 0, 0], [0, -1, 0], [0, 0, -1]]}}, "metric.matrix"),
        ({"metric": {}}, "metric.matrix"),
        ({"medium": {"name": "eaton"}}, "medium.name"),
        ({"medium": {"name": "homogeneous", "n": -1}}, "medium.n"),
        ({"coordinates": "polar"}, "coordinates"),
        ({"grid": {"resolution": [1, 2, 1]}}, "grid.resolution.0"),
        ({"grid": {"extent": [1, 1, 0], "resolution": [2, 2, 3]}}, "grid.resolution.2"),
        ({"rays": {"step": 0}}, "rays.step"),
        ({"draws": 0}, "draws"),
        ({"c": -1.0}, "c"),
        ({"colour": "red"}, "colour"),
    ],
)
def test_invalid_scene(data, key):
    """Test that validation errors name the offending key."""
    with pytest.raises(ConfigError, match=key.replace(".", r"\.")):
        validate(data)


def test_invalid_json(tmp_path):
    """Test that JSON syntax errors report the line."""
    path = tmp_path / "scene.json"
    path.write_text('{\n  "mode": "verify",\n  "seed": \n}\n', encoding="utf-8")
    with pytest.raises(ConfigError, match="line 4"):
        load_config(path)


def test_non_object_json(tmp_path):
    """Test that the top level must be an object."""
    path = tmp_path / "scene.json"
    path.write_text(json.dumps([1, 2, 3]), encoding="utf-8")
    with pytest.raises(ConfigError, match="object"):
        load_config(path)


def test_missing_file(tmp_path):
    """Test that an unreadable file is a configuration error."""
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.json")


def test_grid_explicit():
    """Test that only a declared grid is marked explicit."""
    assert not validate({}).grid_explicit
    grid = {"origin": [-1, -2, 0], "extent": [3, 4, 0], "resolution": [2, 2, 1]}
    config = validate({"grid": grid})
    assert config.grid_explicit
    assert config.grid.bounds_xy() == ((-1.0, -2.0), (2.0, 2.0))
