"""Tests for ray tracing."""

import logging

import numpy as np
import pytest

from geomopt.exceptions import NonNullLaunchError
from geomopt.geometrize import constant_metric_field
from geomopt.raytrace import (
    Trajectory,
    catalog,
    catalog_entry,
    circle_fit,
    closure_distance,
    crossing_point,
    hamiltonian,
    launch_covector,
    launch_tolerance,
    luneburg_index,
    maxwell_fisheye_index,
    parallel_launches,
    project_null,
    trace_fan,
    trace_ray,
)
from geomopt.tensor_core import Metric4


@pytest.fixture
def flat():
    """Homogeneous medium with n = 1."""
    return catalog_entry("homogeneous", n=1.0).metric_field()


def test_hamiltonian_examples(eta):
    """Test H for flat and slow media."""
    assert hamiltonian(eta, [1.0, 1.0, 0.0, 0.0]) == 0.0
    assert hamiltonian(eta, [1.0, 0.0, 0.0, 0.0]) == 0.5
    assert hamiltonian(np.diag([1.0, -0.25, -1.0, -1.0]), [1.0, 2.0, 0.0, 0.0]) == 0.0


def test_catalog_profiles():
    """Test the index profiles at their reference radii."""
    assert luneburg_index(0.0) == pytest.approx(np.sqrt(2.0))
    assert luneburg_index(1.0) == 1.0
    assert luneburg_index(2.0) == 1.0
    assert maxwell_fisheye_index(0.0) == 2.0
    assert maxwell_fisheye_index(1.0) == 1.0


def test_catalog_entries():
    """Test the catalog names and lookups."""
    assert [entry.name for entry in catalog()] == ["maxwell_fisheye", "luneburg", "homogeneous"]
    lens = catalog_entry("luneburg")
    assert lens.interfaces == (1.0,)
    assert lens.metric_field().interfaces == (1.0,)
    slow = catalog_entry("homogeneous", n=2.0)
    assert slow.index(5.0) == 2.0
    assert slow.parameters == {"n": 2.0}
    with pytest.raises(KeyError):
        catalog_entry("eaton")


def test_launch_covector_index_field():
    """Test k = (omega, -n omega d) in an index medium."""
    metric_field = catalog_entry("homogeneous", n=2.0).metric_field()
    k = launch_covector(metric_field, np.zeros(3), [0.0, 3.0, 0.0], omega=2.0)
    np.testing.assert_allclose(k, [2.0, 0.0, -4.0, 0.0])
    assert hamiltonian(metric_field.inverse(np.zeros(3)), k) == pytest.approx(0.0, abs=1e-15)


def test_launch_covector_general_metric(mixed_metric):
    """Test the null condition for a metric with a time-space term."""
    metric_field = constant_metric_field(mixed_metric)
    for direction in ([1.0, 0.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 1.0, 1.0]):
        k = launch_covector(metric_field, np.zeros(3), direction)
        assert k[0] == 1.0
        assert hamiltonian(mixed_metric.inverse, k) == pytest.approx(0.0, abs=1e-12)
        velocity = mixed_metric.inverse @ k
        assert velocity[0] > 0


def test_launch_covector_zero_direction(flat):
    """Test that a launch needs a direction."""
    with pytest.raises(ValueError):
        launch_covector(flat, np.zeros(3), np.zeros(3))


def test_project_null(eta):
    """Test rescaling the spatial part onto the light cone."""
    g_inv = np.diag([1.0, -0.25, -1.0, -1.0])
    k = project_null(g_inv, [1.0, 0.5, 0.0, 0.0])
    np.testing.assert_allclose(k, [1.0, 2.0, 0.0, 0.0])
    with pytest.raises(NonNullLaunchError):
        project_null(eta.components, [1.0, 0.0, 0.0, 0.0])


def test_trace_straight_line(flat):
    """Test that vacuum rays are straight and keep their covector."""
    k0 = launch_covector(flat, np.zeros(3), [1.0, 1.0, 0.0])
    ray = trace_ray(flat, np.zeros(4), k0, 0.01, 100)
    assert isinstance(ray, Trajectory)
    assert len(ray) == 101
    expected = np.outer(ray.lam, np.diag([1.0, -1.0, -1.0, -1.0]) @ k0)
    np.testing.assert_allclose(ray.x, expected, atol=1e-12)
    np.testing.assert_allclose(ray.k, np.tile(k0, (101, 1)), atol=1e-15)
    assert ray.max_null_drift < 1e-15
    assert not ray.exited_domain


def test_trace_slow_medium():
    """Test that rays move at c / n in a homogeneous medium."""
    metric_field = catalog_entry("homogeneous", n=2.0).metric_field()
    k0 = launch_covector(metric_field, np.zeros(3), [1.0, 0.0, 0.0])
    ray = trace_ray(metric_field, np.zeros(4), k0, 0.01, 50)
    speed = (ray.x[-1, 1] - ray.x[0, 1]) / (ray.x[-1, 0] - ray.x[0, 0])
    assert speed == pytest.approx(0.5)


def test_trajectory_rows(flat):
    """Test the row layout and indexing of a trajectory."""
    k0 = launch_covector(flat, np.zeros(3), [0.0, 1.0, 0.0])
    ray = trace_ray(flat, np.zeros(4), k0, 0.1, 3)
    rows = ray.rows()
    assert rows.shape == (4, 10)
    np.testing.assert_allclose(rows[:, 0], [0.0, 0.1, 0.2, 0.3])
    state = ray[2]
    assert state.lam == pytest.approx(0.2)
    np.testing.assert_array_equal(state.x, rows[2, 1:5])
    np.testing.assert_array_equal(state.k, rows[2, 5:9])


def test_trace_rejects_non_null_launch(flat):
    """Test that launches off the light cone are refused."""
    with pytest.raises(NonNullLaunchError):
        trace_ray(flat, np.zeros(4), [1.0, 0.5, 0.0, 0.0], 0.01, 10)


def test_trace_rejects_scaled_non_null_launch(flat):
    """Test that the relative bound still refuses a large off-cone covector."""
    with pytest.raises(NonNullLaunchError):
        trace_ray(flat, np.zeros(4), 1e4 * np.array([1.0, 0.5, 0.0, 0.0]), 1e-7, 2)


def test_launch_tolerance(eta):
    """Test that the launch bound grows with |k|^2 max|g^ab| but not below null_tol."""
    assert launch_tolerance(eta.components, [1.0, 1.0, 0.0, 0.0], 1e-9) == pytest.approx(2e-9)
    assert launch_tolerance(eta.components, [1e-3, 0.0, 0.0, 0.0], 1e-9) == 1e-9
    g_inv = np.diag([1.0, -0.25, -0.25, -0.25])
    assert launch_tolerance(g_inv, [1e4, 2e4, 0.0, 0.0], 1e-9) == pytest.approx(0.5)


@pytest.mark.parametrize("n", [1.3, 1.7, 2.9])
@pytest.mark.parametrize("omega", [1.0, 1e3, 1e4, 1e5])
def test_trace_high_frequency_launch(n, omega):
    """Test that a launch_covector result is accepted at any frequency."""
    metric_field = catalog_entry("homogeneous", n=n).metric_field()
    k0 = launch_covector(metric_field, np.zeros(3), [1.0, 0.0, 0.0], omega)
    ray = trace_ray(metric_field, np.zeros(4), k0, 1e-7, 5)
    assert len(ray.lam) == 6
    assert not ray.exited_domain


def test_trace_projects_launch():
    """Test that project moves the launch onto the light cone."""
    metric_field = catalog_entry("homogeneous", n=2.0).metric_field()
    ray = trace_ray(metric_field, np.zeros(4), [1.0, 0.5, 0.0, 0.0], 0.01, 10, project=True)
    np.testing.assert_allclose(ray.k[0], [1.0, 2.0, 0.0, 0.0])
    assert ray.max_null_drift < 1e-12


def test_trace_argument_checks(flat):
    """Test the step checks."""
    k0 = launch_covector(flat, np.zeros(3), [1.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        trace_ray(flat, np.zeros(4), k0, 0.0, 10)
    with pytest.raises(ValueError):
        trace_ray(flat, np.zeros(4), k0, 0.1, -1)


def test_trace_leaves_domain(flat, caplog):
    """Test that a ray leaving the domain stops with a flag."""
    start = np.array([9.5, 0.0, 0.0])
    k0 = launch_covector(flat, start, [1.0, 0.0, 0.0])
    with caplog.at_level(logging.WARNING, logger="geomopt.raytrace"):
        ray = trace_ray(flat, np.concatenate(([0.0], start)), k0, 0.1, 20)
    assert ray.exited_domain
    assert len(ray) < 21
    assert np.linalg.norm(ray.x[-1, 1:]) > 10.0
    assert "left the domain" in caplog.text


def test_fisheye_circle():
    """Test that fish-eye rays are closed circles through antipodal points."""
    fisheye = catalog_entry("maxwell_fisheye").metric_field()
    start = np.array([0.5, 0.0, 0.0])
    k0 = launch_covector(fisheye, start, [0.0, 1.0, 0.0])
    step = 2e-3
    ray = trace_ray(fisheye, np.concatenate(([0.0], start)), k0, step, int(1.05 * 2 * np.pi / step))
    center, radius, deviation = circle_fit(ray.x[:, 1:3])
    np.testing.assert_allclose(center, [-0.75, 0.0], atol=1e-4)
    assert radius == pytest.approx(1.25, abs=1e-4)
    assert deviation < 1e-3
    assert closure_distance(ray, start, after=np.pi) < 1e-2
    assert ray.max_null_drift < 1e-6
    np.testing.assert_allclose(ray.x[:, 3], 0.0, atol=1e-12)


def test_luneburg_focus():
    """Test that a parallel bundle focuses on the far rim of the lens."""
    lens = catalog_entry("luneburg").metric_field()
    starts = [(-2.0, y, 0.0) for y in np.linspace(-0.8, 0.8, 11)]
    fan = trace_fan(lens, parallel_launches(lens, starts, (1.0, 0.0, 0.0)), 1e-3, 4500)
    assert len(fan) == 11
    for ray in fan:
        exit_point = crossing_point(ray, 1.0)
        assert exit_point is not None
        assert np.linalg.norm(exit_point - (1.0, 0.0, 0.0)) < 1e-2
        assert ray.max_null_drift < 1e-6
        np.testing.assert_allclose(ray.k[:, 0], 1.0, atol=1e-12)


def test_parallel_launches(flat):
    """Test the launch pairs of a bundle."""
    launches = parallel_launches(flat, [(0.0, 1.0, 0.0), (0.0, 2.0, 0.0)], (2.0, 0.0, 0.0))
    assert len(launches) == 2
    np.testing.assert_array_equal(launches[1][0], [0.0, 0.0, 2.0, 0.0])
    np.testing.assert_allclose(launches[1][1], [1.0, -1.0, 0.0, 0.0])


def test_crossing_point():
    """Test interpolation of a sphere crossing."""
    x = np.zeros((3, 4))
    x[:, 1] = [0.5, 0.9, 1.3]
    ray = Trajectory(np.arange(3.0), x, np.zeros((3, 4)), np.zeros(3))
    np.testing.assert_allclose(crossing_point(ray, 1.0), [1.0, 0.0, 0.0])
    assert crossing_point(ray, 1.0, outward=False) is None
    assert crossing_point(ray, 2.0) is None


def test_closure_distance():
    """Test closest approach after a parameter value."""
    x = np.zeros((3, 4))
    x[:, 1] = [0.0, 1.0, 0.1]
    ray = Trajectory(np.arange(3.0), x, np.zeros((3, 4)), np.zeros(3))
    assert closure_distance(ray, np.zeros(3), after=0.5) == pytest.approx(0.1)
    with pytest.raises(ValueError):
        closure_distance(ray, np.zeros(3), after=5.0)


def test_circle_fit():
    """Test the least-squares circle on exact points."""
    angles = np.linspace(0.0, 2 * np.pi, 40)
    points = np.column_stack((1.0 + 2.0 * np.cos(angles), -0.5 + 2.0 * np.sin(angles)))
    center, radius, deviation = circle_fit(points)
    np.testing.assert_allclose(center, [1.0, -0.5], atol=1e-12)
    assert radius == pytest.approx(2.0)
    assert deviation < 1e-12


def test_metric4_inverse_accepted(eta):
    """Test that hamiltonian takes a Metric4 holding g^ab."""
    assert hamiltonian(Metric4(eta.inverse), [2.0, 1.0, 1.0, 0.0]) == pytest.approx(1.0)
