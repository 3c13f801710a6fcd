"""Tests for the verification suite."""

import numpy as np
import pytest

from geomopt.diagnostics import (
    CheckResult,
    bianchi_grid,
    format_report,
    oblique_plane_wave,
    plane_wave_grid,
    random_lorentzian,
    run_suite,
    standing_wave_field,
    standing_wave_potential,
    suite_passed,
)
from geomopt.tensor_core import FieldKind, Variance


def test_check_result_line():
    """Test the report line of a passing check."""
    result = CheckResult("vacuum_identity", 1e-13, 1e-12)
    assert result.passed
    assert result.ok
    assert result.line() == "vacuum_identity residual=1.000000e-13 threshold=1.000000e-12 PASS"


def test_check_result_lower_bound():
    """Test a check whose residual must reach the threshold."""
    assert CheckResult("order", 2.01, 1.9, ">=").passed
    assert not CheckResult("order", 1.2, 1.9, ">=").passed


def test_check_result_expected_fail():
    """Test that a failing negative control is the intended outcome."""
    result = CheckResult("control", 3.0, 1e-6, expected_fail=True)
    assert not result.passed
    assert result.ok
    assert result.line().endswith("FAIL EXPECTED-FAIL")
    assert not CheckResult("control", 0.0, 1e-6, expected_fail=True).ok


def test_suite_passed():
    """Test that one bad check fails the suite."""
    good = CheckResult("a", 0.0, 1.0)
    bad = CheckResult("b", 2.0, 1.0)
    assert suite_passed([good])
    assert not suite_passed([good, bad])
    assert format_report([good, bad]).splitlines()[1].startswith("b residual=")


def test_random_lorentzian(rng):
    """Test the random metric generator."""
    for _ in range(100):
        g = random_lorentzian(rng)
        assert g.g00 > 0.1
        assert g.is_lorentzian


def test_standing_wave_from_potential():
    """Test that the field is the exterior derivative of the potential."""
    point = np.array([0.3, 0.1, -0.2, 0.4])
    h = 1e-6
    A = standing_wave_potential
    dA = np.array([(A(point + h * e) - A(point - h * e)) / (2 * h) for e in np.eye(4)])
    np.testing.assert_allclose(standing_wave_field(point), dA - dA.T, atol=1e-8)


def test_oblique_plane_wave():
    """Test the sampled wave tensor."""
    G = oblique_plane_wave()(np.array([0.5, 0.1, 0.2, 0.0]))
    assert G.variance is Variance.CONTRAVARIANT
    assert G.kind is FieldKind.G
    assert np.any(G.components)


def test_grids():
    """Test the convergence grids."""
    assert bianchi_grid(0.02).shape == (11, 1, 1, 11)
    assert bianchi_grid(0.01).shape == (21, 1, 1, 21)
    grid = plane_wave_grid(0.02)
    assert grid.shape == (7, 7, 7, 1)
    np.testing.assert_allclose(grid.coordinates()[1][3], 0.0, atol=1e-15)


def test_run_suite_without_rays():
    """Test that the algebraic and grid checks all pass."""
    results = run_suite(draws=20, rays=False)
    assert suite_passed(results), format_report(results)
    names = [result.name for result in results]
    assert "christoffel_cancellation" in names
    assert "luneburg_focus" not in names
    control = next(r for r in results if r.name == "christoffel_asymmetric_control")
    assert control.expected_fail
    assert not control.passed


def test_run_suite_deterministic():
    """Test that one seed gives identical residuals."""
    first = run_suite(seed=11, draws=10, rays=False)
    second = run_suite(seed=11, draws=10, rays=False)
    assert [r.residual for r in first] == [r.residual for r in second]
    assert format_report(first) == format_report(second)


@pytest.mark.parametrize("c", [1.0, 2.5])
def test_run_suite_speed_of_light(c):
    """Test that the moving-media checks hold for any c."""
    results = run_suite(draws=5, rays=False, c=c)
    assert suite_passed(results), format_report(results)


def test_run_suite_rays():
    """Test the ray checks at a coarser step."""
    results = run_suite(draws=5, step=2e-3)
    ray_checks = [
        r
        for r in results
        if r.name
        in (
            "luneburg_focus",
            "fisheye_closure",
            "fisheye_circle_fit",
            "homogeneous_straight_line",
            "null_drift",
        )
    ]
    assert len(ray_checks) == 5
    assert suite_passed(results), format_report(results)
