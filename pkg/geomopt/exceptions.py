"""Exceptions raised by geomopt."""

from __future__ import annotations


class GeomOptError(Exception):
    """Base error for the package."""


class MetricError(GeomOptError):
    """A metric cannot be used for the requested operation."""


class SingularMetricError(MetricError):
    """The metric determinant vanishes within tolerance."""


class NonLorentzianError(MetricError):
    """The metric determinant is not negative."""


class ZeroG00Error(MetricError):
    """The metric has g_00 = 0, which the material formulas divide by."""


class VarianceMismatchError(GeomOptError):
    """A field tensor carries the wrong variance or kind for the operation."""


class SingularMuError(GeomOptError):
    """The permeability matrix cannot be inverted."""


class NonPositiveMediumError(GeomOptError):
    """An isotropic medium has a non-positive permittivity or permeability."""


class SuperluminalVelocityError(GeomOptError):
    """A medium velocity reaches or exceeds the speed of light."""


class MisalignedVelocityError(GeomOptError):
    """The medium velocity is not parallel to a principal axis."""


class SingularSystemError(GeomOptError):
    """A linear system of the moving-media relations is singular."""


class NonPositiveIndexError(GeomOptError):
    """A refractive index is not strictly positive."""


class UnitIndexSingularityError(GeomOptError):
    """The moving-frame velocity is undefined for n close to 1."""


class AsymmetricConnectionError(GeomOptError):
    """A connection is not symmetric in its lower indices."""


class GridTooSmallError(GeomOptError):
    """A differentiated grid axis has too few points for central differences."""


class UnnormalizedVelocityError(GeomOptError):
    """A four-velocity does not satisfy g(u, u) = c^2."""


class NonNullLaunchError(GeomOptError):
    """A ray is launched with a wave covector off the light cone."""


class ConfigError(GeomOptError):
    """A scene configuration is invalid."""


class AsymmetricMetricError(MetricError):
    """A metric matrix is not symmetric."""


class AsymmetricFieldError(GeomOptError):
    """A field tensor is not antisymmetric."""
