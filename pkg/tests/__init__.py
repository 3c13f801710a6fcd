"""Tests for geomopt."""
