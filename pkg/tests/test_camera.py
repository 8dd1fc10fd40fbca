import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.camera import (
    altitude_from_fov,
    classify_resolution,
    focal_from_fov,
    fov_from_altitude,
    fov_from_focal,
    image_constant,
    meets_requirement,
    pix_per_meter_to_pix_per_foot,
    resolution_bounds,
    swath_width,
    view_geometry,
)
from src.errors import DomainError
from src.models import ResolutionClass

fovs = st.floats(min_value=math.radians(0.5), max_value=math.radians(179.0))


def test_table_footprint_matches_hsl():
    assert swath_width(2000, 100.0) == 20.0
    assert image_constant(2000, 100.0) == 10.0


def test_focal_range_endpoints():
    assert math.degrees(fov_from_focal(18e-3, 180e-3)) == pytest.approx(5.724810, abs=1e-6)
    assert math.degrees(fov_from_focal(18e-3, 10e-3)) == pytest.approx(83.9744, abs=1e-4)


def test_focal_round_trip():
    fov = fov_from_focal(18e-3, 50e-3)
    assert focal_from_fov(18e-3, fov) == pytest.approx(50e-3, rel=1e-12)


def test_altitude_at_default_optimum():
    assert altitude_from_fov(10.0, fov_from_focal(18e-3, 180e-3)) == pytest.approx(200.0, rel=1e-12)
    assert altitude_from_fov(10.0, math.radians(5.0)) == pytest.approx(229.04, abs=0.01)


@given(fovs)
def test_swath_is_independent_of_fov(fov):
    altitude = altitude_from_fov(10.0, fov)
    assert 2.0 * altitude * math.tan(fov / 2.0) == pytest.approx(20.0, rel=1e-12)


@given(fovs)
def test_fov_altitude_round_trip(fov):
    altitude = altitude_from_fov(10.0, fov)
    assert fov_from_altitude(10.0, altitude) == pytest.approx(fov, rel=1e-12)


def test_smaller_fov_flies_higher():
    assert altitude_from_fov(10.0, math.radians(10.0)) > altitude_from_fov(10.0, math.radians(90.0))


def test_view_geometry():
    geometry = view_geometry(10.0, math.radians(90.0))
    assert geometry.altitude == pytest.approx(10.0, rel=1e-12)
    assert geometry.cod == geometry.altitude
    assert geometry.swath == 20.0


@pytest.mark.parametrize("fov", [0.0, math.pi, -0.1, math.nan])
def test_fov_outside_open_interval(fov):
    with pytest.raises(DomainError):
        altitude_from_fov(10.0, fov)


def test_non_positive_lengths():
    with pytest.raises(DomainError):
        fov_from_focal(0.0, 10e-3)
    with pytest.raises(DomainError):
        swath_width(2000, 0.0)


@pytest.mark.parametrize(
    "density, expected",
    [
        (25.0, ResolutionClass.OBSERVATION_DETECTION),
        (100.0, ResolutionClass.RECOGNITION),
        (130.0, ResolutionClass.IDENTIFICATION),
        (30.0, ResolutionClass.OBSERVATION_DETECTION),
        (120.0, ResolutionClass.RECOGNITION),
        (150.0, ResolutionClass.IDENTIFICATION),
    ],
)
def test_classification(density, expected):
    result = classify_resolution(density)
    assert result.resolution_class is expected
    assert not result.beyond_table


def test_classification_beyond_table():
    result = classify_resolution(400.0)
    assert result.resolution_class is ResolutionClass.IDENTIFICATION
    assert result.beyond_table


def test_default_requirement_is_recognition():
    density = pix_per_meter_to_pix_per_foot(100.0)
    assert density == pytest.approx(30.48)
    assert meets_requirement(density, ResolutionClass.RECOGNITION)
    assert meets_requirement(density, ResolutionClass.OBSERVATION_DETECTION)
    assert not meets_requirement(density, ResolutionClass.IDENTIFICATION)


def test_resolution_bounds():
    assert resolution_bounds(ResolutionClass.RECOGNITION) == (30.0, 120.0)
