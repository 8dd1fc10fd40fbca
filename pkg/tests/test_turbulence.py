import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.channel.turbulence import (
    assert_monotone_decreasing,
    cn2_at_altitude,
    cn2_profile,
    simplified_cn2,
)
from src.errors import DomainError
from src.models import TurbulenceProfile


@pytest.fixture
def profile():
    return TurbulenceProfile()


@pytest.fixture
def high_term_only():
    return TurbulenceProfile(mid_alt_coeff=0.0, ground_cn2=0.0)


def test_ground_value_is_sum_of_surface_terms(profile):
    assert cn2_at_altitude(profile, 0.0) == pytest.approx(1.27e-14, rel=1e-12)


def test_known_altitudes(profile):
    assert cn2_at_altitude(profile, 114.30) == pytest.approx(5.69e-15, rel=2e-3)
    assert cn2_at_altitude(profile, 1000.0) == pytest.approx(1.387e-15, rel=2e-3)


def test_profile_matches_scalar(profile):
    altitudes = np.array([0.0, 5.5, 200.0, 1500.0, 9000.0])
    expected = [cn2_at_altitude(profile, a) for a in altitudes]
    np.testing.assert_allclose(cn2_profile(profile, altitudes), expected, rtol=1e-13)


@pytest.mark.parametrize("altitude", [-1.0, math.nan, math.inf])
def test_rejects_bad_altitude(profile, altitude):
    with pytest.raises(DomainError):
        cn2_at_altitude(profile, altitude)


def test_profile_rejects_negative_altitudes(profile):
    with pytest.raises(DomainError):
        cn2_profile(profile, np.array([10.0, -5.0]))


@given(st.floats(min_value=0.0, max_value=3000.0))
def test_default_profile_positive(altitude):
    assert cn2_at_altitude(TurbulenceProfile(), altitude) > 0


def test_defaults_decrease_up_to_3km(profile):
    check = assert_monotone_decreasing(profile, (0.0, 3000.0), 1.0)
    assert check.ok
    assert check.samples == 3001
    assert check.violation_altitude is None


def test_high_term_peak_is_located(high_term_only):
    check = assert_monotone_decreasing(high_term_only, (5000.0, 15000.0), 1.0)
    assert not check.ok
    assert check.violation_altitude == pytest.approx(10_000.0, abs=200.0)


def test_high_term_peak_altitude():
    # the first term peaks at ten times its scale height
    prof = TurbulenceProfile(mid_alt_coeff=0.0, ground_cn2=0.0, high_scale=500.0)
    check = assert_monotone_decreasing(prof, (2000.0, 8000.0), 1.0)
    assert check.violation_altitude == pytest.approx(5000.0, abs=2.0)


def test_monotone_check_validates_inputs(profile):
    with pytest.raises(DomainError):
        assert_monotone_decreasing(profile, (100.0, 100.0), 1.0)
    with pytest.raises(DomainError):
        assert_monotone_decreasing(profile, (0.0, 100.0), 0.0)


def test_simplified_form_peaks_at_scale():
    values = [simplified_cn2(1e-15, 200.0, a) for a in (100.0, 200.0, 300.0)]
    assert values[1] > values[0]
    assert values[1] > values[2]
    assert simplified_cn2(1e-15, 200.0, 0.0) == 0.0


def test_simplified_form_needs_scale():
    with pytest.raises(DomainError):
        simplified_cn2(1e-15, 0.0, 10.0)


@pytest.mark.parametrize("altitude", [1e36, 1e100, 1e300, 1.7e308])
def test_far_altitudes_stay_finite(profile, altitude):
    assert cn2_at_altitude(profile, altitude) == 0.0
    values = cn2_profile(profile, np.array([0.0, altitude]))
    assert np.all(np.isfinite(values))
    assert values[1] == 0.0


@given(
    st.floats(min_value=0.0, max_value=20000.0),
    st.floats(min_value=0.0, max_value=10.0),
)
def test_ground_scaling_moves_only_ground_term(altitude, factor):
    base = TurbulenceProfile()
    scaled = replace(base, ground_cn2=base.ground_cn2 * factor)
    expected = (factor - 1.0) * base.ground_cn2 * math.exp(-altitude / base.ground_scale)
    difference = cn2_at_altitude(scaled, altitude) - cn2_at_altitude(base, altitude)
    assert difference == pytest.approx(expected, rel=1e-9, abs=1e-28)


@given(st.floats(min_value=0.0, max_value=20000.0))
def test_profile_is_continuous(altitude):
    profile = TurbulenceProfile()
    here = cn2_at_altitude(profile, altitude)
    gaps = [abs(cn2_at_altitude(profile, altitude + 2.0 ** -k) - here) for k in range(16)]
    assert all(math.isfinite(gap) for gap in gaps)
    assert gaps[-1] <= 1e-4 * here


@given(st.floats(min_value=1.0, max_value=1e4))
def test_simplified_form_slope_changes_sign_at_scale(scale):
    h = scale * 1e-3
    below = simplified_cn2(1e-15, scale, scale - h)
    peak = simplified_cn2(1e-15, scale, scale)
    above = simplified_cn2(1e-15, scale, scale + h)
    assert peak - below > 0
    assert above - peak < 0
