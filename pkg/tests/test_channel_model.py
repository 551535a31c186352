import cmath
import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ris_secrecy import (LinkGeometry, SystemConfig, ValidationError, build_channels, noise_power_watts,
                         path_loss_linear, steering_vector)

angles = st.floats(min_value=1e-6, max_value=math.pi - 1e-6)


def test_steering_vector_broadside_is_flat():
    # float pi/2 has cos ~ 6e-17, so equality holds to round-off only
    np.testing.assert_allclose(steering_vector(4, math.pi / 2), np.ones(4), atol=1e-15)


def test_steering_vector_sixty_degrees():
    v = steering_vector(2, math.pi / 3)
    assert v[0] == 1
    assert abs(v[1] - (-1j)) < 1e-15


def test_steering_vector_entry_by_hand():
    v = steering_vector(8, math.pi / 4, 0.5)
    expected = cmath.exp(-1j * 3 * math.pi * math.sqrt(2) / 2)
    assert abs(v[3] - expected) < 1e-14


@pytest.mark.parametrize("n, angle", [(0, 1.0), (3, 0.0), (3, math.pi), (3, -0.2), (3, 4.0)])
def test_steering_vector_rejects_bad_input(n, angle):
    with pytest.raises(ValidationError):
        steering_vector(n, angle)


@given(n=st.integers(1, 300), angle=angles)
def test_steering_vector_unit_modulus(n, angle):
    v = steering_vector(n, angle)
    assert v[0] == 1
    assert np.max(np.abs(np.abs(v) - 1.0)) < 1e-12


@given(n=st.integers(1, 64), a=angles, b=angles)
def test_inner_product_bound(n, a, b):
    ip = abs(np.vdot(steering_vector(n, a), steering_vector(n, b)))
    assert ip <= n * (1 + 1e-12)


@given(n=st.integers(2, 64), a=angles, b=angles)
def test_inner_product_equality_iff_matching_cosine(n, a, b):
    ip = abs(np.vdot(steering_vector(n, a), steering_vector(n, b)))
    if a == b:
        assert ip == pytest.approx(n, rel=1e-12)
    elif abs(math.cos(a) - math.cos(b)) > 1e-3:
        # half-wavelength spacing keeps the phase step inside (-2 pi, 2 pi): no grating lobe
        assert ip < n * (1 - 1e-9)


def test_path_loss_values():
    assert -10 * math.log10(path_loss_linear(1.0, 61.4, 2)) == pytest.approx(61.4, abs=1e-12)
    assert path_loss_linear(10.0, 61.4, 2) == pytest.approx(10 ** -8.14, rel=1e-12)
    assert path_loss_linear(1.0, 0.0, 2) == 1.0


@pytest.mark.parametrize("d", [0.0, -1.0, float("nan")])
def test_path_loss_rejects_nonpositive_distance(d):
    with pytest.raises(ValidationError):
        path_loss_linear(d)


@given(d1=st.floats(1e-3, 1e4), d2=st.floats(1e-3, 1e4))
def test_path_loss_monotone(d1, d2):
    if d1 < d2 * (1 - 1e-9):
        assert path_loss_linear(d1) > path_loss_linear(d2)


def test_noise_power():
    assert noise_power_watts(-174, 1e8) == pytest.approx(10 ** -12.4, rel=1e-12)
    assert noise_power_watts(-174, 1e8) == pytest.approx(3.981e-13, rel=1e-3)
    assert noise_power_watts(-174, 1) == pytest.approx(10 ** -20.4, rel=1e-12)
    assert noise_power_watts(0, 1) == pytest.approx(1e-3, rel=1e-12)
    with pytest.raises(ValidationError):
        noise_power_watts(-174, 0)


def test_system_config_validation():
    with pytest.raises(ValidationError) as err:
        SystemConfig(n_ris_elements=0)
    assert err.value.field == "n_ris_elements"
    with pytest.raises(ValidationError):
        SystemConfig(tx_power_watts=0)
    with pytest.warns(UserWarning):
        SystemConfig(element_spacing_ratio=0.25)


def test_geometry_rejects_endfire():
    with pytest.raises(ValidationError) as err:
        LinkGeometry(aod_bob_rad=0.0)
    assert err.value.field == "aod_bob_rad"


def test_build_channels_flat_bob():
    cfg = SystemConfig(n_ris_elements=2, pathloss_alpha_db=0.0, pathloss_beta=2.0)
    geom = LinkGeometry(aod_bob_rad=math.pi / 2, dist_ris_bob_m=1.0)
    ch = build_channels(cfg, geom)
    np.testing.assert_allclose(ch.h_bob, [1, 1], atol=1e-15)


def test_build_channels_identical_links():
    geom = LinkGeometry(aod_bob_rad=1.1, aod_eve_rad=1.1, dist_ris_bob_m=12.0, dist_ris_eve_m=12.0)
    ch = build_channels(SystemConfig(n_ris_elements=16), geom)
    np.testing.assert_array_equal(ch.h_bob, ch.h_eve)


def test_build_channels_defaults():
    ch = build_channels(SystemConfig(), LinkGeometry(dist_alice_ris_m=10.0))
    assert ch.pathloss_alice == pytest.approx(10 ** -8.14, rel=1e-12)


def test_build_channels_factored_matches_dense():
    cfg = SystemConfig(m_tx_antennas=3, n_ris_elements=5)
    ch = build_channels(cfg, LinkGeometry())
    g = ch.cascade_matrix()
    assert g.shape == (5, 3)
    assert np.linalg.matrix_rank(g) == 1
    np.testing.assert_allclose(np.abs(ch.h_bob), math.sqrt(ch.pathloss_bob), rtol=1e-12)


@settings(max_examples=25)
@given(a=angles, b=angles, d=st.floats(1.0, 100.0))
def test_build_channels_deterministic(a, b, d):
    cfg = SystemConfig(m_tx_antennas=4, n_ris_elements=8)
    geom = dataclasses.replace(LinkGeometry(), aod_bob_rad=a, aod_eve_rad=b, dist_ris_bob_m=d)
    x, y = build_channels(cfg, geom), build_channels(cfg, geom)
    for field in ("g_alice_ris", "g_ris", "g_bob", "g_eve"):
        assert getattr(x, field).tobytes() == getattr(y, field).tobytes()
    assert x.pathloss_bob == y.pathloss_bob
