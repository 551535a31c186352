import dataclasses
import math

import numpy as np
import pytest

from conftest import j0_power_series
from ris_secrecy import (LinkGeometry, MonteCarloSpec, SystemConfig, ValidationError, ergodic_lower_bound,
                         ergodic_secrecy_rate_mc, eta, expected_gain_sq_mc, path_loss_linear, sweep)
from ris_secrecy.simulation import BLOCK_SIZE, SHARED_BOB_EVE, secrecy_rate_samples


def test_spec_validation():
    with pytest.raises(ValidationError):
        MonteCarloSpec(trials=0)
    with pytest.raises(ValidationError):
        MonteCarloSpec(seed=-1)
    with pytest.raises(ValidationError):
        MonteCarloSpec(randomize={"aod_carol"})
    with pytest.raises(ValidationError):
        MonteCarloSpec(randomize={SHARED_BOB_EVE, "aod_bob"})


def test_empty_randomize_rejected_for_ergodic_rate(sweep_geom):
    with pytest.raises(ValidationError):
        ergodic_secrecy_rate_mc(SystemConfig(), sweep_geom, MonteCarloSpec(trials=10, randomize=set()))


def test_clone_eve_mean_is_zero():
    geom = LinkGeometry(dist_ris_bob_m=25.0, dist_ris_eve_m=25.0)
    est = ergodic_secrecy_rate_mc(SystemConfig(m_tx_antennas=8, n_ris_elements=16), geom,
                                  MonteCarloSpec(trials=5000, randomize={SHARED_BOB_EVE}))
    assert est.mean_rate_bps_hz == 0.0
    assert est.std_error == 0.0


def test_mean_increases_with_n(sweep_geom):
    mc = MonteCarloSpec(trials=20_000, seed=3)
    means = [ergodic_secrecy_rate_mc(SystemConfig(m_tx_antennas=4, n_ris_elements=n), sweep_geom, mc)
             .mean_rate_bps_hz for n in (2, 4, 8, 16, 32, 64, 128)]
    assert np.all(np.diff(means) > 0)


def test_same_seed_bit_identical(sweep_geom):
    mc = MonteCarloSpec(trials=3 * BLOCK_SIZE + 17, seed=99)
    cfg = SystemConfig(n_ris_elements=32)
    a = secrecy_rate_samples(cfg, sweep_geom, mc)
    b = secrecy_rate_samples(cfg, sweep_geom, mc)
    assert a.tobytes() == b.tobytes()
    assert ergodic_secrecy_rate_mc(cfg, sweep_geom, mc) == ergodic_secrecy_rate_mc(cfg, sweep_geom, mc)


@pytest.mark.parametrize("workers", [2, 3, 8])
def test_worker_count_does_not_change_results(sweep_geom, workers):
    cfg = SystemConfig(n_ris_elements=16)
    serial = MonteCarloSpec(trials=5 * BLOCK_SIZE + 3, seed=12345)
    parallel = dataclasses.replace(serial, workers=workers)
    assert (secrecy_rate_samples(cfg, sweep_geom, serial).tobytes()
            == secrecy_rate_samples(cfg, sweep_geom, parallel).tobytes())
    assert expected_gain_sq_mc(8, serial) == expected_gain_sq_mc(8, parallel)


def test_prefix_stability(sweep_geom):
    # trial i's draws depend only on (seed, i): a longer run extends a shorter one
    cfg = SystemConfig(n_ris_elements=16)
    short = secrecy_rate_samples(cfg, sweep_geom, MonteCarloSpec(trials=BLOCK_SIZE, seed=5))
    long = secrecy_rate_samples(cfg, sweep_geom, MonteCarloSpec(trials=2 * BLOCK_SIZE, seed=5))
    assert short.tobytes() == long[:BLOCK_SIZE].tobytes()


def test_different_seeds_differ(sweep_geom):
    cfg = SystemConfig(n_ris_elements=16)
    a = ergodic_secrecy_rate_mc(cfg, sweep_geom, MonteCarloSpec(trials=1000, seed=1))
    b = ergodic_secrecy_rate_mc(cfg, sweep_geom, MonteCarloSpec(trials=1000, seed=2))
    assert a.mean_rate_bps_hz != b.mean_rate_bps_hz


def test_per_trial_rates_nonnegative(sweep_geom):
    geom = dataclasses.replace(sweep_geom, dist_ris_bob_m=40.0)
    rates = secrecy_rate_samples(SystemConfig(n_ris_elements=8), geom, MonteCarloSpec(trials=20_000))
    assert np.all(rates >= 0)
    assert np.any(rates == 0)


def test_pipeline_method_matches_closed_form(sweep_geom):
    cfg = SystemConfig(m_tx_antennas=4, n_ris_elements=16)
    mc = MonteCarloSpec(trials=300, seed=8, randomize={"aod_alice", "aoa_ris", "aod_bob", "aod_eve"})
    fast = secrecy_rate_samples(cfg, sweep_geom, mc)
    slow = secrecy_rate_samples(cfg, sweep_geom, mc, method="pipeline")
    np.testing.assert_allclose(fast, slow, rtol=1e-9, atol=1e-12)


def test_alice_side_angles_do_not_matter(sweep_geom):
    cfg = SystemConfig(n_ris_elements=16)
    mc = MonteCarloSpec(trials=2000, seed=4, randomize={"aod_alice", "aoa_ris"})
    rates = secrecy_rate_samples(cfg, sweep_geom, mc)
    assert np.ptp(rates) == 0.0


def test_gain_oracle_single_element_is_exact():
    est = expected_gain_sq_mc(1, MonteCarloSpec(trials=10_000))
    assert est.mean_rate_bps_hz == 1.0
    assert est.std_error == 0.0


def test_gain_oracle_two_elements_matches_exact_expectation():
    est = expected_gain_sq_mc(2, MonteCarloSpec(trials=1_000_000, seed=2))
    exact = 2 + 2 * j0_power_series(math.pi) ** 2
    assert exact == pytest.approx(2.18513, abs=1e-5)
    assert abs(est.mean_rate_bps_hz - exact) < 3 * est.std_error


def test_gain_oracle_eight_elements_near_eta():
    est = expected_gain_sq_mc(8, MonteCarloSpec(trials=200_000, seed=8))
    assert abs(est.mean_rate_bps_hz - eta(8)) / eta(8) < 0.05


def test_std_error_shrinks_with_trials(sweep_geom):
    cfg = SystemConfig(n_ris_elements=32)
    ratios = []
    for rep in range(10):
        small = ergodic_secrecy_rate_mc(cfg, sweep_geom, MonteCarloSpec(trials=5000, seed=100 + rep))
        large = ergodic_secrecy_rate_mc(cfg, sweep_geom, MonteCarloSpec(trials=20_000, seed=200 + rep))
        ratios.append(large.std_error / small.std_error)
    assert np.mean(ratios) == pytest.approx(0.5, rel=0.2)


def test_bound_holds_on_random_geometries():
    rng = np.random.default_rng(2024)
    mc = MonteCarloSpec(trials=10_000, seed=31)
    for _ in range(100):
        d_e = rng.uniform(5, 60)
        d_b = rng.uniform(1, d_e)
        d_a = rng.uniform(2, 30)
        cfg = SystemConfig(m_tx_antennas=int(rng.integers(1, 65)), n_ris_elements=int(rng.integers(1, 65)))
        geom = LinkGeometry(dist_alice_ris_m=d_a, dist_ris_bob_m=d_b, dist_ris_eve_m=d_e)
        est = ergodic_secrecy_rate_mc(cfg, geom, mc)
        bound = ergodic_lower_bound(cfg, *(path_loss_linear(d) for d in (d_a, d_b, d_e)))
        assert est.mean_rate_bps_hz >= bound - 3 * est.std_error


def test_sweep_single_value_matches_direct_call(sweep_geom):
    mc = MonteCarloSpec(trials=5000, seed=6)
    cfg = SystemConfig(m_tx_antennas=4)
    (point,) = sweep(cfg, "N", [16], sweep_geom, mc)
    assert point.estimate == ergodic_secrecy_rate_mc(dataclasses.replace(cfg, n_ris_elements=16), sweep_geom, mc)


def test_sweep_bound_attached_and_valid(sweep_geom):
    mc = MonteCarloSpec(trials=20_000, seed=10)
    for p in sweep(SystemConfig(m_tx_antennas=4), "N", [8, 16, 32, 64], sweep_geom, mc):
        assert p.lower_bound is not None
        assert p.estimate.mean_rate_bps_hz >= p.lower_bound - 3 * p.estimate.std_error


def test_sweep_omits_bound_when_bob_farther(sweep_geom):
    mc = MonteCarloSpec(trials=1000)
    points = sweep(SystemConfig(), "d_B", [10.0, 50.0], sweep_geom, mc)
    assert points[0].lower_bound is not None
    assert points[1].lower_bound is None
    assert points[1].estimate is not None


def test_sweep_reports_bad_values_without_aborting(sweep_geom):
    points = sweep(SystemConfig(), "M", [4, 0, 2.5, 8], sweep_geom, MonteCarloSpec(trials=500))
    assert [p.error is None for p in points] == [True, False, False, True]
    assert "m_tx_antennas" in points[1].error


def test_sweep_power(sweep_geom):
    points = sweep(SystemConfig(), "P", [1.0, 20.0], sweep_geom, MonteCarloSpec(trials=2000))
    assert points[1].estimate.mean_rate_bps_hz > points[0].estimate.mean_rate_bps_hz


def test_sweep_rejects_unknown_parameter(sweep_geom):
    with pytest.raises(ValidationError):
        sweep(SystemConfig(), "Q", [1], sweep_geom, MonteCarloSpec(trials=10))
