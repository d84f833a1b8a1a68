"""Tests for the displacement-ratio optimizer and grid sweeps."""
from dataclasses import replace

import numpy as np
import pytest

import config
from avqfi_analytics import avqfi_bounds_noiseless, avqfi_sm_noisy
from models import ConfigError, SweepSpec
from sweep_optimizer import (
    band_rows,
    evaluate_point,
    optimize_displacement_ratio,
    optimize_single_mode_exhaustive,
    probe_for_ratio,
    relative_increase,
    run_sweep,
    single_mode_avqfi,
    transition_width,
)

NODES = 32


@pytest.mark.parametrize("ratio", [0.0, 0.3, 1.0])
def test_ratio_params_keep_budget(ratio):
    p = probe_for_ratio(2.0, ratio)
    assert p.photon_number == pytest.approx(2.0)
    assert p.xi_sq == pytest.approx(4.0 * ratio)
    assert p.psi == pytest.approx(np.pi / 2)


def test_ratio_out_of_range():
    with pytest.raises(ConfigError):
        probe_for_ratio(1.0, 1.5)


def test_single_mode_avqfi_endpoints():
    p = probe_for_ratio(1.0, 0.0)
    assert single_mode_avqfi(p, 0.5, 1.0) == pytest.approx(10.0)
    assert single_mode_avqfi(p, 0.5, 0.0) == 0.0


@pytest.mark.parametrize("n_a", [0.5, 2.0])
def test_lossless_optimum_is_pure_squeezing(n_a):
    ratio, value = optimize_displacement_ratio(n_a, 1.0, 1.0, NODES)
    assert ratio < 1e-3
    assert value == pytest.approx(avqfi_bounds_noiseless(n_a)[0], rel=1e-9)


def test_lossy_optimum_beats_endpoints():
    ratio, value = optimize_displacement_ratio(1.0, 0.5, 1.0, NODES)
    assert 0.0 <= ratio <= 1.0
    for endpoint in (0.0, 1.0):
        assert value >= single_mode_avqfi(probe_for_ratio(1.0, endpoint), 1.0, 0.5, NODES) - 1e-12


def test_exhaustive_search_prefers_pure_state_when_lossless():
    nu, ratio, value = optimize_single_mode_exhaustive(1.0, 1.0, 1.0, NODES)
    assert nu == pytest.approx(1.0)
    assert value == pytest.approx(10.0, rel=1e-9)


def test_lossless_fixed_photon_number_has_no_advantage():
    record = evaluate_point(1.0, 1.0, 1.0, config.FIXED_NA, NODES)
    assert record.increase == pytest.approx(0.0, abs=1e-9)
    assert config.FLAG_CLOSED_FORM in record.flags


def test_lossless_fixed_total_favours_single_mode():
    record = evaluate_point(2.0, 1.0, 1.0, config.FIXED_N, NODES)
    # N^2 + 2N + 2 against 4N^2 + 4N + 2
    assert record.avqfi_tmsv == pytest.approx(10.0)
    assert record.increase < 0.0


def test_fully_lossy_point():
    record = evaluate_point(1.0, 0.0, 1.0, config.FIXED_NA, NODES)
    assert record.avqfi_single_opt == 0.0
    assert record.avqfi_tmsv == 0.0
    assert record.increase == 0.0
    assert config.FLAG_FULLY_LOSSY in record.flags


def test_relative_increase_under_loss():
    assert relative_increase((1.0, 0.5), 1.0, config.FIXED_NA, NODES) >= 0.0


def test_point_needs_positive_strength_under_loss():
    with pytest.raises(ConfigError):
        evaluate_point(1.0, 0.5, 0.0, config.FIXED_NA, NODES)


def test_sweep_grid():
    spec = SweepSpec(budgets=(0.5, 1.0, 2.0), etas=(0.5, 0.75, 1.0), epsilon=1.0, nodes=NODES)
    records = run_sweep(spec)
    assert len(records) == 9
    assert [(r.budget, r.eta) for r in records] == spec.grid()
    assert all(r.error is None for r in records)
    assert all(r.increase >= -1e-9 for r in records)


def test_sweep_spec_rejects_empty_range():
    with pytest.raises(ConfigError):
        SweepSpec(budgets=(), etas=(1.0,), epsilon=1.0)


def test_transition_width_interpolates():
    etas = np.linspace(0.0, 1.0, 11)
    ratios = np.array([0.0, 1.0, 1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    assert transition_width(etas, ratios) == pytest.approx(0.16)


def test_transition_width_without_crossing():
    etas = np.linspace(0.0, 1.0, 5)
    assert transition_width(etas, np.full(5, 0.5)) == 0.0
    assert transition_width(etas, np.ones(5)) == 0.0


def test_band_rows_lossless():
    df = band_rows([0.5, 1.0], 0.5, 1.0, NODES)
    assert list(df.columns) == config.BAND_COLUMNS
    np.testing.assert_allclose(df['squeezed_mean'], df['bound_max'], atol=1e-6)
    np.testing.assert_allclose(df['tmsv_mean'], df['bound_max'], atol=1e-6)
    np.testing.assert_allclose(df['tmsv_max'] - df['tmsv_min'], 0.0, atol=1e-6)
    assert (df['bound_min'] <= df['bound_coherent']).all()


def test_displacement_along_squeezed_quadrature_is_optimal():
    p = probe_for_ratio(5.0, 0.5)
    best = avqfi_sm_noisy(p, 1.0, 0.95).mean
    for psi in np.linspace(0.0, np.pi, 13):
        assert avqfi_sm_noisy(replace(p, psi=psi), 1.0, 0.95).mean <= best + 1e-8


@pytest.mark.parametrize("eta, low, high", [(0.99, 0.0, 0.02), (0.2, 0.98, 1.0)])
def test_regime_endpoints_at_five_photons(eta, low, high):
    ratio, _ = optimize_displacement_ratio(5.0, eta, 1.0)
    assert low <= ratio <= high


def test_optimum_does_not_grow_with_loss():
    values = [optimize_displacement_ratio(2.0, eta, 1.0, NODES)[1] for eta in (1.0, 0.9, 0.7, 0.5, 0.3, 0.1)]
    assert np.all(np.diff(values) <= 1e-9)


def test_tmsv_advantage_under_loss():
    spec = SweepSpec(budgets=(0.5, 1.0, 2.0, 3.5, 5.0), etas=(0.1, 0.3, 0.5, 0.7, 0.9), epsilon=1.0)
    for record in run_sweep(spec):
        assert record.error is None
        assert record.increase >= -1e-6
        if record.eta >= 0.3:
            assert record.increase > 0.0


def test_transition_is_sharper_at_weak_squeezing():
    etas = np.linspace(0.0, 1.0, 21)
    widths = {}
    for epsilon in (0.1, 1.0):
        ratios = [optimize_displacement_ratio(5.0, eta, epsilon)[0] for eta in etas]
        widths[epsilon] = transition_width(etas, ratios)
    assert widths[1.0] > 0.0
    assert widths[0.1] < widths[1.0]
