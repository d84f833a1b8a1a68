"""Tests for direction-averaged QFI and its closed forms."""
import numpy as np
import pytest
from scipy.linalg import block_diag

import config
from avqfi_analytics import (
    avqfi_bounds_noiseless,
    avqfi_numeric,
    avqfi_sm_noiseless,
    avqfi_sm_noiseless_constrained,
    avqfi_sm_noisy,
    avqfi_tmsv_noiseless,
    avqfi_two_mode_noiseless,
    qfi_sm_noiseless_theta,
    qfi_sm_noisy_closed,
    qfi_theta_profile,
    qfi_variance_noiseless,
    theta_nodes,
    unrotated_params,
    variance_coefficients,
)
from gaussian_core import (
    GaussianState,
    apply_unitary,
    from_single_mode_params,
    rotation_symplectic,
    standard_form,
)
from models import (
    AvqfiResult,
    ConfigError,
    EncodingParams,
    GaussianStateError,
    NumericalDomainError,
    SingleModeProbeParams,
    ThetaPrior,
)
from qfi_engine import qfi


def _squeezed(n_a):
    return SingleModeProbeParams(alpha=0.5 * np.arccosh(2 * n_a + 1))


@pytest.mark.parametrize("n_a", [0.5, 1.0, 2.0, 5.0])
def test_noiseless_bounds(n_a):
    upper, lower, coherent = avqfi_bounds_noiseless(n_a)
    squeezed = from_single_mode_params(_squeezed(n_a)).gamma
    assert avqfi_sm_noiseless(squeezed, 0.0) == pytest.approx(upper, rel=1e-10)
    assert avqfi_sm_noiseless(GaussianState.thermal(2 * n_a + 1).gamma, 0.0) == pytest.approx(lower, rel=1e-10)
    assert avqfi_sm_noiseless(np.eye(2), np.sqrt(2 * n_a)) == pytest.approx(coherent, rel=1e-10)
    assert upper == pytest.approx(4 * n_a ** 2 + 4 * n_a + 2)


def test_squeezed_profile_min_mean_max():
    result = avqfi_numeric(from_single_mode_params(_squeezed(1.0)), epsilon=0.5, eta=1.0)
    assert result.mean == pytest.approx(10.0, abs=1e-6)
    assert result.min_theta == pytest.approx(2.0, abs=1e-6)
    assert result.max_theta == pytest.approx(18.0, abs=1e-6)
    assert result.method == config.METHOD_QUADRATURE


def test_tmsv_average_is_flat(tmsv_sinh1):
    result = avqfi_numeric(tmsv_sinh1, epsilon=0.0, eta=1.0, nodes=32)
    assert result.mean == pytest.approx(10.0, abs=1e-6)
    assert result.max_theta - result.min_theta < 1e-6
    assert config.FLAG_REGULARIZED in result.flags
    assert avqfi_tmsv_noiseless(np.arcsinh(1.0)) == pytest.approx(10.0)


def test_thermal_average():
    result = avqfi_numeric(GaussianState.thermal(3.0), epsilon=0.1, nodes=16)
    assert result.mean == pytest.approx(3.6, rel=1e-12)
    assert result.variance == pytest.approx(0.0, abs=1e-12)


def test_profile_closed_form_matches_engine():
    p = SingleModeProbeParams(nu=1.4, alpha=0.6, xi_mag=1.1, psi=0.7)
    for theta in (0.0, 0.4, 1.9, 4.0):
        engine = qfi(from_single_mode_params(p), EncodingParams(epsilon=0.3, theta=theta)).value
        assert qfi_sm_noiseless_theta(p, theta) == pytest.approx(engine, rel=1e-9)


def test_noiseless_average_matches_quadrature():
    p = SingleModeProbeParams(nu=1.4, alpha=0.6, phi=1.0, xi_mag=1.1, psi=0.7)
    state = from_single_mode_params(p)
    numeric = avqfi_numeric(state, epsilon=0.3, nodes=64)
    assert avqfi_sm_noiseless(state.gamma, p.xi_mag) == pytest.approx(numeric.mean, rel=1e-10)


def test_constrained_form_matches_covariance_form():
    p = SingleModeProbeParams(nu=1.5, alpha=0.3, xi_mag=np.sqrt(0.5), psi=1.0)
    direct = avqfi_sm_noiseless(from_single_mode_params(p).gamma, p.xi_mag)
    assert avqfi_sm_noiseless_constrained(p.photon_number, p.nu, p.xi_sq) == pytest.approx(direct)


def test_constrained_form_rejects_impossible_budget():
    with pytest.raises(GaussianStateError):
        avqfi_sm_noiseless_constrained(0.5, 3.0, 0.5)


@pytest.mark.parametrize("alpha,xi_mag,psi", [(0.3, 0.0, 0.0), (0.8, 1.5, 0.4), (0.5, 0.7, 2.6)])
def test_variance_closed_form(alpha, xi_mag, psi):
    p = SingleModeProbeParams(alpha=alpha, xi_mag=xi_mag, psi=psi)
    numeric = avqfi_numeric(from_single_mode_params(p), epsilon=0.2, nodes=64).variance
    assert qfi_variance_noiseless(p) == pytest.approx(numeric, rel=1e-7)


def test_balanced_variance_vanishes():
    alpha = 0.5
    p = SingleModeProbeParams(alpha=alpha, xi_mag=np.sqrt(np.sinh(2 * alpha) / 2), psi=np.pi / 2)
    v1, v2 = variance_coefficients(p)
    assert v1 == pytest.approx(v2)
    assert qfi_variance_noiseless(p) == pytest.approx(0.0, abs=1e-12)
    numeric = avqfi_numeric(from_single_mode_params(p), epsilon=0.2, nodes=32)
    assert numeric.max_theta - numeric.min_theta < 1e-9


def test_closed_forms_need_unrotated_state():
    p = SingleModeProbeParams(alpha=0.3, phi=0.2)
    with pytest.raises(GaussianStateError):
        qfi_sm_noiseless_theta(p, 0.0)


@pytest.mark.parametrize("epsilon,eta,theta", [(0.5, 0.7, 0.3), (0.1, 0.2, 1.7), (1.0, 0.95, 4.4)])
def test_noisy_closed_form_matches_finite_difference(epsilon, eta, theta):
    p = SingleModeProbeParams(nu=1.3, alpha=0.4, xi_mag=0.7, psi=0.9)
    params = EncodingParams(epsilon=epsilon, theta=theta, eta=eta)
    engine = qfi(from_single_mode_params(p), params, config.FINITE_DIFFERENCE).value
    assert qfi_sm_noisy_closed(p, epsilon, eta, theta) == pytest.approx(engine, rel=1e-6)


def test_noisy_closed_form_lossless_limit():
    p = SingleModeProbeParams(nu=1.3, alpha=0.4, xi_mag=0.7, psi=0.9)
    for theta in (0.2, 1.0):
        limit = qfi_sm_noisy_closed(p, 0.5, 1.0 - 1e-7, theta)
        assert limit == pytest.approx(qfi_sm_noiseless_theta(p, theta), rel=1e-4)


def test_noisy_closed_form_fully_lossy():
    p = SingleModeProbeParams(alpha=0.4, xi_mag=0.7)
    assert qfi_sm_noisy_closed(p, 0.5, 0.0, 0.3) == pytest.approx(0.0, abs=1e-12)


def test_noisy_closed_form_needs_positive_strength():
    with pytest.raises(NumericalDomainError):
        qfi_sm_noisy_closed(SingleModeProbeParams(alpha=0.4), 0.0, 0.5, 0.3)


def test_rotated_state_average_matches_engine():
    p = SingleModeProbeParams(nu=1.2, alpha=0.5, phi=0.9, xi_mag=0.6, psi=2.0)
    closed = avqfi_sm_noisy(unrotated_params(p), 0.4, 0.6, nodes=64).mean
    engine = avqfi_numeric(from_single_mode_params(p), 0.4, 0.6, nodes=64).mean
    assert closed == pytest.approx(engine, rel=1e-6)


def test_two_mode_closed_form_tmsv(tmsv_sinh1):
    params, _ = standard_form(tmsv_sinh1)
    assert avqfi_two_mode_noiseless(params) == pytest.approx(10.0, abs=1e-6)


def test_two_mode_closed_form_mixed(noisy_pair):
    params, _ = standard_form(noisy_pair)
    numeric = avqfi_numeric(noisy_pair, epsilon=0.0, nodes=64)
    assert avqfi_two_mode_noiseless(params) == pytest.approx(numeric.mean, rel=1e-7)


def test_theta_nodes_validation():
    assert theta_nodes(16)[1] == pytest.approx(2 * np.pi / 16)
    with pytest.raises(ConfigError):
        theta_nodes(8)
    with pytest.raises(ConfigError):
        theta_nodes(17)


def test_profile_returns_every_node():
    thetas, values, flags = qfi_theta_profile(GaussianState.vacuum(), 0.1, 1.0, nodes=16)
    assert thetas.shape == values.shape == (16,)
    np.testing.assert_allclose(values, 2.0)
    assert flags == ()


def test_tabulated_uniform_prior_matches_default():
    state = from_single_mode_params(_squeezed(1.0))
    prior = ThetaPrior(theta=np.array([0.0, np.pi]), density=np.array([1.0, 1.0]))
    weighted = avqfi_numeric(state, 0.3, prior=prior, nodes=32).mean
    assert weighted == pytest.approx(avqfi_numeric(state, 0.3, nodes=32).mean, rel=1e-12)


def test_peaked_prior_shifts_average():
    # squeezed n_A = 1 profile is 10 - 8 cos 4 theta
    state = from_single_mode_params(_squeezed(1.0))
    theta = np.linspace(0.0, 2 * np.pi, 64, endpoint=False)
    prior = ThetaPrior(theta=theta, density=np.cos(2 * theta) ** 2)
    assert avqfi_numeric(state, 0.3, prior=prior, nodes=64).mean < 10.0


def test_prior_weights_sum_to_one():
    prior = ThetaPrior(theta=np.array([0.0, 1.0, 3.0]), density=np.array([1.0, 2.0, 0.5]))
    assert prior.weights(32).sum() == pytest.approx(1.0)
    with pytest.raises(ConfigError):
        ThetaPrior(theta=np.array([0.0, 1.0]), density=np.array([-1.0, 1.0]))


def test_negative_photon_number_rejected():
    with pytest.raises(GaussianStateError):
        avqfi_bounds_noiseless(-0.1)


@pytest.mark.parametrize("phi", [0.3, 2.0, 4.5])
def test_average_ignores_local_rotation_and_ancilla_unitary(noisy_pair, random_local, phi):
    local = apply_unitary(noisy_pair, block_diag(rotation_symplectic(phi).s, random_local().s))
    base = avqfi_numeric(noisy_pair, 1.0, 1.0, nodes=32).mean
    assert avqfi_numeric(local, 1.0, 1.0, nodes=32).mean == pytest.approx(base, rel=1e-9)


def test_standard_form_keeps_average(random_two_mode):
    state = random_two_mode()
    params, _ = standard_form(state)
    assert avqfi_two_mode_noiseless(params) == pytest.approx(
        avqfi_numeric(state, 1.0, 1.0, nodes=32).mean, rel=1e-7)


@pytest.mark.parametrize("eta", [0.5, 0.75])
def test_tmsv_profile_is_flat_under_loss(tmsv_sinh1, eta):
    _, values, _ = qfi_theta_profile(tmsv_sinh1, 1.0, eta, nodes=32)
    np.testing.assert_allclose(values, values.mean(), rtol=1e-8)


def test_closed_form_result():
    result = AvqfiResult.closed_form(10.0, 32.0)
    assert result.quadrature_nodes == 0
    assert result.method == config.METHOD_CLOSED_FORM
    assert result.to_dict()['min_theta'] is None
    assert result.variance == 32.0
