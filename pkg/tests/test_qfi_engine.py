"""Tests for the QFI engine."""
import numpy as np
import pytest

import config
from gaussian_core import GaussianState, from_single_mode_params, partial_trace, product_state, tmsv
from models import (
    TWO_PI,
    EncodingParams,
    GaussianStateError,
    NumericalDomainError,
    QfiResult,
    RankChangeError,
    SingleModeProbeParams,
)
from probe_sampler import sample_two_mode_pure
from qfi_engine import (
    _guard_rank,
    encode,
    encoded_derivatives,
    qfi,
    qfi_noiseless_input_frame,
    qfi_single_mode,
    qfi_two_mode,
    verify_single_mode_identity,
)

MIXED_PARAMS = SingleModeProbeParams(nu=1.5, alpha=0.4, phi=0.3, xi_mag=0.8, psi=1.0)


def _mixed_state():
    return from_single_mode_params(MIXED_PARAMS)


@pytest.mark.parametrize("theta", [0.0, 0.9, 2.5])
def test_vacuum_qfi_is_two(theta):
    result = qfi(GaussianState.vacuum(), EncodingParams(epsilon=0.3, theta=theta))
    assert result.value == pytest.approx(2.0, abs=1e-12)


def test_thermal_qfi_is_direction_independent():
    values = [qfi(GaussianState.thermal(3.0), EncodingParams(epsilon=0.2, theta=t)).value
              for t in (0.0, 0.5, 1.3)]
    np.testing.assert_allclose(values, 3.6, rtol=1e-12)


def test_tmsv_qfi_is_ten(tmsv_sinh1):
    result = qfi(tmsv_sinh1, EncodingParams(epsilon=0.0, theta=0.3))
    assert result.value == pytest.approx(10.0, abs=1e-6)
    assert config.FLAG_REGULARIZED in result.flags


def test_encode_at_zero_strength_is_identity_when_lossless():
    state = _mixed_state()
    encoded = encode(state, EncodingParams(epsilon=0.0, theta=1.1))
    np.testing.assert_allclose(np.linalg.det(encoded.gamma), np.linalg.det(state.gamma))


def test_unitary_derivatives_have_zero_eigenvalue_rates():
    enc = encoded_derivatives(_mixed_state(), EncodingParams(epsilon=0.4, theta=0.2))
    np.testing.assert_array_equal(enc.dnus, [0.0])


def test_analytic_matches_finite_difference_single_mode():
    params = EncodingParams(epsilon=0.5, theta=0.7, eta=0.8)
    analytic = qfi_single_mode(_mixed_state(), params, config.ANALYTIC)
    numeric = qfi_single_mode(_mixed_state(), params, config.FINITE_DIFFERENCE)
    assert analytic.value == pytest.approx(numeric.value, rel=1e-6)


def test_analytic_matches_finite_difference_two_mode(noisy_pair):
    params = EncodingParams(epsilon=0.6, theta=1.2, eta=0.7)
    analytic = qfi_two_mode(noisy_pair, params, config.ANALYTIC)
    numeric = qfi_two_mode(noisy_pair, params, config.FINITE_DIFFERENCE)
    assert analytic.value == pytest.approx(numeric.value, rel=1e-6)


@pytest.mark.parametrize("eta", [1.0, 0.8, 0.3])
def test_product_state_independent_of_ancilla(eta):
    state = _mixed_state()
    params = EncodingParams(epsilon=0.5, theta=0.4, eta=eta)
    single = qfi_single_mode(state, params).value
    for nu_b in (1.5, 3.0, 10.0):
        pair = product_state(state, GaussianState.thermal(nu_b))
        assert qfi_two_mode(pair, params).value == pytest.approx(single, rel=1e-7)


@pytest.mark.parametrize("eta", [0.2, 0.6, 0.95])
def test_single_mode_identity_residual(eta):
    params = EncodingParams(epsilon=0.7, theta=2.0, eta=eta)
    assert verify_single_mode_identity(_mixed_state(), params) < 1e-7


def test_fully_lossy_gives_zero(tmsv_sinh1):
    for state in (_mixed_state(), tmsv_sinh1):
        result = qfi(state, EncodingParams(epsilon=0.5, eta=0.0))
        assert result.value == 0.0
        assert result.flags == (config.FLAG_FULLY_LOSSY,)


def test_input_frame_agrees_single_mode():
    theta = 0.8
    encoded = qfi(_mixed_state(), EncodingParams(epsilon=0.9, theta=theta)).value
    assert qfi_noiseless_input_frame(_mixed_state(), theta) == pytest.approx(encoded, rel=1e-10)


def test_input_frame_agrees_two_mode(tmsv_sinh1, noisy_pair):
    for state in (tmsv_sinh1, noisy_pair):
        encoded = qfi(state, EncodingParams(epsilon=0.0, theta=0.5)).value
        assert qfi_noiseless_input_frame(state, 0.5) == pytest.approx(encoded, abs=1e-6)


def test_two_mode_needs_two_modes():
    with pytest.raises(GaussianStateError):
        qfi_two_mode(GaussianState.vacuum(), EncodingParams())


def test_single_mode_needs_one_mode(tmsv_sinh1):
    with pytest.raises(GaussianStateError):
        qfi_single_mode(tmsv_sinh1, EncodingParams())


def test_unknown_derivative_mode():
    with pytest.raises(ValueError):
        encoded_derivatives(_mixed_state(), EncodingParams(), 'spline')


def test_rank_guard_window():
    with pytest.raises(RankChangeError):
        _guard_rank(np.array([1.0 + 1e-7]), np.array([0.0]))
    with pytest.raises(RankChangeError):
        _guard_rank(np.array([1.0]), np.array([1e-3]))
    _guard_rank(np.array([1.0, 2.0]), np.array([0.0, 0.5]))


def test_small_negative_total_is_clamped():
    result = QfiResult.from_terms(1.0, -1.0 - 1e-13, 0.0)
    assert result.value == 0.0
    assert config.FLAG_CLAMPED in result.flags


def test_negative_total_raises():
    with pytest.raises(NumericalDomainError):
        QfiResult.from_terms(1.0, -2.0, 0.0)


def test_displacement_term_of_coherent_state():
    # vacuum covariance gives 2, the displacement along x gives 2 |xi|^2
    state = GaussianState.coherent(1.0, 0.0)
    result = qfi(state, EncodingParams(epsilon=0.0, theta=0.0))
    assert result.term_covariance == pytest.approx(2.0)
    assert result.term_displacement == pytest.approx(2.0)


def test_pure_two_mode_spectrum_regularized():
    result = qfi(tmsv(0.4), EncodingParams(epsilon=0.2, theta=1.0))
    expected = 4 * np.sinh(0.4) ** 4 + 4 * np.sinh(0.4) ** 2 + 2
    assert result.value == pytest.approx(expected, abs=1e-6)


@pytest.mark.parametrize("theta", [0.0, 0.9])
def test_lossless_qfi_does_not_depend_on_strength(noisy_pair, theta):
    for state in (noisy_pair, _mixed_state()):
        values = [qfi(state, EncodingParams(epsilon=e, theta=theta, eta=1.0)).value for e in (0.1, 0.5, 1.0)]
        np.testing.assert_allclose(values, values[0], rtol=1e-6)


def test_partial_trace_never_adds_information(rng):
    for _ in range(200):
        state = sample_two_mode_pure(rng.uniform(1.0, 3.0), rng)
        params = EncodingParams(epsilon=1.0, theta=rng.uniform(0.0, TWO_PI), eta=1.0)
        full = qfi(state, params).value
        reduced = qfi(partial_trace(state, keep=0), params).value
        assert full >= reduced - 1e-7 * max(1.0, reduced)
