"""
verify subcommand: seeded identity and cross-check suite

Each check reports the largest deviation over its cases; any deviation above
the oracle limit gives the warning exit code.
"""

import logging

import numpy as np

import config
from avqfi_analytics import (
    avqfi_numeric,
    avqfi_two_mode_noiseless,
    qfi_sm_noiseless_theta,
    qfi_sm_noisy_closed,
    qfi_variance_noiseless,
    unrotated_params,
)
from commands.common import finish
from gaussian_core import (
    GaussianState,
    from_single_mode_params,
    product_state,
    standard_form,
)
from models import EncodingParams, SeededRng, SingleModeProbeParams, TWO_PI
from probe_sampler import draw_mixed_params, sample_two_mode_pure
from qfi_engine import qfi, verify_single_mode_identity
from utils import max_relative_deviation

logger = logging.getLogger(__name__)


def _random_case(rng):
    """Mixed single-mode probe with phi = 0 and a lossy encoding"""
    p = unrotated_params(draw_mixed_params(rng.uniform(0.1, 2.0), rng))
    params = EncodingParams(epsilon=rng.uniform(0.1, 1.0), theta=rng.uniform(0.0, TWO_PI),
                            eta=rng.uniform(0.1, 0.95))
    return p, params


def check_identity(rng, cases, derivatives):
    residuals = []
    for _ in range(cases):
        p, params = _random_case(rng)
        residuals.append(verify_single_mode_identity(from_single_mode_params(p), params, derivatives))
    return float(max(residuals))


def check_nu_b_independence(rng, cases, derivatives):
    """Two-mode QFI of a product probe against the single-mode QFI of its A mode"""
    reference, candidate = [], []
    for _ in range(cases):
        p, params = _random_case(rng)
        probe_a = from_single_mode_params(p)
        single = qfi(probe_a, params, derivatives).value
        for nu_b in config.VERIFY_NU_B:
            pair = product_state(probe_a, GaussianState.thermal(nu_b))
            reference.append(single)
            candidate.append(qfi(pair, params, derivatives).value)
    return max_relative_deviation(reference, candidate)


def check_noiseless_profile(rng, cases, derivatives):
    reference, candidate = [], []
    for _ in range(cases):
        p, params = _random_case(rng)
        params = EncodingParams(epsilon=params.epsilon, theta=params.theta, eta=1.0)
        reference.append(qfi(from_single_mode_params(p), params, derivatives).value)
        candidate.append(qfi_sm_noiseless_theta(p, params.theta))
    return max_relative_deviation(reference, candidate)


def check_noisy_closed_form(rng, cases):
    reference, candidate = [], []
    for _ in range(cases):
        p, params = _random_case(rng)
        reference.append(qfi(from_single_mode_params(p), params, config.FINITE_DIFFERENCE).value)
        candidate.append(qfi_sm_noisy_closed(p, params.epsilon, params.eta, params.theta))
    return max_relative_deviation(reference, candidate)


def check_two_mode_closed_form(rng, cases, nodes, derivatives):
    reference, candidate = [], []
    for _ in range(cases):
        state = sample_two_mode_pure(rng.uniform(1.0, 3.0), rng)
        params, _ = standard_form(state)
        reference.append(avqfi_numeric(state, 1.0, 1.0, nodes=nodes, derivatives=derivatives).mean)
        candidate.append(avqfi_two_mode_noiseless(params))
    return max_relative_deviation(reference, candidate)


def check_variance(nodes, derivatives):
    """Theta-variance of the unitary QFI on a grid of pure probes"""
    reference, candidate = [], []
    for alpha in np.linspace(0.1, 1.0, 5):
        for xi_mag in np.linspace(0.0, 2.0, 5):
            for psi in np.linspace(0.0, np.pi, 5):
                p = SingleModeProbeParams(nu=1.0, alpha=alpha, xi_mag=xi_mag, psi=psi)
                numeric = avqfi_numeric(from_single_mode_params(p), 1.0, 1.0, nodes=nodes,
                                        derivatives=derivatives)
                reference.append(numeric.variance)
                candidate.append(qfi_variance_noiseless(p))
    return max_relative_deviation(reference, candidate)


def run_checks(seed, nodes, derivatives, cases=config.VERIFY_CASES):
    """Deviation of every check, keyed by check name"""
    rng = SeededRng(seed)
    checks = {
        'identity_residual': check_identity(rng, cases, derivatives),
        'nu_b_independence': check_nu_b_independence(rng, max(cases // 10, 1), derivatives),
        'noiseless_profile': check_noiseless_profile(rng, cases, derivatives),
        'noisy_closed_form': check_noisy_closed_form(rng, cases),
        'two_mode_closed_form': check_two_mode_closed_form(rng, config.VERIFY_TWO_MODE_CASES,
                                                           nodes, derivatives),
        'variance_closed_form': check_variance(nodes, derivatives),
    }
    for name, deviation in checks.items():
        logger.info(f"{name}: {deviation:.3e}")
    return checks


def cmd_verify(run_config):
    """Report of all checks; --oracle runs the engine side through finite differences"""
    derivatives = config.FINITE_DIFFERENCE if run_config.oracle else run_config.derivatives
    checks = run_checks(run_config.seed, run_config.node_count(), derivatives)
    worst = max(checks.values())
    report = {
        'seed': run_config.seed,
        'derivatives': derivatives,
        **checks,
        'limit': config.ORACLE_DEVIATION_LIMIT,
        'passed': bool(worst <= config.ORACLE_DEVIATION_LIMIT),
    }
    return finish(report, run_config, worst)
