"""
qfi subcommand: QFI of a probe state with its term breakdown
"""

import logging

import config
from avqfi_analytics import qfi_sm_noiseless_theta, qfi_sm_noisy_closed
from commands.common import encoding_report, finish, unrotated_probe
from data_manager import load_state
from gaussian_core import single_mode_params
from models import EncodingParams
from qfi_engine import qfi
from utils import max_relative_deviation, parse_scalar

logger = logging.getLogger(__name__)


def closed_form_qfi(state, params):
    """Closed-form single-mode QFI at this encoding, or None when none applies"""
    p0 = unrotated_probe(state)
    if p0 is None or params.eta == 0.0:
        return None
    # the probe was rotated by phi, so the closed form sees theta + phi
    theta = params.theta + single_mode_params(state).phi
    if params.unitary:
        return float(qfi_sm_noiseless_theta(p0, theta))
    if params.epsilon <= 0.0:
        return None
    return qfi_sm_noisy_closed(p0, params.epsilon, params.eta, theta)


def cmd_qfi(run_config):
    """QFI report; --oracle compares against the finite-difference engine"""
    state = load_state(run_config.state)
    eta = parse_scalar(run_config.eta, 'eta')
    params = EncodingParams(epsilon=run_config.epsilon, theta=run_config.theta, eta=eta)

    result = qfi(state, params, run_config.derivatives)
    report = {'modes': state.mode_count, **encoding_report(run_config, eta), **result.to_dict()}
    closed = closed_form_qfi(state, params)
    report['closed_form'] = closed

    deviation = None
    if run_config.oracle:
        oracle = qfi(state, params, config.FINITE_DIFFERENCE)
        report['oracle_value'] = oracle.value
        candidates = [result.value] + ([closed] if closed is not None else [])
        deviation = max_relative_deviation([oracle.value] * len(candidates), candidates)
    logger.info(f"QFI = {result.value:.12g}")
    return finish(report, run_config, deviation)
