"""
avqfi subcommand: QFI averaged over the squeezing direction
"""

import logging

import numpy as np

import config
from avqfi_analytics import (
    avqfi_numeric,
    avqfi_sm_noiseless,
    avqfi_sm_noisy,
    avqfi_two_mode_noiseless,
    qfi_variance_noiseless,
)
from commands.common import encoding_report, finish, unrotated_probe
from data_manager import load_prior, load_state
from gaussian_core import standard_form
from models import AvqfiResult, NumericalDomainError
from utils import max_relative_deviation, parse_scalar

logger = logging.getLogger(__name__)


def closed_form_avqfi(state, epsilon, eta, nodes):
    """Closed-form AvqfiResult under the uniform prior, or None when none applies

    The lossy single-mode form is a profile in theta, so it comes back as a
    quadrature result over `nodes`.
    """
    if eta == 0.0:
        return None
    if state.mode_count == 1:
        if eta == 1.0:
            mean = avqfi_sm_noiseless(state.gamma, float(np.hypot(*state.xi)))
            return AvqfiResult.closed_form(mean, qfi_variance_noiseless(unrotated_probe(state)))
        if epsilon <= 0.0:
            return None
        return avqfi_sm_noisy(unrotated_probe(state), epsilon, eta, nodes)
    if eta == 1.0:
        params, _ = standard_form(state)
        try:
            return AvqfiResult.closed_form(avqfi_two_mode_noiseless(params))
        except NumericalDomainError as e:
            logger.info(f"No two-mode closed form here: {e}")
    return None


def cmd_avqfi(run_config):
    """AvQFI report with theta statistics; closed forms are reported alongside"""
    state = load_state(run_config.state)
    prior = load_prior(run_config.prior)
    eta = parse_scalar(run_config.eta, 'eta')
    nodes = run_config.node_count()

    result = avqfi_numeric(state, run_config.epsilon, eta, prior, nodes, run_config.derivatives)
    report = {'modes': state.mode_count, **encoding_report(run_config, eta),
              'prior': 'uniform' if prior.is_uniform else run_config.prior, **result.to_dict()}
    report.pop('theta')
    closed = closed_form_avqfi(state, run_config.epsilon, eta, nodes) if prior.is_uniform else None
    report['closed_form'] = closed.to_dict() if closed is not None else None

    deviation = None
    if run_config.oracle:
        oracle = avqfi_numeric(state, run_config.epsilon, eta, prior, nodes, config.FINITE_DIFFERENCE)
        report['oracle_value'] = oracle.mean
        candidates = [result.mean] + ([closed.mean] if closed is not None else [])
        deviation = max_relative_deviation([oracle.mean] * len(candidates), candidates)
    logger.info(f"AvQFI = {result.mean:.12g} over {result.quadrature_nodes} nodes")
    return finish(report, run_config, deviation)
