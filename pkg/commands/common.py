"""
Helpers shared by the subcommands
"""

import logging

import numpy as np

import config
from avqfi_analytics import unrotated_params
from data_manager import write_report
from gaussian_core import single_mode_params

logger = logging.getLogger(__name__)


def encoding_report(run_config, eta):
    return {
        'epsilon': run_config.epsilon,
        'theta': run_config.theta,
        'eta': eta,
        'derivatives': run_config.derivatives,
    }


def unrotated_probe(state):
    """Single-mode parameters seen from the squeezing axis, or None for two modes"""
    if state.mode_count != 1:
        return None
    return unrotated_params(single_mode_params(state))


def finish(report, run_config, deviation=None):
    """Write the report and turn an oracle deviation into the exit code"""
    if deviation is not None:
        report['oracle_deviation'] = deviation
    write_report(report, run_config.out, run_config.fmt)
    return oracle_exit(deviation)


def oracle_exit(deviation):
    if deviation is None or not np.isfinite(deviation):
        return config.EXIT_OK
    if deviation > config.ORACLE_DEVIATION_LIMIT:
        logger.warning(f"Oracle deviation {deviation:.3e} exceeds {config.ORACLE_DEVIATION_LIMIT:.0e}")
        return config.EXIT_ORACLE_WARNING
    logger.info(f"Oracle deviation {deviation:.3e}")
    return config.EXIT_OK
