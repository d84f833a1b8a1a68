"""
sweep subcommand: optimal single-mode probe against TMSV over (budget, eta)
"""

import logging

import config
from avqfi_analytics import avqfi_numeric
from commands.common import oracle_exit
from data_manager import records_to_frame, write_table
from gaussian_core import from_single_mode_params, tmsv
from models import ConfigError, SweepSpec
from sweep_optimizer import probe_for_ratio, run_sweep, tmsv_squeezing
from utils import max_relative_deviation, parse_range

logger = logging.getLogger(__name__)


def budget_axis(run_config):
    """Budget axis from --n-a (fixed_nA) or --n-total (fixed_N)"""
    text = run_config.n_a if run_config.mode == config.FIXED_NA else run_config.n_total
    if text is None:
        flag = '--n-a' if run_config.mode == config.FIXED_NA else '--n-total'
        raise ConfigError(f"{flag} is required in {run_config.mode} mode")
    return parse_range(text)


def closed_form_deviation(records, nodes):
    """Rerun the eta = 1 closed forms of a sweep through the finite-difference engine"""
    reference, candidate = [], []
    for record in records:
        if record.error or record.eta != 1.0 or config.FLAG_EXHAUSTIVE in record.flags:
            continue
        single = from_single_mode_params(probe_for_ratio(record.budget, record.optimal_ratio))
        reference.append(avqfi_numeric(single, record.epsilon, 1.0, nodes=nodes,
                                       derivatives=config.FINITE_DIFFERENCE).mean)
        candidate.append(record.avqfi_single_opt)
        pair = tmsv(tmsv_squeezing(record.budget, record.comparison_mode))
        reference.append(avqfi_numeric(pair, record.epsilon, 1.0, nodes=nodes,
                                       derivatives=config.FINITE_DIFFERENCE).mean)
        candidate.append(record.avqfi_tmsv)
    if not reference:
        logger.info("No closed-form rows to check")
        return None
    return max_relative_deviation(reference, candidate)


def cmd_sweep(run_config):
    """CSV of sweep records; failed grid points carry an error column"""
    spec = SweepSpec(
        budgets=budget_axis(run_config),
        etas=parse_range(run_config.eta),
        epsilon=run_config.epsilon,
        comparison_mode=run_config.mode,
        nodes=run_config.node_count(),
        seed=run_config.seed,
        workers=run_config.workers,
        exhaustive=run_config.exhaustive,
    )
    records = run_sweep(spec, progress=run_config.verbose)
    write_table(records_to_frame(records, spec.comparison_mode), run_config.out, run_config.fmt)
    if not run_config.oracle:
        return config.EXIT_OK
    return oracle_exit(closed_form_deviation(records, spec.nodes))
