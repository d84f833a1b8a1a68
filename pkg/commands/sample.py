"""
sample subcommand: uniformly sampled single-mode probes with their AvQFI
"""

import logging

import config
from avqfi_analytics import avqfi_numeric
from commands.common import oracle_exit
from data_manager import samples_to_frame, write_metadata, write_table
from gaussian_core import from_single_mode_params
from models import SeededRng
from probe_sampler import sample_batch, sampling_metadata
from sweep_optimizer import single_mode_avqfi
from utils import max_relative_deviation, parse_scalar

logger = logging.getLogger(__name__)


def sample_rows(n_a, params_list, epsilon, eta, nodes):
    return [{
        'index': i,
        'n_A': n_a,
        'nu': p.nu,
        'alpha': p.alpha,
        'phi': p.phi,
        'xi_mag': p.xi_mag,
        'psi': p.psi,
        'photon_number': p.photon_number,
        'eta': eta,
        'epsilon': epsilon,
        'avqfi': single_mode_avqfi(p, epsilon, eta, nodes),
    } for i, p in enumerate(params_list)]


def cmd_sample(run_config):
    """CSV of sampled probes in draw order; deterministic in the seed"""
    n_a = parse_scalar(run_config.n_a, 'n-a')
    eta = parse_scalar(run_config.eta, 'eta')
    nodes = run_config.node_count()
    rng = SeededRng(run_config.seed)
    batch = sample_batch(n_a, run_config.count, rng, run_config.kind, run_config.fix_angles)
    rows = sample_rows(n_a, batch, run_config.epsilon, eta, nodes)
    write_table(samples_to_frame(rows), run_config.out, run_config.fmt)
    write_metadata(sampling_metadata(n_a, run_config.kind, run_config.count, rng,
                                     run_config.fix_angles), run_config.out)

    if not run_config.oracle or not rows:
        return config.EXIT_OK
    checked = rows[:config.ORACLE_SAMPLE_ROWS]
    oracle = [avqfi_numeric(from_single_mode_params(p), run_config.epsilon, eta,
                            nodes=nodes, derivatives=config.FINITE_DIFFERENCE).mean
              for p in batch[:len(checked)]]
    deviation = max_relative_deviation(oracle, [row['avqfi'] for row in checked])
    logger.info(f"Oracle checked {len(checked)} of {len(rows)} rows")
    return oracle_exit(deviation)
