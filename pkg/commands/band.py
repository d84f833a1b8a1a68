"""
band subcommand: bound curves and theta-ranges per photon number
"""

import config
from avqfi_analytics import avqfi_numeric
from commands.common import oracle_exit
from data_manager import write_table
from gaussian_core import from_single_mode_params
from sweep_optimizer import band_rows, probe_for_ratio
from utils import max_relative_deviation, parse_range, parse_scalar


def cmd_band(run_config):
    """CSV of band rows over BAND_NODES unless --nodes is given

    At eta = 1 --oracle checks the squeezed bound against the engine.
    """
    n_values = parse_range(run_config.n_a)
    eta = parse_scalar(run_config.eta, 'eta')
    nodes = run_config.node_count(config.BAND_NODES)
    df = band_rows(n_values, run_config.epsilon, eta, nodes)
    write_table(df, run_config.out, run_config.fmt)
    if not run_config.oracle or eta != 1.0:
        return config.EXIT_OK
    oracle = [avqfi_numeric(from_single_mode_params(probe_for_ratio(n_a, 0.0)), run_config.epsilon,
                            1.0, nodes=nodes, derivatives=config.FINITE_DIFFERENCE).mean
              for n_a in n_values]
    return oracle_exit(max_relative_deviation(oracle, df['bound_max'].to_numpy()))
