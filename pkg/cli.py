"""
Command-line interface for the Gaussian squeezing-metrology toolkit

Subcommands:
- qfi: QFI of a probe state with its term breakdown
- avqfi: QFI averaged over the squeezing direction
- sample: uniformly sampled single-mode probes with their AvQFI
- sweep: optimal single-mode probe against TMSV over (budget, eta)
- band: bound curves and theta-ranges per photon number
- verify: seeded identity and cross-check suite
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

import config
from commands import cmd_avqfi, cmd_band, cmd_qfi, cmd_sample, cmd_sweep, cmd_verify
from models import ConfigError, GaussianStateError, NumericalDomainError

logger = logging.getLogger(__name__)

COMMANDS = {
    'qfi': cmd_qfi,
    'avqfi': cmd_avqfi,
    'sample': cmd_sample,
    'sweep': cmd_sweep,
    'band': cmd_band,
    'verify': cmd_verify,
}


@dataclass(frozen=True)
class RunConfig:
    """Parsed command line of one run

    Numeric axes that accept range syntax (eta, n_a, n_total) are kept as
    text; commands parse them as a scalar or a range as they need.
    """

    subcommand: str
    state: Optional[str] = None
    epsilon: float = config.DEFAULT_EPSILON
    theta: float = config.DEFAULT_THETA
    eta: str = str(config.DEFAULT_ETA)
    nodes: Optional[int] = None
    seed: int = config.DEFAULT_SEED
    count: int = 1000
    n_a: Optional[str] = None
    n_total: Optional[str] = None
    mode: str = config.FIXED_NA
    prior: Optional[str] = None
    out: Optional[str] = None
    fmt: str = 'json'
    oracle: bool = False
    kind: str = config.KIND_PURE
    fix_angles: bool = False
    derivatives: str = config.ANALYTIC
    workers: int = 1
    exhaustive: bool = False
    verbose: bool = False

    def __post_init__(self):
        if self.subcommand not in COMMANDS:
            raise ConfigError(f"unknown subcommand {self.subcommand!r}")
        if self.fmt not in ('csv', 'json'):
            raise ConfigError(f"unknown output format {self.fmt!r}")
        if self.count < 0:
            raise ConfigError(f"--count must be >= 0, got {self.count}")
        if self.nodes is not None and (self.nodes < config.MIN_NODES or self.nodes % 2):
            raise ConfigError(f"--nodes must be even and >= {config.MIN_NODES}, got {self.nodes}")

    def node_count(self, default=config.DEFAULT_NODES):
        """Quadrature nodes from --nodes, or the command default when it was not given"""
        return default if self.nodes is None else self.nodes

    @classmethod
    def from_args(cls, args):
        fmt = args.format or ('json' if args.command in ('qfi', 'avqfi', 'verify') else 'csv')
        return cls(
            subcommand=args.command,
            state=getattr(args, 'state', None),
            epsilon=args.epsilon,
            theta=args.theta,
            eta=args.eta,
            nodes=args.nodes,
            seed=args.seed,
            count=getattr(args, 'count', 1000),
            n_a=getattr(args, 'n_a', None),
            n_total=getattr(args, 'n_total', None),
            mode=getattr(args, 'mode', config.FIXED_NA),
            prior=getattr(args, 'prior', None),
            out=args.out,
            fmt=fmt,
            oracle=args.oracle,
            kind=getattr(args, 'kind', config.KIND_PURE),
            fix_angles=getattr(args, 'fix_angles', False),
            derivatives=args.derivatives,
            workers=getattr(args, 'workers', 1),
            exhaustive=getattr(args, 'exhaustive', False),
            verbose=args.verbose,
        )


def _common_options():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--epsilon', type=float, default=config.DEFAULT_EPSILON,
                        help=f"Squeezing strength to estimate (default: {config.DEFAULT_EPSILON})")
    common.add_argument('--theta', type=float, default=config.DEFAULT_THETA,
                        help="Squeezing direction (default: 0)")
    common.add_argument('--eta', default=str(config.DEFAULT_ETA),
                        help="Transmissivity, or start:stop:count for sweeps (default: 1)")
    common.add_argument('--nodes', type=int, default=None,
                        help=f"Quadrature nodes over theta (default: {config.DEFAULT_NODES}, "
                             f"{config.BAND_NODES} for band)")
    common.add_argument('--seed', type=int, default=config.DEFAULT_SEED,
                        help=f"Random seed (default: {config.DEFAULT_SEED})")
    common.add_argument('--derivatives', choices=config.DERIVATIVE_MODES, default=config.ANALYTIC,
                        help="Derivative pipeline of the QFI engine (default: analytic)")
    common.add_argument('--oracle', action='store_true',
                        help="Rerun closed forms through the finite-difference engine")
    common.add_argument('--out', default=None, help="Output path (default: stdout)")
    common.add_argument('--format', choices=['csv', 'json'], default=None,
                        help="Output format (default: json for reports, csv for tables)")
    common.add_argument('--verbose', '-v', action='store_true', help="Enable INFO-level logging")
    return common


def create_parser():
    """
    Create command-line argument parser with subcommands.

    Returns:
        Configured ArgumentParser instance
    """
    parser = argparse.ArgumentParser(
        prog=config.APP_NAME,
        description="QFI and direction-averaged QFI for squeezing estimation with Gaussian probes",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  gaussqfi qfi --state data/probes/tmsv_sinh1.json --theta 0.3
  gaussqfi avqfi --state data/probes/squeezed_n1.json --prior data/priors/uniform.csv
  gaussqfi sample --n-a 1 --count 1000 --kind mixed --out samples.csv
  gaussqfi sweep --n-a 0.5:2:4 --eta 0:1:11 --epsilon 1 --workers 4
  gaussqfi band --n-a 0:5:21 --eta 0.9 --epsilon 0.5
  gaussqfi verify --oracle
        """,
    )
    parser.add_argument('--version', action='version',
                        version=f"{config.APP_NAME} {config.APP_VERSION}")
    common = _common_options()
    subparsers = parser.add_subparsers(dest='command', required=True)

    p_qfi = subparsers.add_parser('qfi', parents=[common], help="QFI of a probe state")
    p_qfi.add_argument('--state', required=True, help="State JSON, inline or a file path")

    p_avqfi = subparsers.add_parser('avqfi', parents=[common], help="Direction-averaged QFI")
    p_avqfi.add_argument('--state', required=True, help="State JSON, inline or a file path")
    p_avqfi.add_argument('--prior', default=None,
                         help="CSV with theta,density columns, or 'uniform' (default: uniform)")

    p_sample = subparsers.add_parser('sample', parents=[common],
                                     help="Sample single-mode probes at fixed photon number")
    p_sample.add_argument('--n-a', dest='n_a', required=True, help="Mean photon number")
    p_sample.add_argument('--count', type=int, default=1000, help="Number of probes (default: 1000)")
    p_sample.add_argument('--kind', choices=config.SAMPLE_KINDS, default=config.KIND_PURE,
                          help="Pure or mixed probes (default: pure)")
    p_sample.add_argument('--fix-angles', action='store_true',
                          help="Fix phi = 0 and psi = pi/2 instead of drawing them")

    p_sweep = subparsers.add_parser('sweep', parents=[common],
                                    help="Optimal single-mode probe against TMSV over a grid")
    p_sweep.add_argument('--n-a', dest='n_a', default=None, help="Photon budget axis on mode A")
    p_sweep.add_argument('--n-total', dest='n_total', default=None, help="Total photon budget axis")
    p_sweep.add_argument('--mode', choices=config.COMPARISON_MODES, default=config.FIXED_NA,
                         help="Comparison at fixed n_A or fixed total N (default: fixed_nA)")
    p_sweep.add_argument('--workers', type=int, default=1, help="Worker processes (default: 1)")
    p_sweep.add_argument('--exhaustive', action='store_true',
                         help="Also optimize over mixed single-mode probes")

    p_band = subparsers.add_parser('band', parents=[common],
                                   help="Bound curves and theta-ranges per photon number")
    p_band.add_argument('--n-a', dest='n_a', required=True, help="Photon number axis")

    subparsers.add_parser('verify', parents=[common], help="Run the identity and cross-check suite")
    return parser


def main(argv=None):
    """Main CLI entry point; returns the exit code"""
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return config.EXIT_OK if e.code == 0 else config.EXIT_INPUT_ERROR

    # Configure logging
    if args.verbose:
        logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s", force=True)
    else:
        logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s", force=True)

    try:
        run_config = RunConfig.from_args(args)
        logger.info(f"Running {run_config.subcommand}")
        return COMMANDS[run_config.subcommand](run_config)
    except (ConfigError, GaussianStateError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return config.EXIT_INPUT_ERROR
    except (NumericalDomainError, np.linalg.LinAlgError, FloatingPointError) as e:
        print(f"Numerical error: {e}", file=sys.stderr)
        return config.EXIT_NUMERICAL_ERROR
    except Exception as e:
        logger.error(f"Unexpected error: {e}")
        if args.verbose:
            raise
        return config.EXIT_INPUT_ERROR


if __name__ == '__main__':
    sys.exit(main())
