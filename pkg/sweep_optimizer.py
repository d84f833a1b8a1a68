"""
Optimal single-mode probes, the TMSV comparison and figure-grid sweeps
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import pandas as pd
from scipy.optimize import minimize_scalar
from tqdm import tqdm

import config
from avqfi_analytics import (
    avqfi_bounds_noiseless,
    avqfi_numeric,
    avqfi_sm_noiseless,
    avqfi_sm_noisy,
    avqfi_tmsv_noiseless,
    unrotated_params,
)
from gaussian_core import from_single_mode_params, tmsv
from models import (
    ConfigError,
    GaussianStateError,
    SingleModeProbeParams,
    SweepRecord,
    ToolkitError,
)

logger = logging.getLogger(__name__)


def _check_point(n_a, eta, epsilon):
    if not np.isfinite(n_a) or n_a <= 0.0:
        raise ConfigError(f"photon budget must be positive, got {n_a}")
    if not 0.0 <= eta <= 1.0:
        raise ConfigError(f"transmissivity must lie in [0, 1], got {eta}")
    if eta < 1.0 and epsilon <= 0.0:
        raise ConfigError(f"epsilon must be positive when eta < 1, got {epsilon}")


def probe_for_ratio(n_a, ratio, nu=1.0):
    """Probe with phi = 0, psi = pi/2 and |xi|^2 = 2 n_A ratio at photon number n_A"""
    if not 0.0 <= ratio <= 1.0:
        raise ConfigError(f"displacement ratio must lie in [0, 1], got {ratio}")
    xi_sq = 2.0 * n_a * ratio
    cosh_2alpha = (2.0 * n_a * (1.0 - ratio) + 1.0) / nu
    if cosh_2alpha < 1.0 - config.PHYSICALITY_TOL:
        raise GaussianStateError(f"nu={nu} leaves no room for squeezing at n_A={n_a}, ratio={ratio}")
    alpha = 0.5 * float(np.arccosh(max(cosh_2alpha, 1.0)))
    return SingleModeProbeParams(nu=nu, alpha=alpha, phi=0.0, xi_mag=float(np.sqrt(xi_sq)),
                                 psi=np.pi / 2.0)


def single_mode_avqfi(p, epsilon, eta, nodes=config.DEFAULT_NODES):
    """AvQFI of a single-mode probe: closed form at eta = 1, zero at eta = 0, quadrature otherwise"""
    if eta == 1.0:
        return avqfi_sm_noiseless(from_single_mode_params(p).gamma, p.xi_mag)
    if eta == 0.0:
        return 0.0
    return avqfi_sm_noisy(unrotated_params(p), epsilon, eta, nodes).mean


def _maximize_ratio(objective, tol=config.RATIO_TOL):
    """Scan [0, 1] on a uniform grid, then refine around the best point

    The refined point is kept only when it beats the best scanned value.
    """
    grid = np.linspace(0.0, 1.0, config.SCAN_POINTS)
    values = np.array([objective(x) for x in grid])
    best = int(np.argmax(values))
    best_ratio, best_value = float(grid[best]), float(values[best])

    step = grid[1] - grid[0]

    def negated(x):
        return -objective(float(np.clip(x, 0.0, 1.0)))

    if 0 < best < len(grid) - 1:
        res = minimize_scalar(negated, bracket=(grid[best - 1], grid[best], grid[best + 1]),
                              method='golden', tol=tol)
    else:
        lo, hi = (0.0, step) if best == 0 else (1.0 - step, 1.0)
        res = minimize_scalar(negated, bounds=(lo, hi), method='bounded', options={'xatol': tol})

    refined = float(np.clip(res.x, 0.0, 1.0))
    refined_value = -float(res.fun)
    if refined_value > best_value:
        return refined, refined_value
    return best_ratio, best_value


def optimize_displacement_ratio(n_a, eta, epsilon, nodes=config.DEFAULT_NODES):
    """Best |xi|^2 / (2 n_A) over pure probes with psi = pi/2; returns (ratio, avqfi)"""
    _check_point(n_a, eta, epsilon)
    return _maximize_ratio(lambda x: single_mode_avqfi(probe_for_ratio(n_a, x), epsilon, eta, nodes))


def optimize_single_mode_exhaustive(n_a, eta, epsilon, nodes=config.DEFAULT_NODES):
    """Also scan nu > 1; returns (nu, ratio, avqfi) of the best probe found"""
    _check_point(n_a, eta, epsilon)
    best = (1.0, 0.0, -np.inf)
    for nu in np.linspace(1.0, 2.0 * n_a + 1.0, config.EXHAUSTIVE_NU_POINTS):
        # with |xi|^2 = 2 n_A ratio, cosh 2alpha >= 1 caps the ratio
        ratio_cap = min(1.0, (2.0 * n_a + 1.0 - nu) / (2.0 * n_a))
        if ratio_cap < 0.0:
            continue
        ratio, value = _maximize_ratio(
            lambda x: single_mode_avqfi(probe_for_ratio(n_a, x * ratio_cap, nu), epsilon, eta, nodes))
        if value > best[2]:
            best = (float(nu), ratio * ratio_cap, value)
    logger.debug(f"Exhaustive optimum at n_A={n_a}, eta={eta}: nu={best[0]:.4g}, ratio={best[1]:.4g}")
    return best


def avqfi_tmsv(r, eta, epsilon, nodes=config.DEFAULT_NODES):
    """AvQFI of TMSV(r): closed form at eta = 1, zero at eta = 0, quadrature otherwise"""
    if eta == 1.0:
        return avqfi_tmsv_noiseless(r)
    if eta == 0.0:
        return 0.0
    return avqfi_numeric(tmsv(r), epsilon, eta, nodes=nodes).mean


def tmsv_squeezing(budget, mode):
    """r with sinh^2 r = n_A (fixed_nA) or 2 sinh^2 r = N (fixed_N)"""
    photons_a = budget if mode == config.FIXED_NA else budget / 2.0
    return float(np.arcsinh(np.sqrt(photons_a)))


def evaluate_point(budget, eta, epsilon, mode=config.FIXED_NA, nodes=config.DEFAULT_NODES,
                   exhaustive=False):
    """Optimal single-mode probe and TMSV at one grid point

    In fixed_N mode the single-mode probe spends all N photons on mode A.
    """
    _check_point(budget, eta, epsilon)
    if mode not in config.COMPARISON_MODES:
        raise ConfigError(f"unknown comparison mode {mode!r}")
    flags = []
    if eta == 0.0:
        flags.append(config.FLAG_FULLY_LOSSY)
    if eta == 1.0:
        flags.append(config.FLAG_CLOSED_FORM)

    if exhaustive:
        _, ratio, single = optimize_single_mode_exhaustive(budget, eta, epsilon, nodes)
        flags.append(config.FLAG_EXHAUSTIVE)
    else:
        ratio, single = optimize_displacement_ratio(budget, eta, epsilon, nodes)
    tmsv_value = avqfi_tmsv(tmsv_squeezing(budget, mode), eta, epsilon, nodes)
    increase = (tmsv_value - single) / single if single > 0.0 else 0.0
    return SweepRecord(budget=budget, eta=eta, epsilon=epsilon, comparison_mode=mode,
                       optimal_ratio=ratio, avqfi_single_opt=single, avqfi_tmsv=tmsv_value,
                       increase=increase, flags=tuple(flags))


def relative_increase(point, epsilon, mode=config.FIXED_NA, nodes=config.DEFAULT_NODES):
    """Fractional AvQFI advantage of TMSV over the best single-mode probe"""
    budget, eta = point
    return evaluate_point(budget, eta, epsilon, mode, nodes).increase


def theta_band(probe, epsilon, eta, nodes=config.BAND_NODES):
    """(min, max, mean) of the QFI over the theta grid"""
    result = avqfi_numeric(probe, epsilon, eta, nodes=nodes)
    return result.min_theta, result.max_theta, result.mean


def _evaluate_safely(args):
    budget, eta, epsilon, mode, nodes, exhaustive = args
    try:
        return evaluate_point(budget, eta, epsilon, mode, nodes, exhaustive)
    except ToolkitError as e:
        logger.warning(f"Grid point ({budget}, {eta}) failed: {e}")
        return SweepRecord(budget=budget, eta=eta, epsilon=epsilon, comparison_mode=mode,
                           error=str(e))


def run_sweep(spec, progress=False):
    """One SweepRecord per (budget, eta) grid point, in row-major grid order"""
    tasks = [(budget, eta, spec.epsilon, spec.comparison_mode, spec.nodes, spec.exhaustive)
             for budget, eta in spec.grid()]
    logger.info(f"Sweeping {len(tasks)} grid points at epsilon={spec.epsilon} ({spec.comparison_mode})")
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as executor:
            records = list(tqdm(executor.map(_evaluate_safely, tasks), total=len(tasks),
                                desc="Sweeping", unit="point", disable=not progress))
    else:
        records = [_evaluate_safely(task) for task in tqdm(tasks, desc="Sweeping", unit="point",
                                                           disable=not progress)]
    failed = sum(record.error is not None for record in records)
    logger.info(f"Sweep finished: {len(records) - failed} points ok, {failed} failed")
    return records


def transition_width(etas, ratios, low=0.1, high=0.9):
    """Width in eta over which the optimal ratio falls from `high` to `low`

    Ratios are read along increasing eta; the crossings are linearly
    interpolated. Returns 0 when the ratio does not fall through both levels.
    """
    order = np.argsort(etas)
    etas = np.asarray(etas, dtype=float)[order]
    ratios = np.asarray(ratios, dtype=float)[order]

    def interpolate(i, j, level):
        if ratios[j] == ratios[i]:
            return float(etas[i])
        return float(etas[i] + (level - ratios[i]) * (etas[j] - etas[i]) / (ratios[j] - ratios[i]))

    high_hits = np.nonzero(ratios >= high)[0]
    if high_hits.size == 0 or high_hits[-1] == len(etas) - 1:
        return 0.0
    last_high = high_hits[-1]
    low_hits = np.nonzero(ratios[last_high + 1:] <= low)[0]
    if low_hits.size == 0:
        return 0.0
    first_low = last_high + 1 + low_hits[0]
    start = interpolate(last_high, last_high + 1, high)
    end = interpolate(first_low, first_low - 1, low)
    return max(end - start, 0.0)


def band_rows(n_values, epsilon, eta, nodes=config.BAND_NODES):
    """Bound curves and theta-ranges of pure squeezed and TMSV probes per photon number"""
    rows = []
    for n_a in n_values:
        upper, lower, coherent = avqfi_bounds_noiseless(n_a)
        squeezed = from_single_mode_params(probe_for_ratio(n_a, 0.0))
        sq_min, sq_max, sq_mean = theta_band(squeezed, epsilon, eta, nodes)
        tm_min, tm_max, tm_mean = theta_band(tmsv(tmsv_squeezing(n_a, config.FIXED_NA)),
                                             epsilon, eta, nodes)
        rows.append({
            'n_A': n_a,
            'bound_max': upper,
            'bound_min': lower,
            'bound_coherent': coherent,
            'squeezed_min': sq_min,
            'squeezed_max': sq_max,
            'squeezed_mean': sq_mean,
            'tmsv_min': tm_min,
            'tmsv_max': tm_max,
            'tmsv_mean': tm_mean,
        })
    return pd.DataFrame(rows, columns=config.BAND_COLUMNS)
