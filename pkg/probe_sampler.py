"""
Uniform sampling of single-mode Gaussian probes at fixed mean photon number

Coordinates are drawn from the invariant measure of the Gaussian unitary
group: cosh(alpha), phi and psi uniform for pure states, and additionally
nu^3 uniform for mixed states. The displacement magnitude closes the
photon-number constraint nu cosh(2 alpha) + |xi|^2 = 2 n_A + 1.
"""

from __future__ import annotations

import logging

import numpy as np

import config
from gaussian_core import (
    GaussianState,
    apply_unitary,
    from_single_mode_params,
    local_unitary,
    tmsv,
)
from models import (
    GaussianStateError,
    NumericalDomainError,
    SingleModeProbeParams,
    TWO_PI,
)

logger = logging.getLogger(__name__)

FIXED_PHI = 0.0
FIXED_PSI = np.pi / 2.0


def _check_photon_number(n_a):
    if not np.isfinite(n_a) or n_a < 0.0:
        raise GaussianStateError(f"photon number must be finite and >= 0, got {n_a}")


def _cosh_alpha_max(n_a):
    """Largest cosh(alpha) with cosh(2 alpha) <= 2 n_A + 1"""
    return float(np.cosh(0.5 * np.arccosh(2.0 * n_a + 1.0)))


def _draw_angles(rng, fix_angles):
    if fix_angles:
        return FIXED_PHI, FIXED_PSI
    phi = rng.uniform(0.0, TWO_PI)
    psi = rng.uniform(0.0, TWO_PI)
    return phi, psi


def draw_pure_params(n_a, rng, fix_angles=False):
    """Pure-state coordinates; draw order is cosh(alpha), phi, psi"""
    _check_photon_number(n_a)
    u = rng.uniform(1.0, _cosh_alpha_max(n_a))
    phi, psi = _draw_angles(rng, fix_angles)
    xi_sq = max(2.0 * n_a + 2.0 - 2.0 * u * u, 0.0)
    return SingleModeProbeParams(nu=1.0, alpha=float(np.arccosh(u)), phi=phi,
                                 xi_mag=float(np.sqrt(xi_sq)), psi=psi)


def draw_mixed_params(n_a, rng, fix_angles=False):
    """Mixed-state coordinates by rejection on the (nu^3, cosh alpha) box"""
    _check_photon_number(n_a)
    budget = 2.0 * n_a + 1.0
    u_max = _cosh_alpha_max(n_a)
    for _ in range(config.MAX_REJECTION_ATTEMPTS):
        nu = rng.uniform(1.0, budget ** 3) ** (1.0 / 3.0)
        u = rng.uniform(1.0, u_max)
        cosh_2alpha = 2.0 * u * u - 1.0
        if nu * cosh_2alpha <= budget:
            break
    else:
        raise NumericalDomainError(
            f"rejection sampling exhausted {config.MAX_REJECTION_ATTEMPTS} attempts at n_A={n_a}")
    phi, psi = _draw_angles(rng, fix_angles)
    xi_sq = max(budget - nu * cosh_2alpha, 0.0)
    return SingleModeProbeParams(nu=nu, alpha=float(np.arccosh(u)), phi=phi,
                                 xi_mag=float(np.sqrt(xi_sq)), psi=psi)


def sample_pure_single_mode(n_a, rng, fix_angles=False):
    return from_single_mode_params(draw_pure_params(n_a, rng, fix_angles))


def sample_mixed_single_mode(n_a, rng, fix_angles=False):
    return from_single_mode_params(draw_mixed_params(n_a, rng, fix_angles))


def sample_batch(n_a, count, rng, kind=config.KIND_PURE, fix_angles=False):
    """`count` parameter draws in stream order"""
    if kind not in config.SAMPLE_KINDS:
        raise GaussianStateError(f"unknown sample kind {kind!r}")
    draw = draw_pure_params if kind == config.KIND_PURE else draw_mixed_params
    batch = [draw(n_a, rng, fix_angles) for _ in range(count)]
    logger.info(f"Drew {len(batch)} {kind} probes at n_A={n_a}")
    return batch


def _random_local(rng, squeeze_cap, displacement_cap):
    """Rotation-squeeze-rotation and a displacement for one mode"""
    phi_out = rng.uniform(0.0, TWO_PI)
    alpha = float(np.arccosh(rng.uniform(1.0, np.cosh(squeeze_cap))))
    phi_in = rng.uniform(0.0, TWO_PI)
    xi_mag = np.sqrt(rng.uniform(0.0, displacement_cap ** 2))
    psi = rng.uniform(0.0, TWO_PI)
    return local_unitary(phi_out, alpha, phi_in), xi_mag * np.array([np.cos(psi), np.sin(psi)])


def sample_two_mode_pure(nu, rng, squeeze_cap=config.LOCAL_SQUEEZE_CAP,
                         displacement_cap=config.LOCAL_DISPLACEMENT_CAP):
    """TMSV with reduced eigenvalue nu dressed by random local Gaussian unitaries"""
    if not np.isfinite(nu) or nu < 1.0 - config.PHYSICALITY_TOL:
        raise GaussianStateError(f"reduced symplectic eigenvalue must be >= 1, got {nu}")
    if squeeze_cap < 0.0 or displacement_cap < 0.0:
        raise GaussianStateError("local energy caps must be >= 0")
    state = tmsv(0.5 * np.arccosh(max(nu, 1.0)))
    shifts = []
    for mode in range(2):
        unitary, shift = _random_local(rng, squeeze_cap, displacement_cap)
        state = apply_unitary(state, unitary, mode)
        shifts.append(shift)
    return GaussianState(state.gamma, state.xi + np.concatenate(shifts))


def sampling_metadata(n_a, kind, count, rng, fix_angles=False):
    """Coordinates and generator state behind a sample table

    The photon-number constraint is closed by |xi|^2; the remaining
    coordinates are drawn uniformly. rng_state is the stream position after
    the batch, so a longer run can be continued from it.
    """
    free = ['cosh_alpha'] if kind == config.KIND_PURE else ['nu^3', 'cosh_alpha']
    if not fix_angles:
        free += ['phi', 'psi']
    return {
        'n_A': n_a,
        'kind': kind,
        'count': count,
        'seed': rng.seed,
        'fixed_angles': {'phi': FIXED_PHI, 'psi': FIXED_PSI} if fix_angles else None,
        'uniform_coordinates': free,
        'dependent_coordinate': 'xi_sq',
        'rng_state': rng.state,
    }
