"""
QFI of encoded one- and two-mode Gaussian states for squeezing-strength estimation

The encoding acts on mode A (mode 0) as loss, rotation by theta, squeezing by
epsilon, loss. Derivatives with respect to epsilon come either from the
analytic chain rule or from a Richardson-extrapolated central difference.
"""

from __future__ import annotations

import logging
from dataclasses import replace

import numpy as np

import config
from gaussian_core import (
    GaussianState,
    apply_loss,
    apply_unitary,
    embed_single_mode,
    loss_matrices,
    rotation_symplectic,
    squeeze_symplectic,
    symplectic_form,
    symplectic_spectrum,
)
from models import (
    EncodedDerivatives,
    GaussianStateError,
    NumericalDomainError,
    QfiResult,
    RankChangeError,
)

logger = logging.getLogger(__name__)

_Z = np.diag([1.0, -1.0])


def _mode_a_block(block, m):
    """2m x 2m matrix holding `block` on mode A and zeros elsewhere"""
    full = np.zeros((2 * m, 2 * m))
    mode = config.ENCODED_MODE
    full[2 * mode:2 * mode + 2, 2 * mode:2 * mode + 2] = block
    return full


# Encoding channel
def encode(probe, params):
    """Apply L_eta, R_theta, S_epsilon, L_eta on mode A"""
    mode = config.ENCODED_MODE
    state = apply_loss(probe, params.eta, mode)
    state = apply_unitary(state, rotation_symplectic(params.theta), mode)
    state = apply_unitary(state, squeeze_symplectic(params.epsilon), mode)
    return apply_loss(state, params.eta, mode)


def _encode_arrays(gamma, xi, params):
    """Encoded moments plus the pieces the analytic derivative needs"""
    m = gamma.shape[0] // 2
    mode = config.ENCODED_MODE
    k, noise = loss_matrices(params.eta, mode, m)
    u = (embed_single_mode(squeeze_symplectic(params.epsilon).s, mode, m)
         @ embed_single_mode(rotation_symplectic(params.theta).s, mode, m))
    gamma3 = u @ (k @ gamma @ k + noise) @ u.T
    xi3 = u @ (k @ xi)
    return gamma3, xi3, k, noise


# Derivatives of the encoded moments
def _invariant_rates(gamma, dgamma):
    """s = nu_1^2 + nu_2^2 and p = det Gamma with their epsilon-derivatives"""
    omega = symplectic_form(2)
    og = omega @ gamma
    s = -0.5 * np.trace(og @ og)
    ds = -np.trace(omega @ dgamma @ og)
    p = np.linalg.det(gamma)
    dp = p * np.trace(np.linalg.solve(gamma, dgamma))
    return float(s), float(ds), float(p), float(dp)


def _nu_rates(gamma, dgamma, nus):
    """Derivatives of the symplectic eigenvalues from the symplectic invariants"""
    if nus.size == 1:
        adj = np.array([[gamma[1, 1], -gamma[0, 1]], [-gamma[1, 0], gamma[0, 0]]])
        return np.array([np.trace(adj @ dgamma) / (2.0 * nus[0])])

    s, ds, p, dp = _invariant_rates(gamma, dgamma)
    if abs(nus[0] - nus[1]) <= config.DEGENERATE_NU_TOL:
        nu_bar = nus.mean()
        return np.full(2, ds / (4.0 * nu_bar))
    root = nus[0] ** 2 - nus[1] ** 2
    d_disc = 2.0 * s * ds - 4.0 * dp
    dnu_sq = 0.5 * np.array([ds + d_disc / (2.0 * root), ds - d_disc / (2.0 * root)])
    return dnu_sq / (2.0 * nus)


def _analytic_derivatives(probe, params):
    gamma3, xi3, k, noise = _encode_arrays(probe.gamma, probe.xi, params)
    encoded = GaussianState(k @ gamma3 @ k + noise, k @ xi3)
    # dS_eps/deps = Z S_eps on mode A, so only the state after S_eps is needed
    z = _mode_a_block(_Z, probe.mode_count)
    dgamma = k @ (z @ gamma3 + gamma3 @ z) @ k
    dxi = k @ (z @ xi3)
    nus = np.array(encoded.nus)
    if params.unitary:
        dnus = np.zeros_like(nus)
    else:
        dnus = _nu_rates(encoded.gamma, dgamma, nus)
    return EncodedDerivatives(encoded.gamma, encoded.xi, dgamma, dxi, nus, dnus)


def _moments_at(probe, params, epsilon):
    gamma3, xi3, k, noise = _encode_arrays(probe.gamma, probe.xi, replace(params, epsilon=epsilon))
    gamma = k @ gamma3 @ k + noise
    return gamma, k @ xi3, symplectic_spectrum(0.5 * (gamma + gamma.T))


def _finite_difference_derivatives(probe, params):
    """Central difference with one Richardson level on Gamma~, xi~ and the spectrum"""
    eps = params.epsilon
    h = config.FD_RELATIVE_STEP * max(1.0, abs(eps))
    if eps + 0.5 * h == eps or eps - 0.5 * h == eps:
        raise NumericalDomainError(f"finite-difference step underflows at epsilon={eps}")

    def central(step):
        upper = _moments_at(probe, params, eps + step)
        lower = _moments_at(probe, params, eps - step)
        return [(u - l) / (2.0 * step) for u, l in zip(upper, lower)]

    coarse = central(h)
    fine = central(0.5 * h)
    # (4 fine - coarse) / 3 removes the h^2 error term
    dgamma, dxi, dnus = [(4.0 * f - c) / 3.0 for f, c in zip(fine, coarse)]
    encoded = encode(probe, params)
    return EncodedDerivatives(encoded.gamma, encoded.xi, 0.5 * (dgamma + dgamma.T), dxi,
                              np.array(encoded.nus), dnus)


def encoded_derivatives(probe, params, mode=config.ANALYTIC):
    """Encoded moments and their derivatives with respect to epsilon

    The analytic path sets the eigenvalue derivatives to exactly zero for eta = 1.
    """
    if mode == config.ANALYTIC:
        return _analytic_derivatives(probe, params)
    if mode == config.FINITE_DIFFERENCE:
        return _finite_difference_derivatives(probe, params)
    raise ValueError(f"unknown derivative mode {mode!r}")


# QFI terms
def _trace_terms(gamma, dgamma):
    """Tr((M^-1 dM)^2) and Tr(((1 + M^2)^-1 dM)^2) for M = i Omega Gamma"""
    m = gamma.shape[0] // 2
    omega = symplectic_form(m)
    ginv_dg = np.linalg.solve(gamma, dgamma)
    t1 = np.trace(ginv_dg @ ginv_dg)
    og = omega @ gamma
    o = np.linalg.solve(np.eye(2 * m) - og @ og, omega)
    odg = o @ dgamma
    t2 = -np.trace(odg @ odg)
    return float(t1), float(t2)


def _displacement_term(enc):
    return float(2.0 * enc.dxi @ np.linalg.solve(enc.gamma_enc, enc.dxi))


def _guard_rank(nus, dnus):
    """Reject encoded spectra in the rank-change window"""
    for nu, dnu in zip(nus, dnus):
        excess = nu - 1.0
        if config.RANK_GUARD_LOWER < excess < config.RANK_GUARD_UPPER:
            raise RankChangeError(
                f"encoded symplectic eigenvalue {nu:.12g} lies in the rank-change regime")
        if excess <= config.RANK_GUARD_LOWER and abs(dnu) >= config.NU_DERIVATIVE_TOL:
            raise RankChangeError(
                f"pure encoded mode with nonzero eigenvalue rate {dnu:.3e} (rank-change regime)")


def _fully_lossy():
    return QfiResult.from_terms(0.0, 0.0, 0.0, flags=(config.FLAG_FULLY_LOSSY,))


def _two_mode_eigenvalue_term(enc, m_det):
    nus, dnus = enc.nus, enc.dnus
    if abs(nus[0] - nus[1]) <= config.DEGENERATE_NU_TOL:
        nu_bar = nus.mean()
        if nu_bar <= 1.0 + config.RANK_GUARD_LOWER:
            return 0.0, (config.FLAG_DEGENERATE,)
        # (nu_1^2 - nu_2^2)(dnu_2^2 - dnu_1^2) in terms of the invariants
        s, ds, p, dp = _invariant_rates(enc.gamma_enc, enc.dgamma)
        d_disc = 2.0 * s * ds - 4.0 * dp
        value = -d_disc * ds / (4.0 * nu_bar ** 2 * (nu_bar ** 4 - 1.0) * (m_det - 1.0))
        logger.debug(f"Degenerate encoded spectrum {nus}, eigenvalue term {value:.6g}")
        return value, (config.FLAG_DEGENERATE,)

    # pure modes contribute nothing
    bracket = 0.0
    for nu, dnu, sign in zip(nus, dnus, (-1.0, 1.0)):
        if nu <= 1.0 + config.RANK_GUARD_LOWER:
            continue
        bracket += sign * dnu ** 2 / (nu ** 4 - 1.0)
    return 2.0 * (nus[0] ** 2 - nus[1] ** 2) * bracket / (m_det - 1.0), ()


def _two_mode_terms(enc, params):
    m_det = float(np.prod(enc.nus ** 2))
    root = float(np.prod(1.0 + enc.nus ** 2))
    t1, t2 = _trace_terms(enc.gamma_enc, enc.dgamma)
    term_cov = (m_det * t1 + root * t2) / (2.0 * (m_det - 1.0))
    term_eig, flags = 0.0, ()
    if not params.unitary:
        term_eig, flags = _two_mode_eigenvalue_term(enc, m_det)
    return term_cov, term_eig, _displacement_term(enc), flags


# Regularization at purity
def _inflate(probe, delta):
    return GaussianState(probe.gamma * (1.0 + delta), probe.xi)


def _regularized(evaluate, probe):
    """Richardson limit 2 H(delta/2) - H(delta) over probes with Gamma scaled by 1 + delta"""
    coarse_delta, fine_delta = config.REGULARIZATION_STEPS
    coarse = evaluate(_inflate(probe, coarse_delta))
    fine = evaluate(_inflate(probe, fine_delta))
    terms = [2.0 * f - c for f, c in zip(fine[:3], coarse[:3])]
    flags = tuple(dict.fromkeys(fine[3] + coarse[3] + (config.FLAG_REGULARIZED,)))
    return QfiResult.from_terms(*terms, flags=flags)


def qfi_two_mode(probe, params, derivatives=config.ANALYTIC):
    """QFI of a two-mode probe with the encoding on mode A"""
    if probe.mode_count != 2:
        raise GaussianStateError("qfi_two_mode needs a two-mode probe")
    if params.eta == 0.0:
        return _fully_lossy()

    enc = encoded_derivatives(probe, params, derivatives)
    if not params.unitary:
        _guard_rank(enc.nus, enc.dnus)
    # |M| - 1 = nu_1^2 nu_2^2 - 1 vanishes on pure encoded states
    if float(np.prod(enc.nus ** 2)) - 1.0 < config.PURE_STATE_TOL:
        logger.debug("Pure encoded state, regularizing the two-mode QFI")
        return _regularized(
            lambda p: _two_mode_terms(encoded_derivatives(p, params, derivatives), params), probe)

    term_cov, term_eig, term_disp, flags = _two_mode_terms(enc, params)
    return QfiResult.from_terms(term_cov, term_eig, term_disp, flags=flags)


def qfi_single_mode(probe, params, derivatives=config.ANALYTIC):
    """QFI of a single-mode probe

    The determinant-rate term is dropped for eta = 1.
    """
    if probe.mode_count != 1:
        raise GaussianStateError("qfi_single_mode needs a single-mode probe")
    if params.eta == 0.0:
        return _fully_lossy()

    enc = encoded_derivatives(probe, params, derivatives)
    # Tr((M^-1 dM)^2) only enters through the determinant-rate identity
    nu = float(enc.nus[0])
    _, t2 = _trace_terms(enc.gamma_enc, enc.dgamma)
    term_cov = -(1.0 + nu ** 2) / 2.0 * t2
    term_eig = 0.0
    if not params.unitary:
        _guard_rank(enc.nus, enc.dnus)
        if nu > 1.0 + config.RANK_GUARD_LOWER:
            term_eig = 2.0 * nu ** 2 * float(enc.dnus[0]) ** 2 / (nu ** 4 - 1.0)
    return QfiResult.from_terms(term_cov, term_eig, _displacement_term(enc))


def qfi(probe, params, derivatives=config.ANALYTIC):
    """Dispatch on the number of modes"""
    if probe.mode_count == 1:
        return qfi_single_mode(probe, params, derivatives)
    return qfi_two_mode(probe, params, derivatives)


def verify_single_mode_identity(probe, params, derivatives=config.ANALYTIC):
    """|LHS - RHS| of the determinant-rate identity on the encoded single-mode state"""
    if probe.mode_count != 1:
        raise GaussianStateError("the identity check needs a single-mode probe")
    enc = encoded_derivatives(probe, params, derivatives)
    nu = float(enc.nus[0])
    t1, t2 = _trace_terms(enc.gamma_enc, enc.dgamma)
    lhs = -4.0 * float(enc.dnus[0]) ** 2
    rhs = -nu ** 2 * t1 - (1.0 + nu ** 2) ** 2 * t2
    return abs(lhs - rhs)


# Input-frame cross-check
def _generator(theta, m):
    """V_theta = R_theta^T Z R_theta on mode A, zero on B"""
    rot = rotation_symplectic(theta).s
    return _mode_a_block(rot.T @ _Z @ rot, m)


def _input_frame_value(probe, theta):
    gamma, xi = probe.gamma, probe.xi
    m = probe.mode_count
    v = _generator(theta, m)
    omega = symplectic_form(m)
    og = omega @ gamma
    o = np.linalg.solve(np.eye(2 * m) - og @ og, omega)
    t1 = 2.0 * np.trace(np.linalg.solve(gamma, v @ gamma @ v) + v @ v)
    x = o @ v @ gamma + o @ gamma @ v
    t2 = -np.trace(x @ x)
    disp = 2.0 * (v @ xi) @ np.linalg.solve(gamma, v @ xi)
    nus = probe.nus
    if m == 1:
        return float(-(1.0 + nus[0] ** 2) / 2.0 * t2 + disp)
    m_det = float(np.prod(nus ** 2))
    root = float(np.prod(1.0 + nus ** 2))
    return float((m_det * t1 + root * t2) / (2.0 * (m_det - 1.0)) + disp)


def qfi_noiseless_input_frame(probe, theta):
    """Unitary-encoding QFI from traces over the unencoded probe

    Independent of epsilon; used to cross-check the encoded-frame engine.
    """
    if probe.mode_count == 2 and float(np.prod(probe.nus ** 2)) - 1.0 < config.PURE_STATE_TOL:
        coarse_delta, fine_delta = config.REGULARIZATION_STEPS
        coarse = _input_frame_value(_inflate(probe, coarse_delta), theta)
        fine = _input_frame_value(_inflate(probe, fine_delta), theta)
        return 2.0 * fine - coarse
    return _input_frame_value(probe, theta)
