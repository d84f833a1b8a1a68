"""
Direction-averaged QFI: periodic quadrature over theta and closed forms
"""

from __future__ import annotations

import logging
from dataclasses import replace

import numpy as np

import config
from gaussian_core import GaussianState, assemble_standard_form
from models import (
    AvqfiResult,
    ConfigError,
    EncodingParams,
    GaussianStateError,
    NumericalDomainError,
    ThetaPrior,
    TWO_PI,
)
from qfi_engine import qfi

logger = logging.getLogger(__name__)


# Quadrature over theta
def theta_nodes(nodes):
    """Periodic trapezoid grid theta_k = 2 pi k / nodes"""
    if nodes < config.MIN_NODES or nodes % 2:
        raise ConfigError(f"quadrature needs an even node count >= {config.MIN_NODES}, got {nodes}")
    return np.arange(nodes) * (TWO_PI / nodes)


def qfi_theta_profile(probe, epsilon, eta, nodes=config.DEFAULT_NODES, derivatives=config.ANALYTIC):
    """QFI on every quadrature node; returns (thetas, values, flags)"""
    thetas = theta_nodes(nodes)
    values = np.empty(nodes)
    flags = {}
    for i, theta in enumerate(thetas):
        result = qfi(probe, EncodingParams(epsilon=epsilon, theta=theta, eta=eta), derivatives)
        values[i] = result.value
        flags.update(dict.fromkeys(result.flags))
    return thetas, values, tuple(flags)


def _weighted_stats(values, weights, nodes, method, flags=()):
    mean = float(weights @ values)
    variance = float(weights @ (values - mean) ** 2)
    return AvqfiResult(mean=mean, variance=variance, min_theta=float(values.min()),
                       max_theta=float(values.max()), quadrature_nodes=nodes,
                       method=method, flags=tuple(flags))


def avqfi_numeric(probe, epsilon, eta=1.0, prior=None, nodes=config.DEFAULT_NODES,
                  derivatives=config.ANALYTIC):
    """AvQFI by the trapezoid rule over theta, optionally weighted by a prior"""
    prior = prior or ThetaPrior.uniform()
    _, values, flags = qfi_theta_profile(probe, epsilon, eta, nodes, derivatives)
    return _weighted_stats(values, prior.weights(nodes), nodes, config.METHOD_QUADRATURE, flags)


def unrotated_params(p):
    """Same probe seen from its squeezing axis: phi = 0 and psi shifted by phi

    Rotating the probe shifts the QFI profile in theta, so any average over a
    uniform theta is unchanged.
    """
    return replace(p, phi=0.0, psi=p.psi + p.phi)


def _require_unrotated(p):
    if p.phi != 0.0:
        raise GaussianStateError(f"closed form assumes phi = 0, got phi = {p.phi}")


# Single-mode closed forms, unitary encoding
def qfi_sm_noiseless_theta(p, theta):
    """Unitary-encoding QFI of a single-mode probe with phi = 0"""
    _require_unrotated(p)
    nu, alpha = p.nu, p.alpha
    # theta enters through cos 4theta and, for the displacement, cos(4theta - 2psi)
    covariance = 4.0 * nu ** 2 / (nu ** 2 + 1.0) * (
        np.cosh(alpha) ** 4 + np.sinh(alpha) ** 4
        - 0.5 * np.cos(4.0 * theta) * np.sinh(2.0 * alpha) ** 2)
    displacement = 2.0 * p.xi_sq / nu * (
        np.cosh(2.0 * alpha) - np.sinh(2.0 * alpha) * np.cos(4.0 * theta - 2.0 * p.psi))
    return covariance + displacement


def avqfi_sm_noiseless(gamma_a, xi_mag):
    """Unitary-encoding AvQFI of a single-mode probe"""
    gamma = GaussianState(gamma_a).gamma
    tr, det = np.trace(gamma), np.linalg.det(gamma)
    return float((tr ** 2 + 4.0 * det) / (2.0 * (1.0 + det)) + xi_mag ** 2 * tr / det)


def avqfi_sm_noiseless_constrained(n_a, nu, xi_sq):
    """Single-mode AvQFI at fixed photon number as a function of nu and |xi|^2"""
    t = 2.0 * n_a + 1.0 - xi_sq
    if nu < 1.0 or t < nu:
        raise GaussianStateError(f"no single-mode state with n_A={n_a}, nu={nu}, |xi|^2={xi_sq}")
    return 2.0 * (t ** 2 + nu ** 2) / (1.0 + nu ** 2) + 2.0 * xi_sq * t / nu ** 2


def variance_coefficients(p):
    """Amplitudes (V1, V2) of the cos 4 theta harmonics of the unitary QFI"""
    s2a = np.sinh(2.0 * p.alpha)
    v1 = 2.0 * p.nu ** 2 / (p.nu ** 2 + 1.0) * s2a ** 2
    v2 = 2.0 * p.xi_sq / p.nu * s2a
    return float(v1), float(v2)


def qfi_variance_noiseless(p):
    """Variance over theta of the unitary QFI of a single-mode probe with phi = 0"""
    _require_unrotated(p)
    v1, v2 = variance_coefficients(p)
    return (v1 ** 2 + v2 ** 2 + 2.0 * v1 * v2 * np.cos(2.0 * p.psi)) / 2.0


# Two-mode closed forms, unitary encoding
def _two_mode_closed(p):
    det = np.linalg.det(assemble_standard_form(p).gamma)
    ax, ap, axp, b, c, d = p.a_x, p.a_p, p.a_xp, p.b, p.c, p.d

    # only the displacement of A survives the standard form
    h_disp = b * p.xi_sq / det * (b * (ax + ap) - c ** 2 - d ** 2)

    # singular on pure states; avqfi_two_mode_noiseless regularizes those
    den = -b ** 2 * axp ** 2 + (c ** 2 - ax * b) * (d ** 2 - b * ap) - 1.0
    den_second = (ax * ap + b ** 2 * (ax * ap - axp ** 2 + 1.0) - b * (ap * c ** 2 + ax * d ** 2)
                  - axp ** 2 + (c * d + 1.0) ** 2)
    if abs(den_second) < config.PURE_STATE_TOL:
        raise NumericalDomainError("two-mode closed form is singular at this state")

    first = (c ** 2 * (4.0 * d ** 2 - b * (ax + 5.0 * ap))
             + b * (b * (ax ** 2 + 6.0 * ax * ap + ap ** 2 - 4.0 * axp ** 2) - d ** 2 * (5.0 * ax + ap)))
    second = (4.0 * (b ** 2 + c * d + 1.0)
              * (-(b ** 2 + 1.0) * axp ** 2 + ax * (ap * b ** 2 - b * d ** 2 + ap)
                 + c ** 2 * (d ** 2 - b * ap) + c * d)
              + (ax + b ** 2 * (ax + ap) - b * (c ** 2 + d ** 2) + ap) ** 2)
    return float(h_disp + first / (2.0 * den) - second / (2.0 * den * den_second))


def _scaled(p, factor):
    return replace(p, a_x=p.a_x * factor, a_p=p.a_p * factor, a_xp=p.a_xp * factor,
                   b=p.b * factor, c=p.c * factor, d=p.d * factor)


def avqfi_two_mode_noiseless(p):
    """Unitary-encoding AvQFI of a two-mode probe in standard form

    The expression divides by det Gamma - 1; pure states are evaluated by the
    same covariance inflation and Richardson step as the QFI engine.
    """
    det = np.linalg.det(assemble_standard_form(p).gamma)
    if det - 1.0 >= config.PURE_STATE_TOL:
        return _two_mode_closed(p)
    logger.debug("Pure two-mode state, regularizing the closed form")
    coarse_delta, fine_delta = config.REGULARIZATION_STEPS
    fine = _two_mode_closed(_scaled(p, 1.0 + fine_delta))
    coarse = _two_mode_closed(_scaled(p, 1.0 + coarse_delta))
    return 2.0 * fine - coarse


def avqfi_tmsv_noiseless(r):
    """4 sinh^4 r + 4 sinh^2 r + 2"""
    s2 = np.sinh(r) ** 2
    return float(4.0 * s2 ** 2 + 4.0 * s2 + 2.0)


# Single-mode closed form under loss
def _noisy_closed_profile(p, epsilon, eta, theta):
    """Vectorized single-mode noisy QFI over an array of theta"""
    nu, a, e = p.nu, p.alpha, epsilon
    xx = p.xi_mag * np.cos(p.psi)
    xp = p.xi_mag * np.sin(p.psi)
    c2t, c4t, s2t, s4t = np.cos(2 * theta), np.cos(4 * theta), np.sin(2 * theta), np.sin(4 * theta)
    e2a, e4a = np.exp(2 * a), np.exp(4 * a)
    ch2a, ch4a, sh2a = np.cosh(2 * a), np.cosh(4 * a), np.sinh(2 * a)
    ch2e, sh2e = np.cosh(2 * e), np.sinh(2 * e)

    # numerators; n1 carries (1 - eta)^2 eta^2 and vanishes at both ends
    n1 = ((eta - 1) ** 2 * eta ** 2 * np.exp(-4 * (a + e))
          * ((e4a - 1) * eta * nu * (np.exp(4 * e) + 1) * c2t
             + 4 * np.exp(2 * (a + e)) * sh2e * (eta * nu * ch2a - eta + 1)) ** 2)
    n2 = np.exp(-2 * a) * eta ** 2 * (
        (e4a - 1) ** 2 * eta ** 2 * nu ** 2 * c4t
        - 2 * e4a * (eta * nu * (eta * nu * ch4a - 8 * (eta - 1) * ch2a)
                     + eta * (eta * (3 * nu ** 2 + 4) - 8) + 4))
    n3 = eta ** 2 * (
        -eta * (-2 * (e4a - 1) * eta * nu * s4t * xp * xx
                + (e4a - 1) * eta * nu * c4t * (xp - xx) * (xp + xx)
                + 2 * e2a * (xp ** 2 + xx ** 2) * (eta * nu * ch2a - eta + 1))
        + 2 * e2a * (eta - 1) * sh2e * (-c2t * xp ** 2 + 2 * s2t * xp * xx + c2t * xx ** 2)
        + 2 * e2a * (eta - 1) * ch2e * (xp ** 2 + xx ** 2))

    # denominators; d1 is solved from its defining relation with rhs
    d2 = 2 * (e4a * (eta - 1) * eta ** 2 * nu * (eta + c2t * sh2e + ch2e)
              - e2a * (eta * (eta * (eta * (eta * nu ** 2 + eta - 2) + 2) - 2)
                       + 2 * eta * (eta - 1) ** 2 * ch2e + 2)
              + (eta - 1) * eta ** 2 * nu * (eta - c2t * sh2e + ch2e))
    d3 = e2a * (2 * (eta - 1) * eta * (eta * nu * sh2a * c2t * sh2e + eta * nu * ch2a * (eta + ch2e)
                                      - (eta - 1) * ch2e)
                - eta ** 4 * nu ** 2 - (eta - 1) ** 2 * (eta ** 2 + 1))
    rhs = ((e4a - 1) * (1 - eta) * eta ** 2 * nu * (np.exp(4 * e) - 1) * c2t
           + 2 * np.exp(2 * (a + e)) * (2 * (1 - eta) * eta * (eta * nu * ch2a * (eta + ch2e) + (1 - eta) * ch2e)
                                        + eta ** 4 * nu ** 2 + (1 - eta) ** 2 * (eta ** 2 + 1)))
    d1 = 2 * (rhs ** 2 / (4 * np.exp(4 * (a + e))) - 1)

    # 0 / 0 at pure encoded states counts as 0
    with np.errstate(divide='ignore', invalid='ignore'):
        first = np.where(n1 == 0.0, 0.0, n1 / d1)
        second = np.where(n2 == 0.0, 0.0, n2 / d2)
        third = np.where(n3 == 0.0, 0.0, n3 / d3)
    values = first + second + third
    if not np.all(np.isfinite(values)):
        raise NumericalDomainError(f"noisy closed form is singular at epsilon={epsilon}, eta={eta}")
    return values


def qfi_sm_noisy_closed(p, epsilon, eta, theta):
    """Lossy-encoding QFI of a single-mode probe with phi = 0, valid for epsilon > 0"""
    _require_unrotated(p)
    if epsilon <= 0.0:
        raise NumericalDomainError(f"noisy closed form needs epsilon > 0, got {epsilon}")
    if not 0.0 <= eta <= 1.0:
        raise GaussianStateError(f"transmissivity eta must lie in [0, 1], got {eta}")
    return float(_noisy_closed_profile(p, epsilon, eta, np.asarray(theta, dtype=float)))


def avqfi_sm_noisy(p, epsilon, eta, nodes=config.DEFAULT_NODES, prior=None):
    """Quadrature of the noisy closed form over theta"""
    _require_unrotated(p)
    if epsilon <= 0.0:
        raise NumericalDomainError(f"noisy closed form needs epsilon > 0, got {epsilon}")
    prior = prior or ThetaPrior.uniform()
    values = _noisy_closed_profile(p, epsilon, eta, theta_nodes(nodes))
    return _weighted_stats(values, prior.weights(nodes), nodes, config.METHOD_QUADRATURE)


# Bounds at fixed photon number
def avqfi_bounds_noiseless(n_a):
    """(pure squeezed, thermal, coherent) unitary-encoding AvQFI at photon number n_A"""
    if n_a < 0.0:
        raise GaussianStateError(f"photon number must be >= 0, got {n_a}")
    upper = 4.0 * n_a ** 2 + 4.0 * n_a + 2.0
    lower = 4.0 * (2.0 * n_a + 1.0) ** 2 / (1.0 + (2.0 * n_a + 1.0) ** 2)
    coherent = 2.0 * (1.0 + 2.0 * n_a)
    return upper, lower, coherent
