"""
Data models for the Gaussian squeezing-metrology toolkit
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

import config

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi


class ToolkitError(Exception):
    """Base class for all toolkit errors"""


class ConfigError(ToolkitError, ValueError):
    """Malformed input, invalid grid or invalid run configuration"""


class GaussianStateError(ToolkitError, ValueError):
    """Non-physical state, dimension mismatch or invalid state parameters"""


class NumericalDomainError(ToolkitError, ArithmeticError):
    """Evaluation outside the numerically valid domain"""


class RankChangeError(NumericalDomainError):
    """Encoded symplectic eigenvalue inside the rank-change window"""


def reduce_angle(angle):
    """Reduce an angle to [0, 2pi)"""
    reduced = float(np.mod(angle, TWO_PI))
    return 0.0 if reduced == TWO_PI else reduced


def _require_finite(name, value):
    if not np.isfinite(value):
        raise GaussianStateError(f"{name} must be finite, got {value}")


@dataclass(frozen=True)
class SymplecticMatrix:
    """Real 2m x 2m matrix preserving the symplectic form"""

    s: np.ndarray

    def __post_init__(self):
        s = np.array(self.s, dtype=float)
        if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] % 2:
            raise GaussianStateError(f"symplectic matrix must be 2m x 2m, got shape {s.shape}")
        if not np.all(np.isfinite(s)):
            raise GaussianStateError("symplectic matrix has non-finite entries")
        m = s.shape[0] // 2
        omega = np.kron(np.eye(m), np.array([[0.0, 1.0], [-1.0, 0.0]]))
        deviation = np.max(np.abs(s @ omega @ s.T - omega))
        if deviation > config.SYMPLECTIC_TOL * max(1.0, np.max(np.abs(s)) ** 2):
            raise GaussianStateError(f"matrix is not symplectic (deviation {deviation:.3e})")
        s.setflags(write=False)
        object.__setattr__(self, 's', s)

    @property
    def mode_count(self):
        return self.s.shape[0] // 2


@dataclass(frozen=True)
class SingleModeProbeParams:
    """Canonical single-mode parametrization (nu, alpha, phi, |xi|, psi)"""

    nu: float = 1.0
    alpha: float = 0.0
    phi: float = 0.0
    xi_mag: float = 0.0
    psi: float = 0.0

    def __post_init__(self):
        for name in ('nu', 'alpha', 'phi', 'xi_mag', 'psi'):
            _require_finite(name, getattr(self, name))
        if self.nu < 1.0 - config.PHYSICALITY_TOL:
            raise GaussianStateError(f"symplectic eigenvalue nu must be >= 1, got {self.nu}")
        if self.alpha < 0.0:
            raise GaussianStateError(f"squeezing magnitude alpha must be >= 0, got {self.alpha}")
        if self.xi_mag < 0.0:
            raise GaussianStateError(f"displacement magnitude must be >= 0, got {self.xi_mag}")
        object.__setattr__(self, 'nu', max(float(self.nu), 1.0))
        object.__setattr__(self, 'phi', reduce_angle(self.phi))
        object.__setattr__(self, 'psi', reduce_angle(self.psi))

    @property
    def xi_sq(self):
        return self.xi_mag ** 2

    @property
    def photon_number(self):
        """Mean photon number (nu cosh 2alpha - 1 + |xi|^2) / 2"""
        return (self.nu * np.cosh(2.0 * self.alpha) - 1.0 + self.xi_sq) / 2.0

    @property
    def xi_vector(self):
        return self.xi_mag * np.array([np.cos(self.psi), np.sin(self.psi)])


@dataclass(frozen=True)
class StandardFormParams:
    """Reduced two-mode parameters reachable by local operations"""

    a_x: float
    a_p: float
    a_xp: float
    b: float
    c: float
    d: float
    xi_x: float = 0.0
    xi_p: float = 0.0

    def __post_init__(self):
        for name in ('a_x', 'a_p', 'a_xp', 'b', 'c', 'd', 'xi_x', 'xi_p'):
            _require_finite(name, getattr(self, name))
        if self.b < 1.0 - config.PHYSICALITY_TOL:
            raise GaussianStateError(f"standard-form b must be >= 1, got {self.b}")

    @property
    def xi_sq(self):
        return self.xi_x ** 2 + self.xi_p ** 2


@dataclass(frozen=True)
class EncodingParams:
    """Squeezing strength, squeezing direction and transmissivity of the encoding"""

    epsilon: float = 0.0
    theta: float = 0.0
    eta: float = 1.0

    def __post_init__(self):
        for name in ('epsilon', 'theta', 'eta'):
            _require_finite(name, getattr(self, name))
        if not 0.0 <= self.eta <= 1.0:
            raise GaussianStateError(f"transmissivity eta must lie in [0, 1], got {self.eta}")
        object.__setattr__(self, 'theta', reduce_angle(self.theta))

    @property
    def unitary(self):
        return self.eta == 1.0


@dataclass(frozen=True)
class EncodedDerivatives:
    """Encoded moments, their epsilon-derivatives and the encoded symplectic spectrum"""

    gamma_enc: np.ndarray
    xi_enc: np.ndarray
    dgamma: np.ndarray
    dxi: np.ndarray
    nus: np.ndarray
    dnus: np.ndarray

    def __post_init__(self):
        for name in ('dgamma', 'dxi', 'dnus'):
            if not np.all(np.isfinite(getattr(self, name))):
                raise NumericalDomainError(f"derivative {name} has non-finite entries")

    @property
    def mode_count(self):
        return self.gamma_enc.shape[0] // 2

    @property
    def m_enc(self):
        """Real matrix Omega Gamma~ standing for M~ = i Omega Gamma~"""
        m = self.mode_count
        omega = np.kron(np.eye(m), np.array([[0.0, 1.0], [-1.0, 0.0]]))
        return omega @ self.gamma_enc


@dataclass(frozen=True)
class QfiResult:
    """QFI value split into covariance, eigenvalue and displacement contributions"""

    value: float
    term_covariance: float
    term_eigenvalues: float
    term_displacement: float
    flags: tuple = ()

    @classmethod
    def from_terms(cls, term_covariance, term_eigenvalues, term_displacement, flags=()):
        """Sum the terms, clamping tiny negative totals to zero"""
        total = term_covariance + term_eigenvalues + term_displacement
        if not np.isfinite(total):
            raise NumericalDomainError("QFI evaluation produced a non-finite value")
        scale = max(1.0, abs(term_covariance) + abs(term_eigenvalues) + abs(term_displacement))
        flags = tuple(flags)
        if total < 0.0:
            if total < -config.QFI_NEGATIVE_TOL * scale:
                raise NumericalDomainError(f"QFI evaluated to {total:.6e} < 0")
            logger.warning(f"Clamping QFI {total:.3e} to zero")
            total = 0.0
            flags = flags + (config.FLAG_CLAMPED,)
        return cls(float(total), float(term_covariance), float(term_eigenvalues),
                   float(term_displacement), flags)

    def to_dict(self):
        return {
            'value': self.value,
            'term_covariance': self.term_covariance,
            'term_eigenvalues': self.term_eigenvalues,
            'term_displacement': self.term_displacement,
            'flags': list(self.flags),
        }


@dataclass(frozen=True)
class AvqfiResult:
    """QFI statistics over the squeezing direction

    Closed-form results carry no node count and may lack the theta extremes.
    """

    mean: float
    variance: Optional[float]
    min_theta: Optional[float]
    max_theta: Optional[float]
    quadrature_nodes: int
    method: str
    flags: tuple = ()

    def __post_init__(self):
        if self.min_theta is not None and self.max_theta is not None:
            slack = 1e-9 * max(1.0, abs(self.mean))
            if not (self.min_theta - slack <= self.mean <= self.max_theta + slack):
                raise NumericalDomainError(
                    f"mean {self.mean} outside [{self.min_theta}, {self.max_theta}]")
        if self.variance is not None and self.variance < 0.0:
            object.__setattr__(self, 'variance', 0.0)

    @classmethod
    def closed_form(cls, mean, variance=None, min_theta=None, max_theta=None):
        return cls(mean=float(mean), variance=variance, min_theta=min_theta, max_theta=max_theta,
                   quadrature_nodes=0, method=config.METHOD_CLOSED_FORM)

    def to_dict(self):
        return {
            'mean': self.mean,
            'variance': self.variance,
            'min_theta': self.min_theta,
            'max_theta': self.max_theta,
            'quadrature_nodes': self.quadrature_nodes,
            'method': self.method,
            'flags': list(self.flags),
        }


@dataclass(frozen=True)
class ThetaPrior:
    """Uniform or tabulated density of the squeezing direction on [0, 2pi)"""

    theta: Optional[np.ndarray] = None
    density: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.theta is None and self.density is None:
            return
        if self.theta is None or self.density is None:
            raise ConfigError("tabulated prior needs both theta and density")
        theta = np.mod(np.asarray(self.theta, dtype=float), TWO_PI)
        density = np.asarray(self.density, dtype=float)
        if theta.ndim != 1 or theta.shape != density.shape or theta.size < 2:
            raise ConfigError("prior table needs at least two (theta, density) rows")
        if not (np.all(np.isfinite(theta)) and np.all(np.isfinite(density))):
            raise ConfigError("prior table has non-finite entries")
        if np.any(density < 0.0):
            raise ConfigError("prior density must be nonnegative")
        order = np.argsort(theta)
        theta, density = theta[order], density[order]
        norm = _periodic_trapezoid(theta, density)
        if norm <= 0.0:
            raise ConfigError("prior density integrates to zero")
        if abs(norm - 1.0) > config.NORMALIZATION_TOL:
            logger.info(f"Normalizing prior density (integral was {norm:.6g})")
        object.__setattr__(self, 'theta', theta)
        object.__setattr__(self, 'density', density / norm)

    @classmethod
    def uniform(cls):
        return cls()

    @property
    def is_uniform(self):
        return self.theta is None

    def weights(self, nodes):
        """Quadrature weights on the periodic node grid, summing to one"""
        if self.is_uniform:
            return np.full(nodes, 1.0 / nodes)
        grid = np.arange(nodes) * (TWO_PI / nodes)
        values = np.interp(grid, self.theta, self.density, period=TWO_PI)
        total = values.sum()
        if total <= 0.0:
            raise ConfigError("prior density vanishes on every quadrature node")
        return values / total


def _periodic_trapezoid(theta, density):
    """Integral over [0, 2pi) of the periodic linear interpolant"""
    closed_theta = np.append(theta, theta[0] + TWO_PI)
    closed_density = np.append(density, density[0])
    return float(np.sum(0.5 * (closed_density[1:] + closed_density[:-1]) * np.diff(closed_theta)))


@dataclass
class SeededRng:
    """PCG64 stream owned by one sampler"""

    seed: int
    generator: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        self.seed = int(self.seed)
        self.generator = np.random.Generator(np.random.PCG64(self.seed))

    def uniform(self, low=0.0, high=1.0):
        return float(self.generator.uniform(low, high))

    @property
    def state(self):
        return self.generator.bit_generator.state


@dataclass(frozen=True)
class SweepSpec:
    """Grid of photon budgets and transmissivities at one encoding strength"""

    budgets: tuple
    etas: tuple
    epsilon: float
    comparison_mode: str = config.FIXED_NA
    nodes: int = config.DEFAULT_NODES
    seed: int = config.DEFAULT_SEED
    workers: int = 1
    exhaustive: bool = False

    def __post_init__(self):
        budgets = tuple(float(x) for x in np.atleast_1d(self.budgets))
        etas = tuple(float(x) for x in np.atleast_1d(self.etas))
        if not budgets or not etas:
            raise ConfigError("sweep ranges must be nonempty")
        if any(not np.isfinite(x) or x <= 0.0 for x in budgets):
            raise ConfigError("photon budgets must be finite and positive")
        if any(not np.isfinite(x) or not 0.0 <= x <= 1.0 for x in etas):
            raise ConfigError("transmissivities must lie in [0, 1]")
        if self.comparison_mode not in config.COMPARISON_MODES:
            raise ConfigError(f"unknown comparison mode {self.comparison_mode!r}")
        if not np.isfinite(self.epsilon):
            raise ConfigError("epsilon must be finite")
        if self.epsilon <= 0.0 and any(eta < 1.0 for eta in etas):
            raise ConfigError("epsilon must be positive when eta < 1")
        if self.nodes < config.MIN_NODES or self.nodes % 2:
            raise ConfigError(f"quadrature nodes must be even and >= {config.MIN_NODES}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        object.__setattr__(self, 'budgets', budgets)
        object.__setattr__(self, 'etas', etas)

    def grid(self):
        """Grid points (budget, eta) in row-major order"""
        return [(budget, eta) for budget in self.budgets for eta in self.etas]


@dataclass(frozen=True)
class SweepRecord:
    """One evaluated grid point with its optimal single-mode probe and the TMSV comparison"""

    budget: float
    eta: float
    epsilon: float
    comparison_mode: str
    optimal_ratio: float = float('nan')
    avqfi_single_opt: float = float('nan')
    avqfi_tmsv: float = float('nan')
    increase: float = float('nan')
    flags: tuple = ()
    error: Optional[str] = None

    def to_row(self):
        return {
            config.BUDGET_COLUMN[self.comparison_mode]: self.budget,
            'eta': self.eta,
            'epsilon': self.epsilon,
            'optimal_ratio': self.optimal_ratio,
            'avqfi_single_opt': self.avqfi_single_opt,
            'avqfi_tmsv': self.avqfi_tmsv,
            'increase': self.increase,
            'flags': config.FLAG_SEPARATOR.join(self.flags),
            'error': self.error or '',
        }
