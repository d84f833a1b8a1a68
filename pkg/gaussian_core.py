"""
Gaussian states, symplectic actions and channels on one or two modes

Conventions: quadratures ordered (x_1, p_1, x_2, p_2), vacuum covariance equal
to the identity, R_theta = [[cos, sin], [-sin, cos]], S_alpha = diag(e^alpha, e^-alpha).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

import config
from models import (
    GaussianStateError,
    NumericalDomainError,
    SingleModeProbeParams,
    StandardFormParams,
    SymplecticMatrix,
)

logger = logging.getLogger(__name__)

_J = np.array([[0.0, 1.0], [-1.0, 0.0]])
_FLIP = np.diag([1.0, -1.0])


def symplectic_form(m):
    """Return Omega, the direct sum of [[0, 1], [-1, 0]] over m modes"""
    return np.kron(np.eye(m), _J)


def symplectic_spectrum(gamma):
    """Symplectic eigenvalues of a covariance matrix, descending and unclamped

    Computed from the purely imaginary eigenvalue pairs +-i nu of Omega Gamma.
    """
    m = gamma.shape[0] // 2
    eigvals = np.linalg.eigvals(symplectic_form(m) @ gamma)
    if not np.all(np.isfinite(eigvals)):
        raise NumericalDomainError("non-finite eigenvalues while computing the symplectic spectrum")
    moduli = np.sort(np.abs(eigvals.imag))[::-1].reshape(m, 2)
    spread = np.abs(moduli[:, 0] - moduli[:, 1])
    if np.any(spread > config.EIGENVALUE_PAIR_TOL * np.maximum(1.0, moduli[:, 0])):
        raise GaussianStateError("eigenvalues of Omega Gamma do not form +-i nu pairs")
    return moduli.mean(axis=1)


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Covariance matrix and displacement of a one- or two-mode Gaussian state"""

    gamma: np.ndarray
    xi: np.ndarray = None
    _nus: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        gamma = np.array(self.gamma, dtype=float)
        if gamma.shape not in ((2, 2), (4, 4)):
            raise GaussianStateError(f"covariance matrix must be 2x2 or 4x4, got shape {gamma.shape}")
        dim = gamma.shape[0]
        xi = np.zeros(dim) if self.xi is None else np.array(self.xi, dtype=float).reshape(-1)
        if xi.shape != (dim,):
            raise GaussianStateError(f"displacement must have {dim} entries, got {xi.size}")
        if not (np.all(np.isfinite(gamma)) and np.all(np.isfinite(xi))):
            raise GaussianStateError("state has non-finite entries")

        asymmetry = np.max(np.abs(gamma - gamma.T))
        if asymmetry > config.SYMMETRY_TOL * max(1.0, np.max(np.abs(gamma))):
            raise GaussianStateError(f"covariance matrix is not symmetric (deviation {asymmetry:.3e})")
        gamma = 0.5 * (gamma + gamma.T)

        if np.linalg.eigvalsh(gamma)[0] <= 0.0:
            raise GaussianStateError("covariance matrix is not positive definite")
        nus = symplectic_spectrum(gamma)
        if nus[-1] < 1.0 - config.PHYSICALITY_TOL:
            raise GaussianStateError(
                f"state violates the uncertainty relation (smallest symplectic eigenvalue {nus[-1]:.12g})")

        gamma.setflags(write=False)
        xi.setflags(write=False)
        nus = np.maximum(nus, 1.0)
        nus.setflags(write=False)
        object.__setattr__(self, 'gamma', gamma)
        object.__setattr__(self, 'xi', xi)
        object.__setattr__(self, '_nus', nus)

    @classmethod
    def vacuum(cls, modes=1):
        return cls(np.eye(2 * modes), np.zeros(2 * modes))

    @classmethod
    def thermal(cls, nu):
        return cls(nu * np.eye(2))

    @classmethod
    def coherent(cls, xi_x, xi_p):
        return cls(np.eye(2), np.array([xi_x, xi_p]))

    @classmethod
    def from_dict(cls, data):
        """Build a state from the {"modes", "gamma", "xi"} mapping"""
        try:
            modes = int(data['modes'])
            gamma = np.array(data['gamma'], dtype=float)
            xi = np.array(data.get('xi', np.zeros(2 * modes)), dtype=float)
        except (KeyError, TypeError, ValueError) as e:
            raise GaussianStateError(f"malformed state mapping: {e}") from e
        if gamma.shape != (2 * modes, 2 * modes):
            raise GaussianStateError(f"'modes'={modes} does not match gamma of shape {gamma.shape}")
        return cls(gamma, xi)

    def to_dict(self):
        return {
            'modes': self.mode_count,
            'gamma': self.gamma.tolist(),
            'xi': self.xi.tolist(),
        }

    @property
    def mode_count(self):
        return self.gamma.shape[0] // 2

    @property
    def nus(self):
        """Symplectic eigenvalues, descending, clamped to >= 1"""
        return self._nus

    @property
    def is_pure(self):
        return bool(np.all(self._nus <= 1.0 + config.PHYSICALITY_TOL))

    def block(self, mode):
        """Covariance block of one mode"""
        return self.gamma[2 * mode:2 * mode + 2, 2 * mode:2 * mode + 2]

    def xi_block(self, mode):
        return self.xi[2 * mode:2 * mode + 2]


def rotation_symplectic(theta):
    """Phase rotation R_theta"""
    c, s = np.cos(theta), np.sin(theta)
    return SymplecticMatrix(np.array([[c, s], [-s, c]]))


def squeeze_symplectic(alpha):
    """Single-mode squeezer S_alpha = diag(e^alpha, e^-alpha)"""
    return SymplecticMatrix(np.diag([np.exp(alpha), np.exp(-alpha)]))


def local_unitary(phi_out, alpha, phi_in):
    """Rotation-squeeze-rotation R_phi_out S_alpha R_phi_in on one mode"""
    matrix = (rotation_symplectic(phi_out).s @ squeeze_symplectic(alpha).s
              @ rotation_symplectic(phi_in).s)
    return SymplecticMatrix(matrix)


def embed_single_mode(block, mode, m):
    """Place a 2x2 block on one mode of an m-mode identity"""
    full = np.eye(2 * m)
    full[2 * mode:2 * mode + 2, 2 * mode:2 * mode + 2] = block
    return full


def _check_mode(state, mode):
    if not 0 <= mode < state.mode_count:
        raise GaussianStateError(f"mode {mode} out of range for a {state.mode_count}-mode state")


def apply_unitary(state, s, modes=None):
    """Apply a Gaussian unitary: Gamma -> U Gamma U^T, xi -> U xi

    `modes` is None to act on every mode, or a mode index for a single-mode s.
    """
    s = s if isinstance(s, SymplecticMatrix) else SymplecticMatrix(s)
    m = state.mode_count
    if modes is None:
        if s.mode_count != m:
            raise GaussianStateError(f"{s.mode_count}-mode symplectic matrix on a {m}-mode state")
        u = s.s
    else:
        _check_mode(state, modes)
        if s.mode_count != 1:
            raise GaussianStateError("a mode index selects a single-mode symplectic matrix")
        u = embed_single_mode(s.s, modes, m)
    return GaussianState(u @ state.gamma @ u.T, u @ state.xi)


def loss_matrices(eta, mode, m):
    """Return (K, N N^T) of the pure-loss channel on one mode"""
    if not 0.0 <= eta <= 1.0:
        raise GaussianStateError(f"transmissivity eta must lie in [0, 1], got {eta}")
    k = embed_single_mode(np.sqrt(eta) * np.eye(2), mode, m)
    noise = np.zeros((2 * m, 2 * m))
    noise[2 * mode:2 * mode + 2, 2 * mode:2 * mode + 2] = (1.0 - eta) * np.eye(2)
    return k, noise


def apply_loss(state, eta, mode=0):
    """Pure-loss channel of transmissivity eta on one mode"""
    _check_mode(state, mode)
    k, noise = loss_matrices(eta, mode, state.mode_count)
    return GaussianState(k @ state.gamma @ k.T + noise, k @ state.xi)


def symplectic_eigenvalues(state):
    """Symplectic eigenvalues of a state, descending"""
    return np.array(state.nus)


def mean_photon_number(state, mode=0):
    """Mean photon number (Tr Gamma_mode / 2 + |xi_mode|^2 - 1) / 2"""
    _check_mode(state, mode)
    block = state.block(mode)
    xi = state.xi_block(mode)
    return float((np.trace(block) / 2.0 + xi @ xi - 1.0) / 2.0)


def total_photon_number(state):
    return sum(mean_photon_number(state, mode) for mode in range(state.mode_count))


def partial_trace(state, keep=0):
    """Reduced single-mode state of a two-mode state"""
    if state.mode_count != 2:
        raise GaussianStateError("partial trace needs a two-mode state")
    _check_mode(state, keep)
    return GaussianState(state.block(keep), state.xi_block(keep))


def product_state(state_a, state_b):
    """Tensor product of two single-mode states"""
    if state_a.mode_count != 1 or state_b.mode_count != 1:
        raise GaussianStateError("product_state combines two single-mode states")
    gamma = np.zeros((4, 4))
    gamma[:2, :2] = state_a.gamma
    gamma[2:, 2:] = state_b.gamma
    return GaussianState(gamma, np.concatenate([state_a.xi, state_b.xi]))


def from_single_mode_params(p):
    """Gamma = nu R_phi S_2alpha R_phi^T, xi = |xi| (cos psi, sin psi)"""
    rot = rotation_symplectic(p.phi).s
    squeezed = np.diag([np.exp(2.0 * p.alpha), np.exp(-2.0 * p.alpha)])
    return GaussianState(p.nu * rot @ squeezed @ rot.T, p.xi_vector)


def single_mode_params(state):
    """Recover (nu, alpha, phi, |xi|, psi) of a single-mode state"""
    if state.mode_count != 1:
        raise GaussianStateError("single_mode_params needs a single-mode state")
    nu = float(state.nus[0])
    eigvals, eigvecs = np.linalg.eigh(state.gamma / nu)
    alpha = 0.5 * np.log(max(eigvals[1], 1.0))
    if alpha > 0.0:
        v = eigvecs[:, 1]
        phi = np.mod(np.arctan2(-v[1], v[0]), np.pi)
    else:
        phi = 0.0
    xi_mag = float(np.hypot(*state.xi))
    psi = float(np.arctan2(state.xi[1], state.xi[0])) if xi_mag > 0.0 else 0.0
    return SingleModeProbeParams(nu=nu, alpha=alpha, phi=phi, xi_mag=xi_mag, psi=psi)


def tmsv(r):
    """Two-mode squeezed vacuum with a = b = cosh 2r, c = -d = sinh 2r"""
    ch, sh = np.cosh(2.0 * r), np.sinh(2.0 * r)
    gamma = np.block([[ch * np.eye(2), sh * _FLIP], [sh * _FLIP, ch * np.eye(2)]])
    return GaussianState(gamma, np.zeros(4))


@dataclass(frozen=True)
class StandardFormTransform:
    """Local operations taking a two-mode state to its standard form

    local_a is a phase rotation on A, local_b a symplectic matrix on B; the
    displacement of B is removed.
    """

    local_a: np.ndarray
    local_b: np.ndarray

    def apply(self, state):
        u = np.zeros((4, 4))
        u[:2, :2] = self.local_a
        u[2:, 2:] = self.local_b
        xi = u @ state.xi
        xi[2:] = 0.0
        return GaussianState(u @ state.gamma @ u.T, xi)


def standard_form(state):
    """Reduce a two-mode state to standard form by local operations

    Williamson on B, then SO(2) x SO(2) from the SVD of the off-diagonal block,
    with singular values descending and c >= 0.
    """
    if state.mode_count != 2:
        raise GaussianStateError("standard form needs a two-mode state")
    a_blk, b_blk, c_blk = state.block(0), state.block(1), state.gamma[:2, 2:]

    nu_b = float(np.sqrt(np.linalg.det(b_blk)))
    w, v = np.linalg.eigh(b_blk)
    williamson_b = np.sqrt(nu_b) * (v @ np.diag(1.0 / np.sqrt(w)) @ v.T)

    u, sigma, vt = np.linalg.svd(c_blk @ williamson_b.T)
    signs = np.ones(2)
    if np.linalg.det(u) < 0.0:
        u = u @ _FLIP
        signs[1] *= -1.0
    if np.linalg.det(vt) < 0.0:
        vt = _FLIP @ vt
        signs[1] *= -1.0
    c, d = sigma * signs
    rot_a, rot_b = u.T, vt
    if c < 0.0:
        rot_a, c, d = -rot_a, -c, -d
    if np.trace(rot_a) < 0.0:
        rot_a, rot_b = -rot_a, -rot_b

    a_std = rot_a @ a_blk @ rot_a.T
    xi_a = rot_a @ state.xi_block(0)
    params = StandardFormParams(
        a_x=float(a_std[0, 0]), a_p=float(a_std[1, 1]), a_xp=float(a_std[0, 1]),
        b=nu_b, c=float(c), d=float(d), xi_x=float(xi_a[0]), xi_p=float(xi_a[1]),
    )
    return params, StandardFormTransform(local_a=rot_a, local_b=rot_b @ williamson_b)


def assemble_standard_form(p):
    """Two-mode state with A = [[a_x, a_xp], [a_xp, a_p]], B = b 1, C = diag(c, d)"""
    gamma = np.array([
        [p.a_x, p.a_xp, p.c, 0.0],
        [p.a_xp, p.a_p, 0.0, p.d],
        [p.c, 0.0, p.b, 0.0],
        [0.0, p.d, 0.0, p.b],
    ])
    return GaussianState(gamma, np.array([p.xi_x, p.xi_p, 0.0, 0.0]))
