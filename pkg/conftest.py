"""
Shared pytest fixtures
"""

import os

import numpy as np
import pytest

import config
from gaussian_core import GaussianState, apply_unitary, from_single_mode_params, local_unitary, tmsv
from models import SeededRng, TWO_PI
from probe_sampler import draw_mixed_params

ROOT = os.path.dirname(os.path.abspath(__file__))


@pytest.fixture
def state_path():
    def path(name):
        return os.path.join(ROOT, config.PROBE_DIR, f'{name}.json')
    return path


@pytest.fixture
def prior_path():
    def path(name):
        return os.path.join(ROOT, config.PRIOR_DIR, f'{name}.csv')
    return path


@pytest.fixture
def rng():
    return SeededRng(1234)


@pytest.fixture
def random_local(rng):
    """Random single-mode rotation-squeeze-rotation"""
    def draw(squeeze_cap=1.0):
        return local_unitary(rng.uniform(0.0, TWO_PI), rng.uniform(0.0, squeeze_cap),
                             rng.uniform(0.0, TWO_PI))
    return draw


@pytest.fixture
def random_single_mode(rng):
    """Random mixed, displaced single-mode state at a random photon number"""
    def draw(max_photons=3.0):
        return from_single_mode_params(draw_mixed_params(rng.uniform(0.0, max_photons), rng))
    return draw


@pytest.fixture
def random_two_mode(rng, random_local):
    """Random mixed two-mode state with distinct symplectic eigenvalues and a displacement"""
    def draw():
        gamma = tmsv(rng.uniform(0.1, 1.0)).gamma + np.diag([0.0, 0.0, 1.0, 1.0]) * rng.uniform(0.2, 2.0)
        state = GaussianState(gamma, np.array([rng.uniform(-1.0, 1.0) for _ in range(4)]))
        state = apply_unitary(state, random_local(), 0)
        return apply_unitary(state, random_local(), 1)
    return draw


@pytest.fixture
def tmsv_sinh1():
    """TMSV with sinh^2 r = 1 (n_A = 1)"""
    return tmsv(np.arcsinh(1.0))


@pytest.fixture
def noisy_pair():
    """Mixed two-mode state with distinct symplectic eigenvalues and a displacement"""
    gamma = tmsv(0.5).gamma + np.diag([0.0, 0.0, 0.5, 0.5])
    return GaussianState(gamma, np.array([0.3, -0.2, 0.1, 0.4]))
