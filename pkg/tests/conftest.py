import math

import numpy as np
import pytest

from entrodim.bounds import ReactionParams
from entrodim.galerkin import Nonlinearity, SolverConfig


@pytest.fixture(scope="session")
def desk_params() -> ReactionParams:
    """The Chafee-Infante desk configuration: lam=10, beta=1, p=4, gamma=3."""
    return ReactionParams.canonical(10.0, 1.0, 4.0)


@pytest.fixture(scope="session")
def desk_nl() -> Nonlinearity:
    return Nonlinearity.power_law(1.0, 4.0)


@pytest.fixture(scope="session")
def fast_cfg() -> SolverConfig:
    """Small, quick configuration for module-level dynamics tests."""
    return SolverConfig(modes=32, length=math.pi)


def mode_vector(modes: int, j: int, amp: float) -> np.ndarray:
    c = np.zeros(modes)
    c[j - 1] = amp
    return c
