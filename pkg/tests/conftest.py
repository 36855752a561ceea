import math

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from phononforge.fock import GUARD_LEVELS, PureState

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def states(draw, min_dim=2, max_dim=16, guarded=False):
    """Normalized random states; ``guarded`` leaves the top two levels empty."""
    dim = draw(st.integers(min_dim, max_dim))
    support = max(dim - GUARD_LEVELS, 1) if guarded else dim
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    amps = np.zeros(dim, dtype=np.complex128)
    amps[:support] = rng.normal(size=support) + 1j * rng.normal(size=support)
    return PureState(amps / np.linalg.norm(amps))


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


SQRT2 = math.sqrt(2)
