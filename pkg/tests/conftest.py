"""Shared fixtures for irsnoma tests."""

import pytest

from irsnoma._types import SystemConfig
from irsnoma.channel import draw_realization
from irsnoma.numerics import RandomStream


@pytest.fixture
def single_pair():
    """K = 1, N = 4, Q = 1 at 2 BPCU: the single-pair closed form applies."""
    return SystemConfig(M=4, K=1, N=4, P=4, Q=1, rate_bpcu=2.0)


@pytest.fixture
def single_pair_blocks():
    """K = 1, N = 4 split into two on-off blocks of Q = 2."""
    return SystemConfig(M=4, K=1, N=4, P=2, Q=2, rate_bpcu=2.0)


@pytest.fixture
def two_pair():
    """K = 2, N = 4, Q = 1 at 1 BPCU: the multi-pair closed form applies."""
    return SystemConfig(M=4, K=2, N=4, P=4, Q=1, rate_bpcu=1.0)


@pytest.fixture
def stream():
    return RandomStream(seed=7)


@pytest.fixture
def two_pair_realization(two_pair):
    return draw_realization(two_pair, 0, RandomStream(seed=11))


@pytest.fixture
def experiment_yaml():
    return (
        "name: small\n"
        "M: 4\n"
        "K: 1\n"
        "N: 4\n"
        "Q: 1\n"
        "alpha1_sq: 0.8\n"
        "alpha2_sq: 0.2\n"
        "rate_bpcu: 2\n"
        "schemes: [ideal, dft, onoff]\n"
        "snr_db: '0:10:5'\n"
        "trials: 2000\n"
        "seed: 3\n"
    )
