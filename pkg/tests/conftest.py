from dataclasses import replace

import pytest

from swipt_relay.model import dbm_to_mw, default_config

# 1 dBm in linear milliwatts; the default receiver noise level
NOISE_1DBM = dbm_to_mw(1.0)

# Reference single-pair instance (h_sq = g_sq = 0.9, all noise 1 dBm, eta = 1):
# the equal-rate split solves 0.9*rho^2 + rho - 0.9 = 0, and at a 10 mW budget
# both mutual-information terms meet at the value below. Frozen from the
# bisection oracle.
REF_GAIN = 0.9
REF_RHO = 0.5884033489985556
REF_GAMMA = 0.2648237013788069
REF_RATE_10MW = 0.9335997298156259


def make_cfg(**overrides):
    return replace(default_config(), **overrides)


@pytest.fixture
def default_cfg():
    return default_config()


@pytest.fixture
def single_pair_cfg():
    """One subcarrier, one tap, 10 mW budget, default 1 dBm noise."""
    return make_cfg(n_subcarriers=1, taps=1, p_max=10.0)
