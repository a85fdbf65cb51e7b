import math

import numpy as np
import pytest

from swipt_relay.allocator import NoUsablePairError, solve
from swipt_relay.baselines import (
    PolicyId,
    conventional_hop_powers,
    solve_conventional,
    solve_opa_no_pairing,
    solve_policy,
    solve_uniform,
)
from swipt_relay.channel import generate_channel
from swipt_relay.model import ChannelRealization, NoiseProfile

from conftest import NOISE_1DBM, make_cfg


def test_policy_names_are_exact():
    assert [p.value for p in PolicyId] == [
        "proposed",
        "opa-nopair",
        "uniform-pair",
        "uniform-nopair",
        "conventional",
    ]
    assert PolicyId.from_name("uniform-pair") is PolicyId.UNIFORM_WITH_PAIRING
    with pytest.raises(ValueError, match="valid policies"):
        PolicyId.from_name("bogus")


def test_dispatch_covers_every_policy(default_cfg):
    chan = generate_channel(default_cfg, 3)
    for policy in PolicyId:
        result = solve_policy(policy, chan, default_cfg)
        assert result.total_rate >= 0.0
        assert math.fsum(result.powers) == pytest.approx(default_cfg.p_max, abs=1e-9)


# --------------------------------------------------------- opa, no pairing

def test_opa_uses_identity_pairing(default_cfg):
    chan = generate_channel(default_cfg, 11)
    np.testing.assert_array_equal(
        solve_opa_no_pairing(chan, default_cfg).pairing.perm, np.arange(4)
    )


def test_opa_equals_solve_when_hops_share_order(default_cfg):
    chan = ChannelRealization([4.0, 3.0, 2.0, 1.0], [0.9, 0.6, 0.5, 0.2])
    full = solve(chan, default_cfg)
    reduced = solve_opa_no_pairing(chan, default_cfg)
    assert reduced.total_rate == pytest.approx(full.total_rate, rel=1e-12)
    np.testing.assert_allclose(reduced.powers, full.powers, rtol=1e-9)


def test_opa_single_subcarrier_equals_solve(single_pair_cfg):
    chan = ChannelRealization([0.9], [0.9])
    assert solve_opa_no_pairing(chan, single_pair_cfg).total_rate == pytest.approx(
        solve(chan, single_pair_cfg).total_rate, rel=1e-12
    )


# ------------------------------------------------------------------ uniform

def test_uniform_budget_and_rates(default_cfg):
    chan = generate_channel(default_cfg, 17)
    result = solve_uniform(chan, default_cfg, use_pairing=True)
    np.testing.assert_allclose(result.powers, default_cfg.p_max / 4, rtol=1e-12)
    assert result.total_rate == pytest.approx(float(result.pair_rates.sum()), rel=1e-12)


def test_uniform_with_pairing_matches_solve_on_symmetric_gains(default_cfg):
    # all effective gains equal: water-filling degenerates to uniform power
    chan = ChannelRealization([0.8] * 4, [0.6] * 4)
    assert solve_uniform(chan, default_cfg, use_pairing=True).total_rate == pytest.approx(
        solve(chan, default_cfg).total_rate, rel=1e-12
    )


def test_uniform_pairing_flag(default_cfg):
    chan = ChannelRealization([1.0, 4.0, 2.0, 3.0], [0.1, 0.9, 0.4, 0.2])
    with_pairing = solve_uniform(chan, default_cfg, use_pairing=True)
    without = solve_uniform(chan, default_cfg, use_pairing=False)
    np.testing.assert_array_equal(without.pairing.perm, np.arange(4))
    assert not np.array_equal(with_pairing.pairing.perm, np.arange(4))


def test_uniform_flag_immaterial_single_subcarrier(single_pair_cfg):
    chan = ChannelRealization([0.9], [0.9])
    on = solve_uniform(chan, single_pair_cfg, use_pairing=True)
    off = solve_uniform(chan, single_pair_cfg, use_pairing=False)
    assert on.total_rate == off.total_rate


def test_uniform_never_raises_on_dead_channel(default_cfg):
    result = solve_uniform(
        ChannelRealization([0.0] * 4, [0.0] * 4), default_cfg, use_pairing=False
    )
    assert result.total_rate == 0.0


# ------------------------------------------------------------- per-trial laws

def test_proposed_dominates_every_eh_baseline(default_cfg):
    for seed in range(1, 201):
        chan = generate_channel(default_cfg, seed)
        top = solve(chan, default_cfg).total_rate
        assert solve_opa_no_pairing(chan, default_cfg).total_rate <= top + 1e-9
        assert solve_uniform(chan, default_cfg, True).total_rate <= top + 1e-9
        assert solve_uniform(chan, default_cfg, False).total_rate <= top + 1e-9


def test_uniform_pairing_never_hurts_per_trial(default_cfg):
    for seed in range(1, 201):
        chan = generate_channel(default_cfg, seed)
        assert (
            solve_uniform(chan, default_cfg, False).total_rate
            <= solve_uniform(chan, default_cfg, True).total_rate + 1e-9
        )


# ------------------------------------------------------------- conventional

def test_conventional_symmetric_pair():
    """Matched per-hop slopes c collapse to an effective gain of c/2 and an
    even source/relay split."""
    cfg = make_cfg(n_subcarriers=1, taps=1, p_max=100.0)
    c = 0.5
    chan = ChannelRealization([c * NOISE_1DBM], [c * NOISE_1DBM])
    result = solve_conventional(chan, cfg)
    assert result.total_rate == pytest.approx(0.5 * math.log2(1 + 0.5 * c * 100.0), rel=1e-12)
    p_source, p_relay = conventional_hop_powers(chan, cfg, result)
    assert p_source[0] == pytest.approx(p_relay[0], rel=1e-12)
    assert p_source[0] + p_relay[0] == pytest.approx(100.0, rel=1e-12)


def test_conventional_first_hop_limited():
    cfg = make_cfg(n_subcarriers=1, taps=1, p_max=10.0)
    chan = ChannelRealization([1.0], [1e12])
    result = solve_conventional(chan, cfg)
    slope = 1.0 / cfg.noise.sigma_ra_sq
    assert result.total_rate == pytest.approx(0.5 * math.log2(1 + slope * 10.0), rel=1e-9)


def test_conventional_budget_and_hop_balance(default_cfg):
    for seed in range(1, 31):
        chan = generate_channel(default_cfg, seed)
        result = solve_conventional(chan, default_cfg)
        p_source, p_relay = conventional_hop_powers(chan, default_cfg, result)
        assert math.fsum(p_source) + math.fsum(p_relay) == pytest.approx(
            default_cfg.p_max, abs=1e-9
        )
        for i in range(4):
            if result.powers[i] > 0.0:
                snr_relay = chan.h_sq[i] * p_source[i] / default_cfg.noise.sigma_ra_sq
                snr_dest = (
                    chan.g_sq[result.pairing.perm[i]]
                    * p_relay[i]
                    / default_cfg.noise.sigma_d_sq
                )
                assert abs(snr_relay - snr_dest) <= 1e-9 * max(snr_relay, 1e-12)


def test_conventional_has_no_splitter(default_cfg):
    chan = generate_channel(default_cfg, 23)
    result = solve_conventional(chan, default_cfg)
    np.testing.assert_array_equal(result.rho_i, np.ones(4))


def test_conventional_ignores_harvesting_efficiency(default_cfg):
    chan = generate_channel(default_cfg, 29)
    with_eta = solve_conventional(chan, default_cfg).total_rate
    without_eta = solve_conventional(chan, make_cfg(eta=0.0)).total_rate
    assert with_eta == without_eta


def _conventional_grid_best(chan, cfg, steps=200):
    """Dense search over (source power 1, relay power 1, source power 2) with
    relay power 2 taking the remainder, for both pairings of a two-subcarrier
    channel."""
    s_r = cfg.noise.sigma_ra_sq
    s_d = cfg.noise.sigma_d_sq
    p_max = cfg.p_max
    axis = np.linspace(0.0, p_max, steps + 1)
    best = 0.0
    for perm in ((0, 1), (1, 0)):
        g = chan.g_sq[list(perm)]
        for ps1 in axis:
            pr1 = axis[axis <= p_max - ps1][:, None]
            ps2 = axis[None, :]
            pr2 = p_max - ps1 - pr1 - ps2
            ok = pr2 >= 0.0
            r1 = 0.5 * np.minimum(
                np.log2(1.0 + chan.h_sq[0] * ps1 / s_r),
                np.log2(1.0 + g[0] * pr1 / s_d),
            )
            r2 = 0.5 * np.minimum(
                np.log2(1.0 + chan.h_sq[1] * ps2 / s_r),
                np.log2(1.0 + g[1] * np.where(ok, pr2, 0.0) / s_d),
            )
            total = np.where(ok, r1 + r2, -1.0)
            best = max(best, float(total.max()))
    return best


@pytest.mark.parametrize("seed", [2, 5])
def test_conventional_matches_grid_oracle_two_subcarriers(seed):
    cfg = make_cfg(n_subcarriers=2, taps=2, p_max=100.0)
    chan = generate_channel(cfg, seed)
    got = solve_conventional(chan, cfg).total_rate
    best = _conventional_grid_best(chan, cfg)
    assert got >= best - 1e-3
    assert got <= best + 1e-3 + 2e-2  # grid is coarse; closed form may exceed it slightly


def test_conventional_dead_channel_raises(default_cfg):
    with pytest.raises(NoUsablePairError):
        solve_conventional(ChannelRealization([0.0] * 4, [1.0] * 4), default_cfg)
