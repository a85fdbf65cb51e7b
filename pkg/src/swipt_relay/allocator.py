"""Rate-optimal resource allocation for the energy-harvesting relay link.

The end-to-end decision factors into three exact steps:

1. sorted pairing — the k-th strongest incoming subcarrier forwards over the
   k-th strongest outgoing one;
2. power splitting — on each matched pair the decode-side fraction rho_I is
   the unique point where the two mutual-information terms (source-to-relay
   decode, relay-to-destination forward on harvested power) are equal, the
   positive root of a quadratic in rho_I;
3. water-filling — with the split fixed, each pair behaves as a scalar
   channel of effective gain gamma, and the source budget is spread so every
   active pair sits at a common water level.

A pair whose outgoing gain is zero (or when harvesting is disabled) can never
deliver data: it is pinned to rho_I = 1, gamma = 0 and receives no power.
All functions are pure; concurrent use needs no coordination.
"""

from __future__ import annotations

import math

import numpy as np

from .model import AllocationResult, ChannelRealization, SubcarrierPairing, SystemConfig

__all__ = [
    "NoUsablePairError",
    "effective_gain",
    "optimal_rho",
    "pair_rate",
    "rate_terms",
    "solve",
    "sorted_pairing",
    "split_and_gain",
    "waterfill",
]

_LN2 = math.log(2.0)


class NoUsablePairError(ValueError):
    """Every pair of the channel has zero effective gain; no rate can flow."""


def rate_terms(h_sq: float, g_sq: float, rho_i: float, p_mw: float, cfg: SystemConfig) -> tuple[float, float]:
    """The two mutual-information terms of one pair, in bits/s/Hz (without
    the 1/2 pre-log): decode at the relay, and forward on harvested power."""
    if not 0.0 <= rho_i <= 1.0:
        raise ValueError("rho_i must lie in [0, 1]")
    if p_mw < 0.0:
        raise ValueError("power must be nonnegative")
    noise = cfg.noise
    snr_decode = rho_i * h_sq * p_mw / (rho_i * noise.sigma_ra_sq + noise.sigma_rb_sq)
    snr_forward = cfg.eta * (1.0 - rho_i) * h_sq * g_sq * p_mw / noise.sigma_d_sq
    return math.log1p(snr_decode) / _LN2, math.log1p(snr_forward) / _LN2


def pair_rate(h_sq: float, g_sq: float, rho_i: float, p_mw: float, cfg: SystemConfig) -> float:
    """End-to-end decode-and-forward rate of one pair: half the smaller of
    the two hop mutual informations."""
    term_decode, term_forward = rate_terms(h_sq, g_sq, rho_i, p_mw, cfg)
    return 0.5 * min(term_decode, term_forward)


def sorted_pairing(h_sq, g_sq) -> SubcarrierPairing:
    """Match the k-th largest incoming gain with the k-th largest outgoing
    gain for every k. Ties break toward the lower original index (stable
    sort), which never changes the achievable rate."""
    h = np.asarray(h_sq, dtype=float)
    g = np.asarray(g_sq, dtype=float)
    if h.ndim != 1 or g.ndim != 1 or h.shape != g.shape:
        raise ValueError("h_sq and g_sq must be equal-length vectors")
    order_h = np.argsort(-h, kind="stable")
    order_g = np.argsort(-g, kind="stable")
    perm = np.empty(h.size, dtype=np.int64)
    perm[order_h] = order_g
    return SubcarrierPairing(perm)


def optimal_rho(g_sq: float, cfg: SystemConfig) -> tuple[float, float]:
    """Closed-form equal-rate power split for a pair forwarding over outgoing
    gain ``g_sq``.

    With b = eta * g_sq / sigma_d_sq, rho_I is the positive root of

        b*s_ra*rho^2 + (1 - b*s_ra + b*s_rb)*rho - b*s_rb = 0,

    which always lies strictly inside (0, 1). Both returned ratios are
    evaluated through rationalized root forms chosen to avoid cancellation,
    and rho_E carries its own full precision rather than float 1 - rho_I.

    Raises ``ValueError`` when the pair cannot carry rate (g_sq == 0, or
    harvesting disabled), in which case callers pin rho_I = 1, gamma = 0.
    """
    noise = cfg.noise
    if not g_sq > 0.0:
        raise ValueError("pair cannot carry rate: outgoing gain is zero")
    b = cfg.eta * g_sq / noise.sigma_d_sq
    if not b > 0.0:
        raise ValueError("pair cannot carry rate: harvesting is disabled (eta == 0)")
    quad = b * noise.sigma_ra_sq
    lin = 1.0 - quad + b * noise.sigma_rb_sq
    root = math.sqrt(lin * lin + 4.0 * b * b * noise.sigma_ra_sq * noise.sigma_rb_sq)
    if lin >= 0.0:
        rho_info = 2.0 * b * noise.sigma_rb_sq / (lin + root)
    else:
        rho_info = (root - lin) / (2.0 * quad)
    # complementary ratio from its own quadratic: quad*x^2 - c*x + 1 = 0
    c = quad + b * noise.sigma_rb_sq + 1.0
    rho_harvest = 2.0 / (c + math.sqrt(c * c - 4.0 * quad))
    return rho_info, rho_harvest


def effective_gain(h_sq: float, rho_i: float, cfg: SystemConfig) -> float:
    """Rate slope of a pair after the split: gamma such that the pair rate is
    0.5*log2(1 + gamma*P). Independent of any power value."""
    noise = cfg.noise
    return h_sq * rho_i / (rho_i * noise.sigma_ra_sq + noise.sigma_rb_sq)


def split_and_gain(h_sq: float, g_sq: float, cfg: SystemConfig) -> tuple[float, float]:
    """(rho_I, gamma) for one matched pair, with dead pairs pinned to
    (1.0, 0.0)."""
    if g_sq <= 0.0 or cfg.eta <= 0.0:
        return 1.0, 0.0
    rho_info, _ = optimal_rho(g_sq, cfg)
    return rho_info, effective_gain(h_sq, rho_info, cfg)


def waterfill(gammas, p_max: float) -> np.ndarray:
    """Spread ``p_max`` over parallel channels of gains ``gammas`` so that
    every powered channel sits at a common water level.

    The level is bisected over [min 1/gamma, min 1/gamma + p_max] down to
    1e-12 relative width, then the active set is solved exactly so the
    returned powers satisfy the stationarity conditions to float precision
    and sum to ``p_max``. Channels with gamma == 0 receive exactly zero.
    """
    gam = np.asarray(gammas, dtype=float)
    if gam.ndim != 1 or gam.size == 0:
        raise ValueError("gammas must be a nonempty vector")
    if not (math.isfinite(p_max) and p_max > 0.0):
        raise ValueError("p_max must be positive and finite")
    usable = gam > 0.0
    if not usable.any():
        raise NoUsablePairError("no usable pair: every effective gain is zero")
    inv = 1.0 / gam[usable]
    lo = float(inv.min())
    hi = lo + p_max
    while hi - lo > 1e-12 * hi:
        mid = 0.5 * (lo + hi)
        if float(np.maximum(0.0, mid - inv).sum()) >= p_max:
            hi = mid
        else:
            lo = mid
    active = inv < hi
    while True:
        level = (p_max + float(inv[active].sum())) / int(active.sum())
        overshoot = active & (inv >= level)
        if not overshoot.any():
            break
        active &= ~overshoot
    alloc = np.where(active, level - inv, 0.0)
    # pin the float sum exactly to the budget; the correction is O(ulp) and
    # lands on the largest allocation
    alloc[int(np.argmax(alloc))] += p_max - math.fsum(alloc)
    powers = np.zeros_like(gam)
    powers[usable] = alloc
    return powers


def solve(channel: ChannelRealization, cfg: SystemConfig) -> AllocationResult:
    """Run the full three-step policy on one realization.

    Raises :class:`NoUsablePairError` when the whole channel is dead.
    """
    n = cfg.n_subcarriers
    if channel.n_subcarriers != n:
        raise ValueError(
            f"channel has {channel.n_subcarriers} subcarriers, config expects {n}"
        )
    pairing = sorted_pairing(channel.h_sq, channel.g_sq)
    rho = np.empty(n)
    gam = np.empty(n)
    for i in range(n):
        rho[i], gam[i] = split_and_gain(channel.h_sq[i], channel.g_sq[pairing.perm[i]], cfg)
    powers = waterfill(gam, cfg.p_max)
    pair_rates = 0.5 * np.log1p(gam * powers) / _LN2
    return AllocationResult(
        pairing=pairing,
        rho_i=rho,
        powers=powers,
        pair_rates=pair_rates,
        total_rate=float(pair_rates.sum()),
    )
