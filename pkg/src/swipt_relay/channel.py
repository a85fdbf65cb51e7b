"""Seeded generation of frequency-selective Rayleigh channels.

Each hop is modelled as an L-tap impulse response of i.i.d. circularly
symmetric complex Gaussian taps with per-tap variance 1/(L*(1+d)^alpha),
where d is the hop distance; subcarrier gains are the squared magnitudes of
the non-normalized N-point DFT of the taps, so the mean gain per subcarrier
is (1+d)^(-alpha).

Reproducibility contract: a realization is a pure function of (config, seed).
The master seed feeds a PCG64 SeedSequence whose first spawned child drives
the source-relay taps and whose second drives the relay-destination taps, so
the two hops never share a stream. Each tap consumes exactly two standard
normal variates (real part first, then imaginary).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .model import ChannelRealization, SystemConfig

__all__ = [
    "TapSet",
    "draw_taps",
    "generate_channel",
    "load_channel_file",
    "read_channel_csv",
    "taps_to_subcarrier_gains",
    "write_channel_csv",
]


@dataclass(frozen=True)
class TapSet:
    """Time-domain impulse response of one hop."""

    taps: np.ndarray

    def __post_init__(self):
        t = np.array(self.taps, dtype=complex)
        if t.ndim != 1 or t.size == 0:
            raise ValueError("taps must be a nonempty vector")
        if not np.all(np.isfinite(t)):
            raise ValueError("taps must be finite")
        t.setflags(write=False)
        object.__setattr__(self, "taps", t)


def draw_taps(rng: np.random.Generator, n_taps: int, distance: float, alpha: float) -> TapSet:
    """Draw one hop's impulse response from ``rng``.

    Consumes exactly ``2 * n_taps`` normal variates regardless of the
    parameter values, so streams stay aligned across configurations.
    """
    if n_taps < 1:
        raise ValueError("n_taps must be >= 1")
    if distance < 0:
        raise ValueError("distance must be >= 0")
    # real/imaginary parts each carry half of the per-tap variance
    std = math.sqrt(0.5 / (n_taps * (1.0 + distance) ** alpha))
    parts = rng.standard_normal((n_taps, 2)) * std
    return TapSet(parts[:, 0] + 1j * parts[:, 1])


def taps_to_subcarrier_gains(taps: TapSet, n_subcarriers: int) -> np.ndarray:
    """Squared-magnitude frequency response on each of N subcarriers.

    ``gains[n] = |sum_l taps[l] * exp(-2j*pi*n*l/N)|**2`` for n = 0..N-1.
    """
    n_taps = taps.taps.size
    if n_subcarriers < n_taps:
        raise ValueError(
            f"n_subcarriers ({n_subcarriers}) must be >= number of taps ({n_taps})"
        )
    spectrum = np.fft.fft(taps.taps, n=n_subcarriers)
    return np.abs(spectrum) ** 2


def generate_channel(cfg: SystemConfig, seed: int) -> ChannelRealization:
    """Deterministically realize both hops for one trial.

    Hop 1 taps are drawn at distance ``cfg.dr``, hop 2 at ``cfg.d0 - cfg.dr``,
    from disjoint child streams of ``seed``.
    """
    if seed < 0:
        raise ValueError("seed must be a nonnegative integer")
    child_h, child_g = np.random.SeedSequence(int(seed)).spawn(2)
    taps_h = draw_taps(np.random.default_rng(child_h), cfg.taps, cfg.dr, cfg.alpha)
    taps_g = draw_taps(np.random.default_rng(child_g), cfg.taps, cfg.d0 - cfg.dr, cfg.alpha)
    return ChannelRealization(
        h_sq=taps_to_subcarrier_gains(taps_h, cfg.n_subcarriers),
        g_sq=taps_to_subcarrier_gains(taps_g, cfg.n_subcarriers),
    )


def load_channel_file(path: str | Path) -> ChannelRealization:
    """Read a fixed channel override: a JSON object with ``h_sq`` and ``g_sq``
    gain vectors. Used to pin exact instances in place of seeded generation."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict) or set(data) != {"h_sq", "g_sq"}:
        raise ValueError("channel file must be a JSON object with exactly h_sq and g_sq")
    return ChannelRealization(h_sq=data["h_sq"], g_sq=data["g_sq"])


def write_channel_csv(path: str | Path, channels) -> None:
    """Dump realizations as rows of (trial, subcarrier, h_sq, g_sq); trials
    are numbered from 1 in the order given."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["trial", "subcarrier", "h_sq", "g_sq"])
        for trial, chan in enumerate(channels, start=1):
            for n in range(chan.n_subcarriers):
                writer.writerow([trial, n, repr(float(chan.h_sq[n])), repr(float(chan.g_sq[n]))])


def read_channel_csv(path: str | Path) -> list[ChannelRealization]:
    """Inverse of :func:`write_channel_csv`."""
    per_trial: dict[int, list[tuple[int, float, float]]] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            per_trial.setdefault(int(row["trial"]), []).append(
                (int(row["subcarrier"]), float(row["h_sq"]), float(row["g_sq"]))
            )
    channels = []
    for trial in sorted(per_trial):
        rows = sorted(per_trial[trial])
        channels.append(
            ChannelRealization(
                h_sq=[r[1] for r in rows],
                g_sq=[r[2] for r in rows],
            )
        )
    return channels
