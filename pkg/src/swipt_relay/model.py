"""Domain types and configuration handling for the relay simulator.

Every power in this package is a linear milliwatt quantity; dBm appears only
at I/O boundaries and is converted once on the way in. Rates are bits/s/Hz
per subcarrier pair and include the 1/2 pre-log factor of two-slot
half-duplex relaying. All types are immutable after construction and safe to
share across threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "AllocationResult",
    "ChannelRealization",
    "ConfigError",
    "NoiseProfile",
    "SubcarrierPairing",
    "SystemConfig",
    "allocation_to_dict",
    "config_errors",
    "config_from_dict",
    "config_to_dict",
    "dbm_to_mw",
    "default_config",
    "load_config",
    "validate_config",
]


def dbm_to_mw(x_dbm: float) -> float:
    """Convert a dBm power to linear milliwatts: 10^(x/10)."""
    x = float(x_dbm)
    if not math.isfinite(x):
        raise ValueError("dBm value must be finite")
    return 10.0 ** (x / 10.0)


class ConfigError(ValueError):
    """A configuration violated one or more invariants.

    ``errors`` holds the complete list of violations, one message per field.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class NoiseProfile:
    """Per-subcarrier receiver noise powers in mW.

    ``sigma_ra_sq``/``sigma_rb_sq`` are the antenna and signal-processing
    noise at the relay; ``sigma_da_sq``/``sigma_db_sq`` the same at the
    destination. Only their sum matters at the destination, exposed as
    ``sigma_d_sq``.
    """

    sigma_ra_sq: float
    sigma_rb_sq: float
    sigma_da_sq: float
    sigma_db_sq: float

    @property
    def sigma_d_sq(self) -> float:
        return self.sigma_da_sq + self.sigma_db_sq


@dataclass(frozen=True)
class SystemConfig:
    """Static link parameters shared by every module.

    n_subcarriers: number of OFDM subcarriers N per hop.
    p_max: source transmit-power budget per frame, mW.
    eta: energy-harvesting efficiency, in [0, 1].
    d0: source-destination distance (the relay sits on this line).
    dr: source-relay distance, 0 < dr < d0.
    alpha: path-loss exponent.
    taps: channel impulse-response length L (requires N >= L).
    noise: receiver noise powers.
    """

    n_subcarriers: int
    p_max: float
    eta: float
    d0: float
    dr: float
    alpha: float
    taps: int
    noise: NoiseProfile


def _positive_finite(name: str, value, errors: list[str]) -> None:
    try:
        ok = math.isfinite(value) and value > 0
    except TypeError:
        ok = False
    if not ok:
        errors.append(f"{name} must be a positive, finite number")


def config_errors(cfg: SystemConfig) -> list[str]:
    """Collect every invariant violation of ``cfg`` (empty list if valid)."""
    errors: list[str] = []
    if not isinstance(cfg.n_subcarriers, (int, np.integer)) or cfg.n_subcarriers < 1:
        errors.append("n_subcarriers must be an integer >= 1")
    if not isinstance(cfg.taps, (int, np.integer)) or cfg.taps < 1:
        errors.append("taps must be an integer >= 1")
    _positive_finite("p_max", cfg.p_max, errors)
    _positive_finite("alpha", cfg.alpha, errors)
    _positive_finite("d0", cfg.d0, errors)
    if not (math.isfinite(cfg.eta) and 0.0 <= cfg.eta <= 1.0):
        errors.append("eta out of [0,1]")
    if not (math.isfinite(cfg.dr) and math.isfinite(cfg.d0) and 0.0 < cfg.dr < cfg.d0):
        errors.append(
            "dr: relay must lie strictly between the source and the destination "
            "(0 < dr < d0)"
        )
    for field_name in ("sigma_ra_sq", "sigma_rb_sq", "sigma_da_sq", "sigma_db_sq"):
        _positive_finite(f"noise.{field_name}", getattr(cfg.noise, field_name), errors)
    return errors


def validate_config(cfg: SystemConfig) -> SystemConfig:
    """Return ``cfg`` unchanged if every invariant holds, else raise
    :class:`ConfigError` carrying the complete violation list."""
    errors = config_errors(cfg)
    if errors:
        raise ConfigError(errors)
    return cfg


def default_config() -> SystemConfig:
    """Baseline setup used throughout the bundled experiments: N = 4
    subcarriers, 30 dBm budget, unit harvesting efficiency, 1 dBm receiver
    noise, path-loss exponent 3, 4 channel taps, unit source-destination
    distance with the relay at the midpoint."""
    sigma = dbm_to_mw(1.0)
    return SystemConfig(
        n_subcarriers=4,
        p_max=dbm_to_mw(30.0),
        eta=1.0,
        d0=1.0,
        dr=0.5,
        alpha=3.0,
        taps=4,
        noise=NoiseProfile(
            sigma_ra_sq=sigma,
            sigma_rb_sq=sigma,
            sigma_da_sq=sigma / 2.0,
            sigma_db_sq=sigma / 2.0,
        ),
    )


@dataclass(frozen=True)
class ChannelRealization:
    """Squared channel-gain magnitudes per subcarrier for both hops."""

    h_sq: np.ndarray
    g_sq: np.ndarray

    def __post_init__(self):
        h = np.array(self.h_sq, dtype=float)
        g = np.array(self.g_sq, dtype=float)
        if h.ndim != 1 or g.ndim != 1 or h.shape != g.shape:
            raise ValueError("h_sq and g_sq must be equal-length vectors")
        if h.size == 0:
            raise ValueError("channel needs at least one subcarrier")
        for name, vec in (("h_sq", h), ("g_sq", g)):
            if not np.all(np.isfinite(vec)) or np.any(vec < 0):
                raise ValueError(f"{name} entries must be finite and nonnegative")
        h.setflags(write=False)
        g.setflags(write=False)
        object.__setattr__(self, "h_sq", h)
        object.__setattr__(self, "g_sq", g)

    @property
    def n_subcarriers(self) -> int:
        return self.h_sq.size


@dataclass(frozen=True)
class SubcarrierPairing:
    """Matching of incoming to outgoing subcarriers: ``perm[i] = j`` means the
    stream decoded from subcarrier i is forwarded on subcarrier j. Being a
    permutation, it uses every incoming and outgoing subcarrier exactly once.
    """

    perm: np.ndarray

    def __post_init__(self):
        p = np.array(self.perm, dtype=np.int64)
        if p.ndim != 1 or not np.array_equal(np.sort(p), np.arange(p.size)):
            raise ValueError("perm must be a permutation of 0..N-1")
        p.setflags(write=False)
        object.__setattr__(self, "perm", p)

    @property
    def n_subcarriers(self) -> int:
        return self.perm.size


@dataclass(frozen=True)
class AllocationResult:
    """One policy's full decision for one channel realization.

    ``rho_i[i]`` is the decode-side power-splitting fraction of incoming
    subcarrier i (the harvest fraction is its complement), ``powers[i]`` the
    power spent on pair i in mW, ``pair_rates[i]`` its end-to-end rate. For
    the conventional (non-harvesting) baseline ``powers`` carries the pooled
    source-plus-relay power of the pair and ``rho_i`` is fixed at 1.
    """

    pairing: SubcarrierPairing
    rho_i: np.ndarray
    powers: np.ndarray
    pair_rates: np.ndarray
    total_rate: float

    def __post_init__(self):
        for name in ("rho_i", "powers", "pair_rates"):
            vec = np.array(getattr(self, name), dtype=float)
            vec.setflags(write=False)
            object.__setattr__(self, name, vec)


def allocation_to_dict(result: AllocationResult) -> dict:
    """JSON-friendly view of an :class:`AllocationResult`."""
    return {
        "pairing": result.pairing.perm.tolist(),
        "rho_i": result.rho_i.tolist(),
        "powers": result.powers.tolist(),
        "pair_rates": result.pair_rates.tolist(),
        "total_rate": result.total_rate,
    }


_NOISE_KEYS = ("sigma_ra_sq", "sigma_rb_sq", "sigma_da_sq", "sigma_db_sq")
_TOP_KEYS = {"n_subcarriers", "p_max_mw", "p_max_dbm", "eta", "d0", "dr", "alpha", "taps", "noise"}


def _as_int(name: str, value, errors: list[str]) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        errors.append(f"{name} must be an integer")
        return 0
    if float(value) != int(value):
        errors.append(f"{name} must be an integer")
        return 0
    return int(value)


def _as_float(name: str, value, errors: list[str]) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        errors.append(f"{name} must be a number")
        return math.nan
    return float(value)


def config_from_dict(data: dict) -> SystemConfig:
    """Build a :class:`SystemConfig` from its JSON form.

    The power budget is accepted as ``p_max_mw`` or ``p_max_dbm``; when both
    are present the mW value wins. Unknown keys are rejected so typos cannot
    silently fall back to defaults. The returned config is *not* validated;
    call :func:`validate_config`.
    """
    if not isinstance(data, dict):
        raise ConfigError(["config must be a JSON object"])
    errors: list[str] = []
    unknown = sorted(set(data) - _TOP_KEYS)
    if unknown:
        errors.append(f"unknown config keys: {', '.join(unknown)}")
    missing = sorted({"n_subcarriers", "eta", "d0", "dr", "alpha", "taps", "noise"} - set(data))
    if missing:
        errors.append(f"missing config keys: {', '.join(missing)}")
    if "p_max_mw" in data:
        p_max = _as_float("p_max_mw", data["p_max_mw"], errors)
    elif "p_max_dbm" in data:
        dbm = _as_float("p_max_dbm", data["p_max_dbm"], errors)
        p_max = dbm_to_mw(dbm) if math.isfinite(dbm) else math.nan
    else:
        errors.append("missing config keys: p_max_mw or p_max_dbm")
        p_max = math.nan
    noise_data = data.get("noise")
    noise_vals = {}
    if isinstance(noise_data, dict):
        bad = sorted(set(noise_data) - set(_NOISE_KEYS))
        if bad:
            errors.append(f"unknown noise keys: {', '.join(bad)}")
        for key in _NOISE_KEYS:
            if key in noise_data:
                noise_vals[key] = _as_float(f"noise.{key}", noise_data[key], errors)
            else:
                errors.append(f"missing noise key: {key}")
                noise_vals[key] = math.nan
    else:
        if "noise" in data:
            errors.append("noise must be an object")
        noise_vals = {key: math.nan for key in _NOISE_KEYS}
    if errors:
        raise ConfigError(errors)
    return SystemConfig(
        n_subcarriers=_as_int("n_subcarriers", data["n_subcarriers"], errors),
        p_max=p_max,
        eta=_as_float("eta", data["eta"], errors),
        d0=_as_float("d0", data["d0"], errors),
        dr=_as_float("dr", data["dr"], errors),
        alpha=_as_float("alpha", data["alpha"], errors),
        taps=_as_int("taps", data["taps"], errors),
        noise=NoiseProfile(**noise_vals),
    )


def config_to_dict(cfg: SystemConfig) -> dict:
    return {
        "n_subcarriers": cfg.n_subcarriers,
        "p_max_mw": cfg.p_max,
        "eta": cfg.eta,
        "d0": cfg.d0,
        "dr": cfg.dr,
        "alpha": cfg.alpha,
        "taps": cfg.taps,
        "noise": {key: getattr(cfg.noise, key) for key in _NOISE_KEYS},
    }


def load_config(path: str | Path) -> SystemConfig:
    """Read a config JSON file. I/O errors propagate as ``OSError``; malformed
    content raises :class:`ConfigError` or ``json.JSONDecodeError``."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return config_from_dict(data)
