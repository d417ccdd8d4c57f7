"""Model parameters, result containers and the dB/linear ingestion boundary.

Everything inside the library works with linear average SNRs. Decibel values
exist only in JSON config files, sweep axes and CSV output columns.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field, replace
from typing import Iterator, Optional, Sequence

from .errors import DomainError, RangeError

MAX_RELAYS = 25


class RatePrefactor(str, enum.Enum):
    """Whether the instantaneous secrecy capacity carries the 1/2 half-duplex factor."""

    HALF = "half"
    UNIT = "unit"

    @property
    def factor(self) -> float:
        return 0.5 if self is RatePrefactor.HALF else 1.0


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    if not x > 0:
        raise DomainError(f"linear_to_db requires a positive argument, got {x!r}")
    return 10.0 * math.log10(x)


def harmonic_combination(a: float, b: float) -> float:
    """Mean of min(X, Y) for independent exponentials with means a and b."""
    return a * b / (a + b)


@dataclass(frozen=True)
class SystemConfig:
    n_relays: int
    rho: float
    avg_snr_sd: float
    avg_snr_sr: float
    avg_snr_rd: float
    avg_snr_se: float
    avg_snr_sb: float
    avg_snr_be: float
    target_rate: float
    rate_prefactor: RatePrefactor = RatePrefactor.HALF

    @property
    def avg_snr_c(self) -> float:
        """Average SNR of the legitimate two-hop path, min(S-R, R-D)."""
        return harmonic_combination(self.avg_snr_sr, self.avg_snr_rd)

    @property
    def avg_snr_ce(self) -> float:
        """Average SNR of the eavesdropper's relay path, min(S-b, b-E)."""
        return harmonic_combination(self.avg_snr_sb, self.avg_snr_be)

    @classmethod
    def from_combined(cls, n_relays: int, rho: float, avg_snr_sd: float, avg_snr_c: float,
                      avg_snr_se: float, avg_snr_ce: float, target_rate: float = 0.0,
                      rate_prefactor: RatePrefactor = RatePrefactor.HALF) -> "SystemConfig":
        """Build a config from the combined path SNRs by splitting each into two equal hops."""
        return cls(n_relays=n_relays, rho=rho, avg_snr_sd=avg_snr_sd,
                   avg_snr_sr=2.0 * avg_snr_c, avg_snr_rd=2.0 * avg_snr_c,
                   avg_snr_se=avg_snr_se,
                   avg_snr_sb=2.0 * avg_snr_ce, avg_snr_be=2.0 * avg_snr_ce,
                   target_rate=target_rate, rate_prefactor=rate_prefactor)

    def with_combined(self, avg_snr_c: Optional[float] = None,
                      avg_snr_ce: Optional[float] = None) -> "SystemConfig":
        cfg = self
        if avg_snr_c is not None:
            cfg = replace(cfg, avg_snr_sr=2.0 * avg_snr_c, avg_snr_rd=2.0 * avg_snr_c)
        if avg_snr_ce is not None:
            cfg = replace(cfg, avg_snr_sb=2.0 * avg_snr_ce, avg_snr_be=2.0 * avg_snr_ce)
        return cfg


_SNR_FIELDS = ("avg_snr_sd", "avg_snr_sr", "avg_snr_rd",
               "avg_snr_se", "avg_snr_sb", "avg_snr_be")


def validate(config: SystemConfig) -> SystemConfig:
    """Check every parameter range and return the config unchanged.

    Raises RangeError naming the first offending field.
    """
    n = config.n_relays
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise RangeError("n_relays", f"n_relays must be a positive integer, got {n!r}")
    if n > MAX_RELAYS:
        raise RangeError("n_relays", f"n_relays must be <= {MAX_RELAYS}, got {n}")
    if not (0.0 <= config.rho <= 1.0):
        raise RangeError("rho", f"rho must lie in [0, 1], got {config.rho!r}")
    for name in _SNR_FIELDS:
        value = getattr(config, name)
        if not (math.isfinite(value) and value > 0):
            raise RangeError(name, f"{name} must be a positive finite linear SNR, got {value!r}")
    if not (math.isfinite(config.target_rate) and config.target_rate >= 0):
        raise RangeError("target_rate", f"target_rate must be >= 0, got {config.target_rate!r}")
    if not isinstance(config.rate_prefactor, RatePrefactor):
        raise RangeError("rate_prefactor", f"unknown rate_prefactor {config.rate_prefactor!r}")
    if not (config.avg_snr_c > 0 and config.avg_snr_ce > 0):
        raise RangeError("avg_snr_c", "combined relay SNR underflowed to zero")
    return config


# JSON ingestion ------------------------------------------------------------

_JSON_FIELDS = {
    "n_relays": int,
    "rho": float,
    "avg_snr_sd_db": float,
    "avg_snr_sr_db": float,
    "avg_snr_rd_db": float,
    "avg_snr_se_db": float,
    "avg_snr_sb_db": float,
    "avg_snr_be_db": float,
    "target_rate": float,
}


def _coerce(name, value, kind):
    if isinstance(value, bool):
        raise RangeError(name, f"{name}: expected a number, got {value!r}")
    if kind is int:
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        if not isinstance(value, int):
            raise RangeError(name, f"{name}: expected an integer, got {value!r}")
        return value
    if not isinstance(value, (int, float)):
        raise RangeError(name, f"{name}: expected a number, got {value!r}")
    return float(value)


def config_from_dict(data: dict) -> SystemConfig:
    """Parse the JSON config schema (SNRs in dB) into a validated SystemConfig."""
    if not isinstance(data, dict):
        raise RangeError("config", "config must be a JSON object")
    unknown = set(data) - set(_JSON_FIELDS) - {"rate_prefactor"}
    if unknown:
        name = sorted(unknown)[0]
        raise RangeError(name, f"unknown config field {name!r}")
    values = {}
    for name, kind in _JSON_FIELDS.items():
        if name not in data:
            raise RangeError(name, f"missing config field {name!r}")
        values[name] = _coerce(name, data[name], kind)
    try:
        prefactor = RatePrefactor(data.get("rate_prefactor", "half"))
    except ValueError:
        raise RangeError("rate_prefactor",
                         f"rate_prefactor must be 'half' or 'unit', got {data['rate_prefactor']!r}")
    linear = {k[:-3]: db_to_linear(v) for k, v in values.items() if k.endswith("_db")}
    return validate(SystemConfig(n_relays=values["n_relays"], rho=values["rho"],
                                 target_rate=values["target_rate"],
                                 rate_prefactor=prefactor, **linear))


def config_to_dict(config: SystemConfig) -> dict:
    out = {"n_relays": config.n_relays, "rho": config.rho}
    for name in _SNR_FIELDS:
        out[name + "_db"] = linear_to_db(getattr(config, name))
    out["target_rate"] = config.target_rate
    out["rate_prefactor"] = config.rate_prefactor.value
    return out


def load_config(path) -> SystemConfig:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise RangeError("config", f"{path}: invalid JSON ({exc})") from None
    return config_from_dict(data)


# Result containers ---------------------------------------------------------

@dataclass(frozen=True)
class SecrecyMetrics:
    p_nonzero: float
    sop: float
    ergodic_capacity: float

    def __post_init__(self):
        for name in ("p_nonzero", "sop"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise RangeError(name, f"{name} must be a probability, got {v!r}")
        if not self.ergodic_capacity >= 0.0:
            raise RangeError("ergodic_capacity",
                             f"ergodic capacity must be non-negative, got {self.ergodic_capacity!r}")


Z95 = 1.96


@dataclass(frozen=True)
class EstimateWithCI:
    mean: float
    std_error: float
    n_samples: int
    ci95_low: float
    ci95_high: float

    @classmethod
    def from_mean(cls, mean: float, std_error: float, n_samples: int) -> "EstimateWithCI":
        half = Z95 * std_error
        return cls(mean, std_error, n_samples, mean - half, mean + half)

    def within(self, value: float, n_sigma: float = 3.0) -> bool:
        return abs(value - self.mean) <= n_sigma * self.std_error


# Sweeps ----------------------------------------------------------------------

class SweepAxis(str, enum.Enum):
    AVG_SNR_SD_DB = "avg_snr_sd_db"
    RHO = "rho"
    AVG_SNR_SE_DB = "avg_snr_se_db"
    TARGET_RATE = "target_rate"

    @property
    def is_db(self) -> bool:
        return self.value.endswith("_db")


@dataclass(frozen=True)
class Linkage:
    """Ratios tying the combined relay-path SNRs to the direct-link SNRs.

    ``c_to_sd=0.5`` means the legitimate relay path is re-derived as half of
    the S-D average SNR at every grid point (both hops set to the S-D value).
    """

    c_to_sd: Optional[float] = None
    ce_to_se: Optional[float] = None

    def apply(self, config: SystemConfig) -> SystemConfig:
        return config.with_combined(
            avg_snr_c=None if self.c_to_sd is None else self.c_to_sd * config.avg_snr_sd,
            avg_snr_ce=None if self.ce_to_se is None else self.ce_to_se * config.avg_snr_se,
        )


@dataclass(frozen=True)
class SweepSpec:
    axis: SweepAxis
    grid: tuple
    base: SystemConfig
    linkage: Linkage = field(default_factory=Linkage)

    def __post_init__(self):
        grid = tuple(float(x) for x in self.grid)
        object.__setattr__(self, "grid", grid)
        if not grid:
            raise RangeError("grid", "sweep grid must not be empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise RangeError("grid", "sweep grid must be strictly increasing")
        if not all(math.isfinite(x) for x in grid):
            raise RangeError("grid", "sweep grid values must be finite")

    def config_at(self, value: float) -> SystemConfig:
        if self.axis is SweepAxis.AVG_SNR_SD_DB:
            cfg = replace(self.base, avg_snr_sd=db_to_linear(value))
        elif self.axis is SweepAxis.AVG_SNR_SE_DB:
            cfg = replace(self.base, avg_snr_se=db_to_linear(value))
        elif self.axis is SweepAxis.RHO:
            cfg = replace(self.base, rho=value)
        else:
            cfg = replace(self.base, target_rate=value)
        return validate(self.linkage.apply(cfg))

    def points(self) -> Iterator[tuple]:
        for value in self.grid:
            yield value, self.config_at(value)


def sweep_from_dict(data: dict, base: SystemConfig) -> SweepSpec:
    """Parse a sweep JSON object.

    The grid is either an explicit ``"grid"`` list or ``"start"``/``"stop"``/``"num"``
    for an evenly spaced grid including both ends.
    """
    if not isinstance(data, dict):
        raise RangeError("sweep", "sweep must be a JSON object")
    try:
        axis = SweepAxis(data.get("axis", SweepAxis.AVG_SNR_SD_DB.value))
    except ValueError:
        raise RangeError("axis", f"unknown sweep axis {data.get('axis')!r}") from None
    if "grid" in data:
        grid = data["grid"]
        if not isinstance(grid, list):
            raise RangeError("grid", "grid must be a list of numbers")
        grid = [_coerce("grid", x, float) for x in grid]
    elif {"start", "stop", "num"} <= set(data):
        num = _coerce("num", data["num"], int)
        if num < 1:
            raise RangeError("num", "num must be >= 1")
        start = _coerce("start", data["start"], float)
        stop = _coerce("stop", data["stop"], float)
        grid = [start] if num == 1 else [start + (stop - start) * i / (num - 1) for i in range(num)]
    else:
        raise RangeError("grid", "sweep needs 'grid' or 'start'/'stop'/'num'")
    link = data.get("linkage") or {}
    if not isinstance(link, dict) or set(link) - {"c_to_sd", "ce_to_se"}:
        raise RangeError("linkage", "linkage accepts only 'c_to_sd' and 'ce_to_se'")
    ratios = {}
    for key, value in link.items():
        ratios[key] = _coerce(key, value, float)
        if not ratios[key] > 0:
            raise RangeError(key, f"{key} must be positive")
    return SweepSpec(axis=axis, grid=tuple(grid), base=base, linkage=Linkage(**ratios))


def load_sweep(path, base: SystemConfig) -> SweepSpec:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise RangeError("sweep", f"{path}: invalid JSON ({exc})") from None
    return sweep_from_dict(data, base)


def single_point_sweep(base: SystemConfig) -> SweepSpec:
    return SweepSpec(axis=SweepAxis.AVG_SNR_SD_DB, grid=(linear_to_db(base.avg_snr_sd),), base=base)


def reference_config(avg_snr_sd_db: float = 10.0, avg_snr_se_db: float = -5.0, rho: float = 0.5,
                 n_relays: int = 5, target_rate: float = 2.0) -> SystemConfig:
    """Reference operating point: combined relay SNRs at half the direct-link SNRs."""
    sd, se = db_to_linear(avg_snr_sd_db), db_to_linear(avg_snr_se_db)
    return validate(SystemConfig.from_combined(n_relays, rho, sd, 0.5 * sd, se, 0.5 * se,
                                               target_rate=target_rate))


def grid_db(lo: float, hi: float, num: int) -> Sequence[float]:
    step = (hi - lo) / (num - 1)
    return [lo + i * step for i in range(num)]
