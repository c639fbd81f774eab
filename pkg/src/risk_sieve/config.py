"""Tunable filter parameters and the flat key=value config file format."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, fields
from typing import Optional, Tuple


class ConfigError(ValueError):
    """Raised for unknown keys, malformed lines, or out-of-range values."""


@dataclass(frozen=True)
class FilterConfig:
    """All tunable parameters of the risk filter.

    Growth rates and the collision area are optional: left unset, the
    longitudinal/lateral rates default to (sigma_max - sigma_0) / s_max_s per
    agent type, and the collision area defaults to the mean footprint of each
    pair.
    """

    # position-uncertainty growth, per agent type
    sigma_car_max_m: float = 15.0
    sigma_car_lat_max_m: float = 1.5
    sigma_ped_max_m: float = 1.5
    sigma_cyc_max_m: float = 3.3
    sigma_cyc_lat_max_m: float = 1.0
    growth_long_mps: Optional[float] = None
    growth_lat_mps: Optional[float] = None

    # prediction horizon and survival weighting
    s_max_s: float = 8.0
    dt_s: float = 0.25
    tau0_inv_per_s: float = 0.56
    survival_mode: str = "total"

    # collision geometry
    collision_area_m2: Optional[float] = None

    # retrieval
    r_valuable: float = 1e-9
    second_order_pairing: str = "chain"
    dedupe_second_order: bool = False

    # pair eligibility
    v_min_mps: float = 0.5
    path_min_m: float = 5.0
    include_late_starters: bool = True

    # path and mixture construction
    eps_dedupe_m: float = 0.05
    n_components: int = 5
    curvature_threshold_deg: float = 15.0

    # fallback dimensions for tracks that omit their extent
    default_car_length_m: float = 4.8
    default_car_width_m: float = 2.1
    default_pedestrian_length_m: float = 0.8
    default_pedestrian_width_m: float = 0.8
    default_bicycle_length_m: float = 1.8
    default_bicycle_width_m: float = 0.7

    # difficulty baseline
    kalman_horizon_s: float = 8.0
    kalman_fde_threshold_m: float = 10.0

    def __post_init__(self) -> None:
        errors = []
        for name in (
            "sigma_car_max_m", "sigma_car_lat_max_m", "sigma_ped_max_m",
            "sigma_cyc_max_m", "sigma_cyc_lat_max_m", "s_max_s", "dt_s",
            "r_valuable", "curvature_threshold_deg",
            "default_car_length_m", "default_car_width_m",
            "default_pedestrian_length_m", "default_pedestrian_width_m",
            "default_bicycle_length_m", "default_bicycle_width_m",
            "kalman_horizon_s", "kalman_fde_threshold_m",
        ):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                errors.append(f"{name}: must be a positive number, got {value!r}")
        for name in ("tau0_inv_per_s", "v_min_mps", "path_min_m", "eps_dedupe_m"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value >= 0):
                errors.append(f"{name}: must be a non-negative number, got {value!r}")
        for name in ("growth_long_mps", "growth_lat_mps", "collision_area_m2"):
            value = getattr(self, name)
            if value is not None and not (
                isinstance(value, (int, float)) and math.isfinite(value) and value > 0
            ):
                errors.append(f"{name}: must be a positive number or unset, got {value!r}")
        if isinstance(self.dt_s, (int, float)) and isinstance(self.s_max_s, (int, float)):
            if 0 < self.s_max_s < self.dt_s:
                errors.append("dt_s: must not exceed s_max_s")
        if not (isinstance(self.n_components, int) and self.n_components >= 1):
            errors.append(f"n_components: must be an integer >= 1, got {self.n_components!r}")
        if self.survival_mode not in ("total", "pair"):
            errors.append(f"survival_mode: must be 'total' or 'pair', got {self.survival_mode!r}")
        if self.second_order_pairing not in ("chain", "ego"):
            errors.append(
                f"second_order_pairing: must be 'chain' or 'ego', got {self.second_order_pairing!r}"
            )
        if errors:
            raise ConfigError("; ".join(errors))

    def n_steps(self) -> int:
        """Number of prediction steps so the horizon is n_steps() * dt_s."""
        return max(1, round(self.s_max_s / self.dt_s))

    def default_dims(self, type_name: str) -> Tuple[float, float]:
        """Fallback (length_m, width_m) for a road-user type."""
        if type_name == "car":
            return (self.default_car_length_m, self.default_car_width_m)
        if type_name == "pedestrian":
            return (self.default_pedestrian_length_m, self.default_pedestrian_width_m)
        if type_name == "bicycle":
            return (self.default_bicycle_length_m, self.default_bicycle_width_m)
        raise ConfigError(f"unknown road-user type {type_name!r}")


_BOOL_KEYS = {"dedupe_second_order", "include_late_starters"}
_INT_KEYS = {"n_components"}
_ENUM_KEYS = {"survival_mode", "second_order_pairing"}
_OPTIONAL_FLOAT_KEYS = {"growth_long_mps", "growth_lat_mps", "collision_area_m2"}

_TRUE_WORDS = {"1", "true", "yes", "on"}
_FALSE_WORDS = {"0", "false", "no", "off"}
_UNSET_WORDS = {"auto", "none", ""}


def _coerce(key: str, raw: str):
    if key in _BOOL_KEYS:
        word = raw.lower()
        if word in _TRUE_WORDS:
            return True
        if word in _FALSE_WORDS:
            return False
        raise ValueError(f"{key}: expected a boolean, got {raw!r}")
    if key in _INT_KEYS:
        try:
            return int(raw)
        except ValueError:
            raise ValueError(f"{key}: expected an integer, got {raw!r}") from None
    if key in _ENUM_KEYS:
        return raw
    if key in _OPTIONAL_FLOAT_KEYS and raw.lower() in _UNSET_WORDS:
        return None
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"{key}: expected a number, got {raw!r}") from None


def parse_config(text: str) -> FilterConfig:
    """Parse `key = value` lines into a FilterConfig.

    Blank lines are skipped and `#` starts a comment. Unknown keys, duplicate
    keys, and unparsable values raise ConfigError listing every offending
    line.
    """
    known = {f.name for f in fields(FilterConfig)}
    values = {}
    seen = set()
    errors = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not sep or not key:
            errors.append(f"line {lineno}: expected key=value, got {line!r}")
            continue
        if key not in known:
            errors.append(f"line {lineno}: unknown key {key!r}")
            continue
        if key in seen:
            errors.append(f"line {lineno}: duplicate key {key!r}")
            continue
        seen.add(key)
        try:
            values[key] = _coerce(key, value)
        except ValueError as exc:
            errors.append(f"line {lineno}: {exc}")
    if errors:
        raise ConfigError("; ".join(errors))
    return FilterConfig(**values)


def load_config(path) -> FilterConfig:
    """Read and parse a config file, tagging errors with the file name."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        return parse_config(text)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def canonical_text(config: FilterConfig) -> str:
    """Stable key=value rendering of a config, one sorted line per field."""
    lines = []
    for f in sorted(fields(FilterConfig), key=lambda f: f.name):
        value = getattr(config, f.name)
        if value is None:
            rendered = "auto"
        elif isinstance(value, bool):
            rendered = "true" if value else "false"
        else:
            rendered = repr(value) if isinstance(value, float) else str(value)
        lines.append(f"{f.name}={rendered}")
    return "\n".join(lines) + "\n"


def config_hash(config: FilterConfig) -> str:
    """Hex digest identifying the effective parameter set."""
    return hashlib.sha256(canonical_text(config).encode("utf-8")).hexdigest()
