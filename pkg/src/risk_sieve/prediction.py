"""Constant-velocity prediction along recorded paths with growing Gaussian uncertainty."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .config import FilterConfig
from .scenario import (
    InitialState,
    Path,
    RoadUserType,
    Track,
    extract_path,
    initial_state,
)


@dataclass(frozen=True)
class UncertaintySpec:
    """Saturating-linear growth of the longitudinal/lateral position std dev."""

    sigma0_long_m: float
    sigma0_lat_m: float
    sigma_max_long_m: float
    sigma_max_lat_m: float
    growth_long_mps: float
    growth_lat_mps: float


def make_uncertainty_spec(
    user_type: RoadUserType,
    length_m: float,
    width_m: float,
    config: Optional[FilterConfig] = None,
) -> UncertaintySpec:
    """Growth law for one agent: half the body extent at t = 0, capped per type.

    Unless the config fixes explicit rates, growth is chosen so the cap is
    reached exactly at the end of the horizon.
    """
    if config is None:
        config = FilterConfig()
    if user_type is RoadUserType.CAR:
        max_long, max_lat = config.sigma_car_max_m, config.sigma_car_lat_max_m
    elif user_type is RoadUserType.PEDESTRIAN:
        # pedestrians move any which way; the cap is isotropic
        max_long, max_lat = config.sigma_ped_max_m, config.sigma_ped_max_m
    else:
        max_long, max_lat = config.sigma_cyc_max_m, config.sigma_cyc_lat_max_m
    sigma0_long = min(length_m / 2.0, max_long)
    sigma0_lat = min(width_m / 2.0, max_lat)
    growth_long = (
        config.growth_long_mps
        if config.growth_long_mps is not None
        else (max_long - sigma0_long) / config.s_max_s
    )
    growth_lat = (
        config.growth_lat_mps
        if config.growth_lat_mps is not None
        else (max_lat - sigma0_lat) / config.s_max_s
    )
    return UncertaintySpec(
        sigma0_long_m=sigma0_long,
        sigma0_lat_m=sigma0_lat,
        sigma_max_long_m=max_long,
        sigma_max_lat_m=max_lat,
        growth_long_mps=growth_long,
        growth_lat_mps=growth_lat,
    )


def uncertainty_at(spec: UncertaintySpec, horizon_s) -> Tuple[np.ndarray, np.ndarray]:
    """(sigma_long, sigma_lat) after horizon_s seconds (scalar or array).

    Saturation is exact: once growth reaches the cap the returned value is the
    cap itself, not a rounded sum.
    """
    s = np.maximum(np.asarray(horizon_s, dtype=float), 0.0)
    sigma_long = np.where(
        spec.growth_long_mps * s >= spec.sigma_max_long_m - spec.sigma0_long_m,
        spec.sigma_max_long_m,
        spec.sigma0_long_m + spec.growth_long_mps * s,
    )
    sigma_lat = np.where(
        spec.growth_lat_mps * s >= spec.sigma_max_lat_m - spec.sigma0_lat_m,
        spec.sigma_max_lat_m,
        spec.sigma0_lat_m + spec.growth_lat_mps * s,
    )
    return sigma_long, sigma_lat


@dataclass(frozen=True, eq=False)
class GaussianComponent:
    """One weighted planar Gaussian with mean (2,) and covariance (2, 2)."""

    weight: float
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(2)
        cov = np.array(self.cov, dtype=float).reshape(2, 2)
        if not (0.0 < self.weight <= 1.0 + 1e-12):
            raise ValueError(f"weight must be in (0, 1], got {self.weight}")
        if cov[0, 1] != cov[1, 0]:
            raise ValueError("covariance must be symmetric")
        det = cov[0, 0] * cov[1, 1] - cov[0, 1] * cov[1, 0]
        if cov[0, 0] <= 0.0 or det <= 0.0:
            raise ValueError("covariance must be positive definite")
        mean.flags.writeable = False
        cov.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)


def build_component(
    x_m: float,
    y_m: float,
    heading_rad: float,
    sigma_long_m: float,
    sigma_lat_m: float,
    weight: float = 1.0,
) -> GaussianComponent:
    """Gaussian whose major axis is aligned with the heading."""
    c, s = math.cos(heading_rad), math.sin(heading_rad)
    var_long, var_lat = sigma_long_m * sigma_long_m, sigma_lat_m * sigma_lat_m
    cov = np.array(
        [
            [c * c * var_long + s * s * var_lat, c * s * (var_long - var_lat)],
            [c * s * (var_long - var_lat), s * s * var_long + c * c * var_lat],
        ]
    )
    return GaussianComponent(weight=weight, mean=np.array([x_m, y_m]), cov=cov)


@dataclass(frozen=True, eq=False)
class MixturePrediction:
    """Per-step predicted Gaussian mixtures for one agent.

    steps[k] holds the mixture k * dt_s seconds after the anchor; step 0 is
    the anchor itself.
    """

    track_id: str
    dt_s: float
    steps: Tuple[Tuple[GaussianComponent, ...], ...]

    @property
    def n_steps(self) -> int:
        return len(self.steps) - 1


def curve_offsets(sigma_long_m: float, n: int) -> np.ndarray:
    """Evenly spaced arclength offsets for an n-component decomposition.

    The half-width is chosen so the discrete offset variance plus the
    per-component variance (sigma_long^2 / n) reproduces sigma_long^2 exactly.
    """
    if n == 1:
        return np.zeros(1)
    half_width = sigma_long_m * math.sqrt(3.0 * (n - 1) ** 2 / (n * (n + 1.0)))
    return np.linspace(-half_width, half_width, n)


def decompose_along_path(
    path: Path,
    s_center_m: float,
    sigma_long_m: float,
    sigma_lat_m: float,
    n: int,
) -> Tuple[GaussianComponent, ...]:
    """Split one along-path Gaussian into n curve-following components.

    Components sit on the path around s_center_m, each carrying longitudinal
    std sigma_long_m / sqrt(n), so uncertainty bends with the road instead of
    leaking off tangentially.
    """
    sigma_component = sigma_long_m / math.sqrt(n)
    weight = 1.0 / n
    components = []
    for delta in curve_offsets(sigma_long_m, n):
        s = s_center_m + delta
        pos = path.position_at(s)
        heading = float(path.heading_at(s))
        components.append(
            build_component(float(pos[0]), float(pos[1]), heading,
                            sigma_component, sigma_lat_m, weight)
        )
    return tuple(components)


def path_turn_angle(path: Path, s_center_m: float, sigma_long_m: float) -> float:
    """Absolute heading change across +/- 2 sigma_long around s_center_m."""
    h_before = float(path.heading_at(max(s_center_m - 2.0 * sigma_long_m, 0.0)))
    h_after = float(path.heading_at(s_center_m + 2.0 * sigma_long_m))
    return abs(math.remainder(h_after - h_before, 2.0 * math.pi))


def _predicted_arclengths(path: Path, anchor: InitialState, config: FilterConfig) -> np.ndarray:
    s0 = path.project(anchor.x_m, anchor.y_m)
    k = np.arange(config.n_steps() + 1, dtype=float)
    return s0 + anchor.speed_mps * k * config.dt_s


def predict_cv_states(
    track: Track,
    config: Optional[FilterConfig] = None,
    path: Optional[Path] = None,
    anchor: Optional[InitialState] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Constant-speed motion along the recorded path from the anchor state.

    Returns (positions, headings) with shapes (K+1, 2) and (K+1,), K being
    config.n_steps(). The agent keeps its anchor speed, follows the recorded
    polyline, and continues straight along the final direction past its end.
    """
    if config is None:
        config = FilterConfig()
    if path is None:
        path = extract_path(track, config.eps_dedupe_m)
    if anchor is None:
        anchor = initial_state(track)
    if anchor is None:
        raise ValueError(f"track {track.id!r} has no valid points")
    s = _predicted_arclengths(path, anchor, config)
    return path.position_at(s), path.heading_at(s)


def predict_mixture(
    track: Track,
    config: Optional[FilterConfig] = None,
    path: Optional[Path] = None,
    anchor: Optional[InitialState] = None,
) -> MixturePrediction:
    """Predicted Gaussian mixture for every step of the horizon.

    Straight stretches keep a single Gaussian per step; where the path bends
    by more than curvature_threshold_deg within +/- 2 sigma_long of the
    predicted point, the Gaussian is decomposed into curve-following
    components.
    """
    if config is None:
        config = FilterConfig()
    if path is None:
        path = extract_path(track, config.eps_dedupe_m)
    if anchor is None:
        anchor = initial_state(track)
    if anchor is None:
        raise ValueError(f"track {track.id!r} has no valid points")
    spec = make_uncertainty_spec(track.type, track.length_m, track.width_m, config)
    s = _predicted_arclengths(path, anchor, config)
    horizons = np.arange(config.n_steps() + 1, dtype=float) * config.dt_s
    sigma_long, sigma_lat = uncertainty_at(spec, horizons)
    positions = path.position_at(s)
    headings = path.heading_at(s)
    threshold_rad = math.radians(config.curvature_threshold_deg)
    steps = []
    for k in range(len(s)):
        sl, st = float(sigma_long[k]), float(sigma_lat[k])
        if (
            config.n_components > 1
            and path_turn_angle(path, float(s[k]), sl) > threshold_rad
        ):
            steps.append(decompose_along_path(path, float(s[k]), sl, st,
                                              config.n_components))
        else:
            steps.append(
                (build_component(float(positions[k, 0]), float(positions[k, 1]),
                                 float(headings[k]), sl, st),)
            )
    return MixturePrediction(track_id=track.id, dt_s=config.dt_s, steps=tuple(steps))
