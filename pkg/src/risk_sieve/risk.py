"""Pairwise collision probability, survival weighting, and integrated risk."""

from __future__ import annotations

import math
from typing import Iterable, Optional, Sequence

import numpy as np

from .config import FilterConfig
from .prediction import MixturePrediction
from .scenario import Track

# Below this the closed form has lost meaningful precision; flush to zero so
# downstream sums and comparisons are reproducible.
UNDERFLOW_LIMIT = 1e-300


def gaussian_overlap(mean_a, cov_a, mean_b, cov_b,
                     weight_a: float = 1.0, weight_b: float = 1.0) -> float:
    """Integral over the plane of the product of two weighted Gaussians.

    Closed form: the product integrates to the value of a zero-mean Gaussian
    with the summed covariances, evaluated at the mean difference. Exchanging
    the two arguments gives the identical result bit for bit.
    """
    sxx = float(cov_a[0][0]) + float(cov_b[0][0])
    sxy = float(cov_a[0][1]) + float(cov_b[0][1])
    syy = float(cov_a[1][1]) + float(cov_b[1][1])
    dx = float(mean_a[0]) - float(mean_b[0])
    dy = float(mean_a[1]) - float(mean_b[1])
    det = sxx * syy - sxy * sxy
    if det <= 0.0 or sxx <= 0.0:
        raise ValueError("summed covariance must be positive definite")
    quad = (syy * dx * dx - 2.0 * sxy * dx * dy + sxx * dy * dy) / det
    value = (weight_a * weight_b) * math.exp(-0.5 * quad) / (2.0 * math.pi * math.sqrt(det))
    return value if value >= UNDERFLOW_LIMIT else 0.0


def step_overlap(components_a: Sequence, components_b: Sequence) -> float:
    """Overlap density of two mixtures: the double sum of component overlaps.

    Summed with math.fsum so the result does not depend on component order.
    """
    return math.fsum(
        gaussian_overlap(a.mean, a.cov, b.mean, b.cov, a.weight, b.weight)
        for a in components_a
        for b in components_b
    )


def collision_area(track_a: Track, track_b: Track,
                   config: Optional[FilterConfig] = None) -> float:
    """Effective collision cross-section for a pair: mean footprint, unless fixed."""
    if config is not None and config.collision_area_m2 is not None:
        return config.collision_area_m2
    return 0.5 * (track_a.length_m * track_a.width_m + track_b.length_m * track_b.width_m)


def pair_collision_profile(pred_a: MixturePrediction, pred_b: MixturePrediction,
                           collision_area_m2: float) -> np.ndarray:
    """Per-step collision probability for one pair over the horizon.

    Scaling the overlap density by the collision area turns it into a
    probability, clamped to 1. Exchanging the two predictions gives the
    identical profile bit for bit.
    """
    if pred_a.dt_s != pred_b.dt_s:
        raise ValueError("predictions use different step sizes")
    if len(pred_a.steps) != len(pred_b.steps):
        raise ValueError("predictions cover different horizons")
    out = np.empty(len(pred_a.steps))
    for k, (step_a, step_b) in enumerate(zip(pred_a.steps, pred_b.steps)):
        out[k] = min(step_overlap(step_a, step_b) * collision_area_m2, 1.0)
    return out


def total_collision_profile(profiles: Iterable[np.ndarray], n_steps: int) -> np.ndarray:
    """Per-step probability of collision with anyone: summed profiles, capped at 1."""
    total = np.zeros(n_steps + 1)
    for profile in profiles:
        total += profile
    return np.minimum(total, 1.0)


def survival_curve(collision_profile: np.ndarray, config: Optional[FilterConfig] = None) -> np.ndarray:
    """Probability that the ego is still driving undisturbed before each step.

    Starts at 1 and decays by a constant background event rate plus the
    collision probability of each elapsed step.
    """
    if config is None:
        config = FilterConfig()
    background = math.exp(-config.tau0_inv_per_s * config.dt_s)
    out = np.empty(len(collision_profile))
    out[0] = 1.0
    for k in range(1, len(collision_profile)):
        out[k] = out[k - 1] * background * math.exp(-float(collision_profile[k - 1]))
    return out


def integrate_risk(survival: np.ndarray, collision_profile: np.ndarray) -> float:
    """Total risk: per-step collision probability weighted by reaching that step."""
    if len(survival) != len(collision_profile):
        raise ValueError("survival and profile lengths differ")
    return math.fsum(float(s) * float(p) for s, p in zip(survival, collision_profile))
