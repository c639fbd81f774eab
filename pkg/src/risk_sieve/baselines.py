"""Reference notions of "worth keeping": prediction difficulty and labeled flags."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .config import FilterConfig
from .scenario import Track, initial_state

_T_EPS = 1e-9


@dataclass(frozen=True)
class BaselineVerdict:
    """Per-agent outcome of the baseline assessments."""

    track_id: str
    fde_m: Optional[float]
    kalman_valuable: Optional[bool]
    ttp_valuable: Optional[bool]
    note: str = ""


def _ground_truth_at(track: Track, target_t_s: float, max_extrapolation_s: float):
    """Recorded position at target_t_s, interpolated between valid samples.

    A target a little past the last valid sample (at most
    max_extrapolation_s) is extrapolated from the final recorded motion;
    anything further returns None.
    """
    valid = [p for p in track.points if p.valid]
    if len(valid) < 2:
        return None
    last = valid[-1]
    if target_t_s > last.t_s + max_extrapolation_s + _T_EPS:
        return None
    if target_t_s > last.t_s:
        prev = valid[-2]
        span = last.t_s - prev.t_s
        vx = (last.x_m - prev.x_m) / span
        vy = (last.y_m - prev.y_m) / span
        dt = target_t_s - last.t_s
        return (last.x_m + vx * dt, last.y_m + vy * dt)
    for before, after in zip(valid, valid[1:]):
        if before.t_s - _T_EPS <= target_t_s <= after.t_s + _T_EPS:
            span = after.t_s - before.t_s
            frac = 0.0 if span == 0.0 else (target_t_s - before.t_s) / span
            return (
                before.x_m + frac * (after.x_m - before.x_m),
                before.y_m + frac * (after.y_m - before.y_m),
            )
    return None


def kalman_fde(track: Track, config: Optional[FilterConfig] = None,
               sample_period_s: Optional[float] = None) -> Optional[float]:
    """Final displacement error of the naive straight-line guess.

    From the anchor state, the agent is assumed to keep its speed and heading
    for kalman_horizon_s; the error is the distance to the recorded position
    at that time. Recordings ending more than one sample period earlier give
    None. sample_period_s defaults to the smallest recorded step.
    """
    if config is None:
        config = FilterConfig()
    anchor = initial_state(track)
    if anchor is None:
        return None
    target_t = anchor.t_s + config.kalman_horizon_s
    if sample_period_s is None:
        periods = [b.t_s - a.t_s for a, b in zip(track.points, track.points[1:])]
        sample_period_s = min(periods) if periods else 0.0
    truth = _ground_truth_at(track, target_t, max_extrapolation_s=sample_period_s)
    if truth is None:
        return None
    predicted_x = anchor.x_m + anchor.speed_mps * config.kalman_horizon_s * math.cos(anchor.heading_rad)
    predicted_y = anchor.y_m + anchor.speed_mps * config.kalman_horizon_s * math.sin(anchor.heading_rad)
    return math.hypot(predicted_x - truth[0], predicted_y - truth[1])


def ttp_flag(track: Track) -> Optional[bool]:
    """Pass-through of the dataset's own prediction-target label, if present."""
    return None if track.ttp is None else bool(track.ttp)


def assess_track(track: Track, config: Optional[FilterConfig] = None,
                 sample_period_s: Optional[float] = None) -> BaselineVerdict:
    """Both baselines for one agent.

    An agent is Kalman-valuable when the straight-line guess misses by at
    least kalman_fde_threshold_m; verdicts stay None (with a note) when the
    recording is too short to score.
    """
    if config is None:
        config = FilterConfig()
    fde = kalman_fde(track, config, sample_period_s)
    return BaselineVerdict(
        track_id=track.id,
        fde_m=fde,
        kalman_valuable=None if fde is None else fde >= config.kalman_fde_threshold_m,
        ttp_valuable=ttp_flag(track),
        note="" if fde is not None else "insufficient track",
    )
