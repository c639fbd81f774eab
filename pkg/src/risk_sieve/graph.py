"""Per-scenario risk graphs and first/second-order situation retrieval."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .config import FilterConfig
from .prediction import predict_mixture
from .risk import (
    collision_area,
    integrate_risk,
    pair_collision_profile,
    survival_curve,
    total_collision_profile,
)
from .scenario import Scenario, extract_path, initial_state


@dataclass(frozen=True)
class AgentStatus:
    """Participation record for one agent of a scenario."""

    track_id: str
    predicted: bool
    late_start: bool
    path_length_m: float
    anchor_speed_mps: float
    reason: str = ""  # non-empty when predicted is False


@dataclass(frozen=True)
class RiskEdge:
    ego_id: str
    other_id: str
    risk: float


@dataclass(frozen=True)
class FirstOrderSituation:
    scenario_id: str
    ego_id: str
    other_id: str
    risk: float


@dataclass(frozen=True)
class SecondOrderSituation:
    scenario_id: str
    ego_id: str
    first_id: str
    second_id: str
    risk_first: float
    risk_second: float


class InteractionGraph:
    """Directed risk graph of one scenario.

    Nodes are all validated agents in scenario order. Edges exist for
    eligible pairs, in both directions; in total-survival mode the two
    directions may carry different values.
    """

    def __init__(
        self,
        scenario_id: str,
        node_ids: Sequence[str],
        statuses: Dict[str, AgentStatus],
        risks: Dict[Tuple[str, str], float],
    ):
        self.scenario_id = scenario_id
        self.node_ids = tuple(node_ids)
        self.statuses = dict(statuses)
        self._risks = dict(risks)
        index = {track_id: i for i, track_id in enumerate(self.node_ids)}
        adjacency: Dict[str, List[str]] = {track_id: [] for track_id in self.node_ids}
        for ego_id, other_id in self._risks:
            adjacency[ego_id].append(other_id)
        self._adjacency = {
            ego_id: tuple(sorted(others, key=index.__getitem__))
            for ego_id, others in adjacency.items()
        }

    def risk(self, ego_id: str, other_id: str) -> Optional[float]:
        """Integrated risk of the directed edge, or None when there is no edge."""
        return self._risks.get((ego_id, other_id))

    def neighbors(self, ego_id: str) -> Tuple[str, ...]:
        return self._adjacency[ego_id]

    def edges(self) -> List[RiskEdge]:
        """All directed edges, ordered by (ego, other) scenario position."""
        return [
            RiskEdge(ego_id, other_id, self._risks[(ego_id, other_id)])
            for ego_id in self.node_ids
            for other_id in self._adjacency[ego_id]
        ]


def eligible_pair(status_a: AgentStatus, status_b: AgentStatus,
                  config: Optional[FilterConfig] = None) -> bool:
    """Whether a pair is worth retrieving.

    Two near-stationary agents cannot produce a meaningful conflict, and an
    agent with almost no recorded path gives the predictor nothing to follow;
    such pairs carry no edge.
    """
    if config is None:
        config = FilterConfig()
    if not (status_a.predicted and status_b.predicted):
        return False
    if (status_a.anchor_speed_mps < config.v_min_mps
            and status_b.anchor_speed_mps < config.v_min_mps):
        return False
    if (status_a.path_length_m < config.path_min_m
            or status_b.path_length_m < config.path_min_m):
        return False
    return True


def build_graph(scenario: Scenario, config: Optional[FilterConfig] = None) -> InteractionGraph:
    """Evaluate pairwise integrated risks for one scenario.

    Every agent with a valid sample is predicted (late starters can be
    excluded by config). Survival weighting uses the ego's total collision
    profile over all predicted co-agents in 'total' mode, or just the pair's
    own profile in 'pair' mode (then both directions are equal and computed
    once). Eligibility gates which pairs get edges, not which hazards the
    survival sees.
    """
    if config is None:
        config = FilterConfig()
    order = [track.id for track in scenario.tracks]
    tracks_by_id = {track.id: track for track in scenario.tracks}
    statuses: Dict[str, AgentStatus] = {}
    predictions = {}
    for track in scenario.tracks:
        anchor = initial_state(track)
        if anchor is None:
            statuses[track.id] = AgentStatus(track.id, False, False, 0.0, 0.0,
                                             reason="no_valid_points")
            continue
        if anchor.late_start and not config.include_late_starters:
            statuses[track.id] = AgentStatus(track.id, False, True, 0.0,
                                             anchor.speed_mps,
                                             reason="late_start_excluded")
            continue
        path = extract_path(track, config.eps_dedupe_m)
        predictions[track.id] = predict_mixture(track, config, path=path, anchor=anchor)
        statuses[track.id] = AgentStatus(track.id, True, anchor.late_start,
                                         path.length, anchor.speed_mps)

    predicted_ids = [track_id for track_id in order if track_id in predictions]
    profiles: Dict[Tuple[str, str], object] = {}
    for i, ego_id in enumerate(predicted_ids):
        for other_id in predicted_ids[i + 1:]:
            area = collision_area(tracks_by_id[ego_id], tracks_by_id[other_id], config)
            profiles[(ego_id, other_id)] = pair_collision_profile(
                predictions[ego_id], predictions[other_id], area
            )

    def profile_for(a: str, b: str):
        return profiles[(a, b)] if (a, b) in profiles else profiles[(b, a)]

    risks: Dict[Tuple[str, str], float] = {}
    if config.survival_mode == "pair":
        for i, ego_id in enumerate(predicted_ids):
            for other_id in predicted_ids[i + 1:]:
                if not eligible_pair(statuses[ego_id], statuses[other_id], config):
                    continue
                profile = profiles[(ego_id, other_id)]
                value = integrate_risk(survival_curve(profile, config), profile)
                risks[(ego_id, other_id)] = value
                risks[(other_id, ego_id)] = value
    else:
        survivals = {}
        for ego_id in predicted_ids:
            total = total_collision_profile(
                [profile_for(ego_id, other_id)
                 for other_id in predicted_ids if other_id != ego_id],
                config.n_steps(),
            )
            survivals[ego_id] = survival_curve(total, config)
        for i, ego_id in enumerate(predicted_ids):
            for other_id in predicted_ids[i + 1:]:
                if not eligible_pair(statuses[ego_id], statuses[other_id], config):
                    continue
                profile = profiles[(ego_id, other_id)]
                risks[(ego_id, other_id)] = integrate_risk(survivals[ego_id], profile)
                risks[(other_id, ego_id)] = integrate_risk(survivals[other_id], profile)

    return InteractionGraph(scenario.scenario_id, order, statuses, risks)


def pair_risk(scenario: Scenario, ego_id: str, other_id: str,
              config: Optional[FilterConfig] = None) -> Optional[float]:
    """Integrated risk of one directed pair, evaluated in its full scenario.

    Raises KeyError for unknown ids; returns None when the pair holds no edge
    (ineligible, or a member could not be predicted).
    """
    scenario.track_by_id(ego_id)
    scenario.track_by_id(other_id)
    return build_graph(scenario, config).risk(ego_id, other_id)


def retrieve_first_order(graph: InteractionGraph, r_thr: float) -> List[FirstOrderSituation]:
    """All directed pairs whose integrated risk reaches the threshold."""
    out = []
    for ego_id in graph.node_ids:
        for other_id in graph.neighbors(ego_id):
            value = graph.risk(ego_id, other_id)
            if value >= r_thr:
                out.append(FirstOrderSituation(graph.scenario_id, ego_id, other_id, value))
    return out


def retrieve_second_order(
    graph: InteractionGraph,
    r_thr: float,
    pairing: str = "chain",
    dedupe: bool = False,
) -> List[SecondOrderSituation]:
    """Chains of two threshold-passing links.

    For every first-order pair (ego, first), a second agent joins when its
    link risk reaches the threshold too. The link is measured from `first` in
    'chain' pairing, or from the ego itself in 'ego' pairing. With
    dedupe=True, mirror-image results are reported once: chains with ego and
    second swapped, or (in 'ego' pairing) the two partners exchanged.
    """
    if pairing not in ("chain", "ego"):
        raise ValueError(f"pairing must be 'chain' or 'ego', got {pairing!r}")
    out = []
    seen = set()
    for ego_id in graph.node_ids:
        for first_id in graph.neighbors(ego_id):
            risk_first = graph.risk(ego_id, first_id)
            if risk_first < r_thr:
                continue
            anchor_id = first_id if pairing == "chain" else ego_id
            for second_id in graph.neighbors(anchor_id):
                if second_id == ego_id or second_id == first_id:
                    continue
                risk_second = graph.risk(anchor_id, second_id)
                if risk_second < r_thr:
                    continue
                if dedupe:
                    if pairing == "chain":
                        lo, hi = sorted((ego_id, second_id))
                        key = (lo, first_id, hi)
                    else:
                        lo, hi = sorted((first_id, second_id))
                        key = (ego_id, lo, hi)
                    if key in seen:
                        continue
                    seen.add(key)
                out.append(SecondOrderSituation(
                    graph.scenario_id, ego_id, first_id, second_id,
                    risk_first, risk_second,
                ))
    return out


def valuable_users(graph: InteractionGraph, r_thr: float) -> Tuple[str, ...]:
    """Agents taking part in any first-order situation, in scenario order."""
    members = set()
    for situation in retrieve_first_order(graph, r_thr):
        members.add(situation.ego_id)
        members.add(situation.other_id)
    return tuple(track_id for track_id in graph.node_ids if track_id in members)
