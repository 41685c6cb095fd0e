"""Synthetic multi-modal trajectory predictors.

Multi-modality is realised as constant-acceleration hypotheses applied along
an agent's declared route; no likelihoods are produced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .core import PoseState
from .frenet import Route
from .geometry import normalize_angle


@dataclass(frozen=True)
class PredictedState:
    s_along: float   # accumulated distance along the predicted trajectory
    t: float
    pose: PoseState


@dataclass(frozen=True)
class PredictedTrajectory:
    agent_id: int
    mode_index: int
    states: tuple[PredictedState, ...]
    v0: float

    def truncated(self, t_max: float) -> "PredictedTrajectory":
        return replace(self, states=tuple(s for s in self.states if s.t <= t_max + 1e-9))


@dataclass(frozen=True)
class PredictionSet:
    trajectories: tuple[PredictedTrajectory, ...]
    horizon: float
    interval: float

    def by_agent(self) -> dict[int, list[PredictedTrajectory]]:
        out: dict[int, list[PredictedTrajectory]] = {}
        for traj in self.trajectories:
            out.setdefault(traj.agent_id, []).append(traj)
        return out


def _cam_distance(v0: float, a: float, t: float) -> float:
    """Distance travelled under constant acceleration, speed clipped at zero."""
    if a < 0.0 and v0 + a * t < 0.0:
        t_stop = v0 / -a
        return v0 * t_stop + 0.5 * a * t_stop * t_stop
    return max(0.0, v0 * t + 0.5 * a * t * t)


def predict_constant_velocity(pose: PoseState, v: float, horizon: float, interval: float,
                              agent_id: int = 0, mode_index: int = 0) -> PredictedTrajectory:
    """Straight-line constant-speed prediction from the current pose."""
    if horizon <= 0.0 or interval <= 0.0:
        raise ValueError("horizon and interval must be > 0")
    n = int(round(horizon / interval)) + 1
    c, s = math.cos(pose.heading), math.sin(pose.heading)
    states = []
    for k in range(n):
        t = k * interval
        dist = v * t
        states.append(PredictedState(
            s_along=dist, t=t,
            pose=PoseState(x=pose.x + dist * c, y=pose.y + dist * s, heading=pose.heading)))
    return PredictedTrajectory(agent_id=agent_id, mode_index=mode_index,
                               states=tuple(states), v0=v)


def predict_route_following(route: Route, route_s0: float, v0: float, k_modes: int,
                            horizon: float, interval: float,
                            accel_set=(0.0, -1.0, 1.0),
                            agent_id: int = 0) -> list[PredictedTrajectory]:
    """K constant-acceleration modes along the agent's route (speed clipped at 0)."""
    if k_modes > len(accel_set):
        raise ValueError(f"K={k_modes} exceeds the accel hypothesis set ({len(accel_set)})")
    if route is None:
        raise ValueError("agent has no route to follow")
    n = int(round(horizon / interval)) + 1
    out = []
    for j in range(k_modes):
        a = accel_set[j]
        states = []
        for k in range(n):
            t = k * interval
            dist = _cam_distance(v0, a, t)
            states.append(PredictedState(s_along=dist, t=t, pose=route.pose_at(route_s0 + dist)))
        out.append(PredictedTrajectory(agent_id=agent_id, mode_index=j,
                                       states=tuple(states), v0=v0))
    return out


def degrade_predictions(pset: PredictionSet, lateral_sigma: float, timing_sigma: float,
                        seed: int) -> PredictionSet:
    """Inject controlled lateral / timing error; identity when both sigmas are 0."""
    if lateral_sigma < 0.0 or timing_sigma < 0.0:
        raise ValueError("sigmas must be >= 0")
    if lateral_sigma == 0.0 and timing_sigma == 0.0:
        return pset
    rng = np.random.default_rng(seed)
    new_trajs = []
    for traj in pset.trajectories:
        n = len(traj.states)
        lat = rng.normal(0.0, lateral_sigma, n) if lateral_sigma > 0.0 else np.zeros(n)
        dts = rng.normal(0.0, timing_sigma, n) if timing_sigma > 0.0 else np.zeros(n)
        ts = np.sort(np.array([st.t for st in traj.states]) + dts)
        states = []
        for st, off, t in zip(traj.states, lat, ts):
            h = st.pose.heading
            states.append(PredictedState(
                s_along=st.s_along, t=float(max(t, 0.0)),
                pose=PoseState(x=st.pose.x - off * math.sin(h),
                               y=st.pose.y + off * math.cos(h),
                               heading=h)))
        new_trajs.append(replace(traj, states=tuple(states)))
    return PredictionSet(trajectories=tuple(new_trajs),
                         horizon=pset.horizon, interval=pset.interval)
