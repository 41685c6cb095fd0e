"""Shared domain types, planner configuration and the scenario data model.

Scenario files are JSON; distances are meters, times seconds, angles radians.
The schema is documented in docs/scenario_format.md.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field

from .geometry import normalize_angle


class ScenarioError(ValueError):
    """Raised when a scenario or config file fails to parse or validate."""

    def __init__(self, message: str, *, field_name: str | None = None):
        self.field_name = field_name
        if field_name:
            message = f"{field_name}: {message}"
        super().__init__(message)


def _require_finite(value: float, name: str) -> float:
    v = float(value)
    if not math.isfinite(v):
        raise ScenarioError("must be finite", field_name=name)
    return v


@dataclass(frozen=True)
class PoseState:
    """Planar pose: position in meters, heading in radians, wrapped to (-pi, pi]."""

    x: float
    y: float
    heading: float

    def __post_init__(self):
        object.__setattr__(self, "x", _require_finite(self.x, "x"))
        object.__setattr__(self, "y", _require_finite(self.y, "y"))
        object.__setattr__(self, "heading", normalize_angle(_require_finite(self.heading, "heading")))


@dataclass(frozen=True)
class AvState:
    """Longitudinal state of the AV along a path: [t, s, v, a]."""

    t: float
    s: float
    v: float
    a: float


@dataclass(frozen=True)
class AgentShape:
    length: float
    width: float

    def __post_init__(self):
        if self.length <= 0.0:
            raise ScenarioError("must be > 0", field_name="shape.length")
        if self.width <= 0.0:
            raise ScenarioError("must be > 0", field_name="shape.width")


@dataclass(frozen=True)
class TimedPose:
    """One sample of a scripted agent trajectory."""

    t: float
    x: float
    y: float
    heading: float


@dataclass(frozen=True)
class AgentDescriptor:
    id: int
    shape: AgentShape
    behavior: str  # "scripted" | "reactive"
    scripted_trajectory: tuple[TimedPose, ...] | None = None
    route: tuple[tuple[float, float], ...] | None = None
    speed: float = 0.0          # cruise speed for reactive agents
    a_lo: float = -3.0          # response deceleration bound (< 0)
    a_hi: float = 1.0           # response acceleration bound (>= 0)

    def __post_init__(self):
        if self.behavior not in ("scripted", "reactive"):
            raise ScenarioError(f"unknown behavior {self.behavior!r}", field_name="behavior")
        if self.behavior == "scripted":
            if not self.scripted_trajectory:
                raise ScenarioError("scripted agent needs a trajectory", field_name="trajectory")
            ts = [p.t for p in self.scripted_trajectory]
            if any(b <= a for a, b in zip(ts, ts[1:])):
                raise ScenarioError("timestamps must be strictly increasing", field_name="trajectory")
        else:
            if self.route is None:
                raise ScenarioError("reactive agent needs a route", field_name="route")
            if not (self.a_lo < 0.0 <= self.a_hi):
                raise ScenarioError("requires a_lo < 0 <= a_hi", field_name="reactive")
            if self.speed < 0.0:
                raise ScenarioError("must be >= 0", field_name="reactive.speed")


@dataclass(frozen=True)
class PlannerConfig:
    """Planner parameters. Defaults follow the reference experiment setup."""

    # search horizon and safety band
    c_T: float = 6.0      # time horizon [s]
    c_v: float = 0.1      # minimum speed condition [m/s]
    c_s: float = 100.0    # distance horizon [m]
    c_t: float = 0.5      # safety time boundary [s]
    # interaction zone grouping
    c_z1: float = 5.0     # same-zone distance interval [m]
    c_z2: float = 5.0     # inverse-zone max coverage [m]
    # cost weights
    w_v: float = 5.0
    w_a: float = 0.5
    w_j: float = 0.8
    # kinematic bounds
    a_min: float = -4.0
    a_max: float = 3.0
    j_min: float = -8.0
    j_max: float = 8.0
    a_lat_max: float = 3.43
    v_limit: float = 13.9
    # influence relation coefficients
    a_i_judge: float = -0.01   # agent response bound while judging relations
    a_i_check: float = -15.0   # agent response bound while checking constraints
    c_f1: float = 1.0
    c_f2: float = 3.0
    # AV footprint; the planner models the AV at its rear axle
    av_length: float = 4.6
    av_width: float = 2.0
    rear_axle_offset: float = 1.4
    rear_length: float = 2.0   # rear sub-rectangle used before planning
    rear_width: float = 1.4
    # pruning grid (s, t, v)
    prune_ds: float = 1.0
    prune_dt: float = 0.25
    prune_dv: float = 0.5
    # forward expansion
    control_count: int = 7
    expand_tau: float = 1.0
    ds_min: float = 2.0
    ds_max: float = 12.0
    # merge path generation
    merge_candidates: tuple[float, ...] = (10.0, 20.0, 30.0, 40.0, 50.0)
    merge_w_len: float = 0.1
    merge_w_smooth: float = 10.0
    curvature_cap: float = 0.5
    path_step: float = 0.5
    # synthetic prediction defaults
    pred_horizon: float = 6.0
    pred_interval: float = 0.5
    pred_accel_set: tuple[float, ...] = (0.0, -1.0, 1.0)

    def __post_init__(self):
        for name in ("c_T", "c_s", "c_t", "c_z1", "c_z2"):
            if getattr(self, name) <= 0.0:
                raise ScenarioError("must be > 0", field_name=name)
        if not (self.a_min < 0.0 < self.a_max):
            raise ScenarioError("requires a_min < 0 < a_max", field_name="a_bounds")
        if not (self.j_min < 0.0 < self.j_max):
            raise ScenarioError("requires j_min < 0 < j_max", field_name="jerk_bounds")
        for name in ("w_v", "w_a", "w_j"):
            if getattr(self, name) < 0.0:
                raise ScenarioError("must be >= 0", field_name=name)
        if self.a_i_judge < self.a_i_check:
            raise ScenarioError("judging must be stricter than checking (a_i_judge >= a_i_check)",
                                field_name="a_i_judge")

    def replace(self, **kwargs) -> "PlannerConfig":
        return dataclasses.replace(self, **kwargs)


@dataclass(frozen=True)
class Scenario:
    name: str
    route: tuple[tuple[float, float], ...]
    av_pose: PoseState
    av_v: float
    av_a: float
    task_length: float
    agents: tuple[AgentDescriptor, ...]
    duration: float = 80.0
    sim_dt: float = 0.1
    v_limit: float | None = None   # overrides PlannerConfig.v_limit when set

    def __post_init__(self):
        if self.duration <= 0.0:
            raise ScenarioError("must be > 0", field_name="duration")
        if self.sim_dt <= 0.0:
            raise ScenarioError("must be > 0", field_name="dt")
        if len(self.route) < 2:
            raise ScenarioError("needs at least two vertices", field_name="route")
        if self.task_length <= 0.0:
            raise ScenarioError("must be > 0", field_name="task_length")
        if self.av_v < 0.0:
            raise ScenarioError("must be >= 0", field_name="av.v")


def _agent_from_dict(d: dict, index: int) -> AgentDescriptor:
    ctx = f"agents[{index}]"
    try:
        shape = AgentShape(length=float(d["shape"]["l"]), width=float(d["shape"]["w"]))
        behavior = d["behavior"]
        traj = None
        if "trajectory" in d and d["trajectory"] is not None:
            traj = tuple(
                TimedPose(t=float(p["t"]), x=float(p["x"]), y=float(p["y"]),
                          heading=float(p.get("heading", 0.0)))
                for p in d["trajectory"]
            )
        route = tuple((float(p[0]), float(p[1])) for p in d["route"]) if d.get("route") else None
        reactive = d.get("reactive") or {}
        return AgentDescriptor(
            id=int(d["id"]),
            shape=shape,
            behavior=behavior,
            scripted_trajectory=traj,
            route=route,
            speed=float(reactive.get("speed", 0.0)),
            a_lo=float(reactive.get("a_lo", -3.0)),
            a_hi=float(reactive.get("a_hi", 1.0)),
        )
    except KeyError as exc:
        raise ScenarioError(f"missing key {exc}", field_name=ctx) from exc
    except ScenarioError as exc:
        raise ScenarioError(str(exc), field_name=ctx) from exc


def parse_scenario(data: dict, name: str = "scenario") -> Scenario:
    try:
        av = data["av"]
        return Scenario(
            name=str(data.get("name", name)),
            route=tuple((float(p[0]), float(p[1])) for p in data["route"]),
            av_pose=PoseState(x=float(av["x"]), y=float(av["y"]), heading=float(av["heading"])),
            av_v=float(av["v"]),
            av_a=float(av.get("a", 0.0)),
            task_length=float(data["task_length"]),
            agents=tuple(_agent_from_dict(a, i) for i, a in enumerate(data.get("agents", []))),
            duration=float(data.get("duration", 80.0)),
            sim_dt=float(data.get("dt", 0.1)),
            v_limit=float(data["v_limit"]) if "v_limit" in data else None,
        )
    except KeyError as exc:
        raise ScenarioError(f"missing key {exc}") from exc


def scenario_to_dict(sc: Scenario) -> dict:
    agents = []
    for a in sc.agents:
        d: dict = {"id": a.id, "shape": {"l": a.shape.length, "w": a.shape.width},
                   "behavior": a.behavior}
        if a.scripted_trajectory is not None:
            d["trajectory"] = [
                {"t": p.t, "x": p.x, "y": p.y, "heading": p.heading} for p in a.scripted_trajectory
            ]
        if a.route is not None:
            d["route"] = [list(p) for p in a.route]
        if a.behavior == "reactive":
            d["reactive"] = {"a_lo": a.a_lo, "a_hi": a.a_hi, "speed": a.speed}
        agents.append(d)
    out = {
        "name": sc.name,
        "route": [list(p) for p in sc.route],
        "av": {"x": sc.av_pose.x, "y": sc.av_pose.y, "heading": sc.av_pose.heading,
               "v": sc.av_v, "a": sc.av_a},
        "task_length": sc.task_length,
        "agents": agents,
        "duration": sc.duration,
        "dt": sc.sim_dt,
    }
    if sc.v_limit is not None:
        out["v_limit"] = sc.v_limit
    return out


def load_scenario(path) -> Scenario:
    with open(path, "r") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{path}: line {exc.lineno}, col {exc.colno}: {exc.msg}") from exc
    import os

    name = os.path.splitext(os.path.basename(str(path)))[0]
    return parse_scenario(data, name=name)


def save_scenario(sc: Scenario, path) -> None:
    with open(path, "w") as fh:
        json.dump(scenario_to_dict(sc), fh, indent=2, sort_keys=True)
        fh.write("\n")


_CONFIG_FIELDS = {f.name for f in dataclasses.fields(PlannerConfig)}


def apply_overrides(cfg: PlannerConfig, overrides: dict) -> PlannerConfig:
    """Apply dotted-key overrides (values may be strings from the CLI)."""
    kwargs = {}
    for key, value in overrides.items():
        if key not in _CONFIG_FIELDS:
            raise ScenarioError(f"unknown config key {key!r}", field_name=key)
        current = getattr(cfg, key)
        if isinstance(current, tuple):
            if isinstance(value, str):
                value = tuple(float(v) for v in value.split(","))
            else:
                value = tuple(float(v) for v in value)
        elif isinstance(current, int) and not isinstance(current, bool):
            value = int(value)
        else:
            value = float(value)
        kwargs[key] = value
    return cfg.replace(**kwargs)


def load_config(path) -> PlannerConfig:
    with open(path, "r") as fh:
        data = json.load(fh)
    return apply_overrides(PlannerConfig(), data)
