"""Deterministic closed-loop simulation and the driving metrics.

Each step: snapshot predictions, regenerate the merge path from the current
pose, plan, advance the AV by perfect tracking (or a fixed-deceleration stop
on planner failure), then advance the agents. The loop ends at the scenario
duration, on task completion, or on a valid (non-rear, non-stationary)
collision.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .baselines import PlannerVariant, plan_cycle
from .core import AgentDescriptor, AvState, PlannerConfig, PoseState, Scenario
from .frenet import (
    PathGenerationError,
    ProjectionError,
    Route,
    generate_merge_path,
    project_to_frenet,
)
from .geometry import deepest_contact, rect_corners, rects_overlap
from .interaction import CheckCounters, Relation
from .prediction import (
    PredictionSet,
    degrade_predictions,
    predict_route_following,
)

FALLBACK_DECEL = -4.0
REACTIVE_LOOKAHEAD = 20.0
REACTIVE_RECOVERY_ACCEL = 1.0
COMMIT_WINDOW = 1.0
RC_RANGE = 40.0


@dataclass
class AgentRuntime:
    """Mutable per-agent simulation state."""

    desc: AgentDescriptor
    pose: PoseState
    v: float
    a: float
    route: Route | None          # followed route (reactive) or prediction route
    s_route: float               # arc position on the route, if any

    @property
    def shape(self):
        return (self.desc.shape.length, self.desc.shape.width)


@dataclass
class CollisionEvent:
    t: float
    other_id: int
    classification: str          # "rear" | "stationary" | "valid"


@dataclass
class StepRecord:
    t: float
    av_pose: PoseState
    av_v: float
    av_a: float
    progress: float              # route arc length covered since the start
    planner_ok: bool
    rf_count: int                # zones carrying an influence relation this cycle
    agents: list                 # (id, x, y, heading, v, a)
    plan_t: np.ndarray | None = None
    plan_s: np.ndarray | None = None
    plan_v: np.ndarray | None = None
    pairs: list = field(default_factory=list)   # (s_k, t_n, relation int) per pair
    collisions: list = field(default_factory=list)


@dataclass
class SimLog:
    scenario: str
    variant: str
    steps: list
    failed_cycles: int
    total_cycles: int
    collisions: list             # all CollisionEvent
    counters: CheckCounters
    completed: bool
    task_length: float

    @property
    def distance(self) -> float:
        return self.steps[-1].progress if self.steps else 0.0

    @property
    def rf_established(self) -> int:
        return sum(st.rf_count for st in self.steps)

    def agent_speed_series(self, agent_id: int) -> np.ndarray:
        return np.array([a[4] for st in self.steps for a in st.agents if a[0] == agent_id])

    def to_jsonl(self, path) -> None:
        with open(path, "w") as fh:
            header = {
                "scenario": self.scenario, "variant": self.variant,
                "failed_cycles": self.failed_cycles, "total_cycles": self.total_cycles,
                "completed": self.completed, "task_length": self.task_length,
                "collisions": [
                    {"t": c.t, "other_id": c.other_id, "class": c.classification}
                    for c in self.collisions
                ],
            }
            fh.write(json.dumps(header, sort_keys=True) + "\n")
            for st in self.steps:
                row = {
                    "t": round(st.t, 3),
                    "av": [st.av_pose.x, st.av_pose.y, st.av_pose.heading,
                           st.av_v, st.av_a, st.progress],
                    "ok": st.planner_ok,
                    "rf": st.rf_count,
                    "agents": [list(a) for a in st.agents],
                    "pairs": [list(p) for p in st.pairs],
                }
                fh.write(json.dumps(row, sort_keys=True) + "\n")


@dataclass(frozen=True)
class MetricsReport:
    DIST: float
    FR: float
    JERK: float
    RC: float
    CT: int
    RCT: int


def _scripted_pose(desc: AgentDescriptor, t: float) -> tuple[PoseState, float]:
    """Linear interpolation of the timed trajectory; returns (pose, speed)."""
    pts = desc.scripted_trajectory
    ts = [p.t for p in pts]
    if t <= ts[0]:
        i0, i1, frac = 0, min(1, len(pts) - 1), 0.0
    elif t >= ts[-1]:
        return PoseState(pts[-1].x, pts[-1].y, pts[-1].heading), 0.0
    else:
        i1 = next(i for i, tt in enumerate(ts) if tt > t)
        i0 = i1 - 1
        frac = (t - ts[i0]) / (ts[i1] - ts[i0])
    p0, p1 = pts[i0], pts[i1]
    x = p0.x + frac * (p1.x - p0.x)
    y = p0.y + frac * (p1.y - p0.y)
    h0, h1 = p0.heading, p1.heading
    dh = math.atan2(math.sin(h1 - h0), math.cos(h1 - h0))
    seg_dt = ts[i1] - ts[i0] if i1 > i0 else 1.0
    speed = math.hypot(p1.x - p0.x, p1.y - p0.y) / seg_dt
    return PoseState(x, y, h0 + frac * dh), speed


def _init_agents(scenario: Scenario) -> list[AgentRuntime]:
    agents = []
    for desc in scenario.agents:
        if desc.behavior == "scripted":
            pose, speed = _scripted_pose(desc, 0.0)
            route = Route(desc.route) if desc.route else None
            s0 = route.project(pose.x, pose.y)[0] if route else 0.0
            agents.append(AgentRuntime(desc=desc, pose=pose, v=speed, a=0.0,
                                       route=route, s_route=s0))
        else:
            route = Route(desc.route)
            pose = route.pose_at(0.0)
            agents.append(AgentRuntime(desc=desc, pose=pose, v=desc.speed, a=0.0,
                                       route=route, s_route=0.0))
    return agents


def _straight_route(pose: PoseState, length: float = 300.0) -> Route:
    c, s = math.cos(pose.heading), math.sin(pose.heading)
    return Route([(pose.x, pose.y), (pose.x + length * c, pose.y + length * s)])


def snapshot_predictions(agents: list[AgentRuntime], cfg: PlannerConfig,
                         pred_k: int) -> PredictionSet:
    """Per-agent K constant-acceleration modes from the current kinematic state."""
    trajs = []
    for ag in agents:
        if ag.route is not None:
            route, s0 = ag.route, ag.s_route
        else:
            route, s0 = _straight_route(ag.pose), 0.0
        trajs.extend(predict_route_following(
            route, s0, max(ag.v, 0.0), pred_k, cfg.pred_horizon, cfg.pred_interval,
            accel_set=cfg.pred_accel_set, agent_id=ag.desc.id))
    return PredictionSet(trajectories=tuple(trajs), horizon=cfg.pred_horizon,
                         interval=cfg.pred_interval)


def _av_center(pose: PoseState, cfg: PlannerConfig) -> tuple[float, float]:
    return (pose.x + cfg.rear_axle_offset * math.cos(pose.heading),
            pose.y + cfg.rear_axle_offset * math.sin(pose.heading))


def step_agents(agents: list[AgentRuntime], t_next: float, dt: float,
                av_pose: PoseState, av_blockers: list, cfg: PlannerConfig) -> None:
    """Advance all agents in place to t_next.

    av_blockers is the list of (x, y) AV center positions the reactive agents
    must treat as occupied: the current footprint center plus the near-term
    committed plan positions.
    """
    for ag in agents:
        if ag.desc.behavior == "scripted":
            pose, speed = _scripted_pose(ag.desc, t_next)
            ag.a = (speed - ag.v) / dt
            ag.v = speed
            ag.pose = pose
            if ag.route is not None:
                ag.s_route = ag.route.project(pose.x, pose.y)[0]
            continue
        blocked = False
        lat_limit = 0.5 * (ag.desc.shape.width + cfg.av_width) + 0.5
        for bx, by in av_blockers:
            s_b, d_b = ag.route.project(bx, by)
            if ag.s_route < s_b <= ag.s_route + REACTIVE_LOOKAHEAD and abs(d_b) <= lat_limit:
                blocked = True
                break
        if blocked:
            a = ag.desc.a_lo
        elif ag.v < ag.desc.speed:
            a = min(ag.desc.a_hi, REACTIVE_RECOVERY_ACCEL)
        else:
            a = 0.0
        v_new = ag.v + a * dt
        v_new = min(max(v_new, 0.0), max(ag.desc.speed, ag.v))
        a_eff = (v_new - ag.v) / dt
        ag.s_route += ag.v * dt + 0.5 * a_eff * dt * dt
        ag.v = v_new
        ag.a = a_eff
        ag.pose = ag.route.pose_at(ag.s_route)


def detect_collisions(av_pose: PoseState, av_v: float, agents: list[AgentRuntime],
                      cfg: PlannerConfig, t: float, active: set) -> list[CollisionEvent]:
    """Oriented-rectangle contact events, classified; one event per contact onset."""
    cx, cy = _av_center(av_pose, cfg)
    av_rect = rect_corners(cx, cy, av_pose.heading, cfg.av_length, cfg.av_width)
    events = []
    touching = set()
    for ag in agents:
        other = rect_corners(ag.pose.x, ag.pose.y, ag.pose.heading,
                             ag.desc.shape.length, ag.desc.shape.width)
        if not rects_overlap(av_rect, other):
            continue
        touching.add(ag.desc.id)
        if ag.desc.id in active:
            continue
        contact = deepest_contact(av_rect, other)
        rear_half = False
        if contact is not None:
            local_x = ((contact[0] - cx) * math.cos(av_pose.heading)
                       + (contact[1] - cy) * math.sin(av_pose.heading))
            rear_half = local_x < 0.0
        if rear_half and ag.v > av_v:
            cls = "rear"
        elif av_v < 0.01:
            cls = "stationary"
        else:
            cls = "valid"
        events.append(CollisionEvent(t=t, other_id=ag.desc.id, classification=cls))
    active.intersection_update(touching)
    active.update(touching)
    return events


def run_closed_loop(scenario: Scenario, variant: PlannerVariant,
                    cfg: PlannerConfig | None = None, seed: int = 0,
                    lateral_sigma: float = 0.0, timing_sigma: float = 0.0) -> SimLog:
    cfg = cfg or PlannerConfig()
    if scenario.v_limit is not None:
        cfg = cfg.replace(v_limit=scenario.v_limit)
    v_bar = cfg.v_limit
    dt = scenario.sim_dt

    route = Route(scenario.route)
    agents = _init_agents(scenario)
    agent_shapes = {a.desc.id: a.shape for a in agents}

    av_pose = scenario.av_pose
    av_v = scenario.av_v
    av_a = scenario.av_a
    s_start = route.project(av_pose.x, av_pose.y)[0]

    counters = CheckCounters()
    steps: list[StepRecord] = []
    all_collisions: list[CollisionEvent] = []
    active_contacts: set = set()
    failed = 0
    total = 0
    completed = False

    n_steps = int(round(scenario.duration / dt))
    t = 0.0
    for _ in range(n_steps):
        total += 1
        pset = snapshot_predictions(agents, cfg, variant.pred_k)
        if lateral_sigma > 0.0 or timing_sigma > 0.0:
            pset = degrade_predictions(pset, lateral_sigma, timing_sigma, seed)

        path = None
        result = None
        try:
            fr = project_to_frenet(route, av_pose)
            path = generate_merge_path(route, fr, cfg.merge_candidates, cfg)
            root = AvState(t=0.0, s=0.0, v=av_v, a=av_a)
            result = plan_cycle(path, pset, agent_shapes, variant, cfg, v_bar,
                                root, av_pose, dt, counters)
        except (ProjectionError, PathGenerationError):
            result = None

        if result is not None and not result.failed:
            nxt = result.trajectory.state_at(dt)
            new_pose = path.pose_at(nxt.s)
            new_v, new_a = nxt.v, nxt.a
            ok = True
            rf = sum(1 for r in result.relations if r == Relation.INFLUENCE)
        else:
            failed += 1
            ok = False
            rf = 0
            new_v = max(0.0, av_v + FALLBACK_DECEL * dt)
            ds = max(0.0, 0.5 * (av_v + new_v) * dt)
            new_a = (new_v - av_v) / dt
            if path is not None:
                new_pose = path.pose_at(ds)
            else:
                new_pose = PoseState(
                    av_pose.x + ds * math.cos(av_pose.heading),
                    av_pose.y + ds * math.sin(av_pose.heading),
                    av_pose.heading)

        # commit the near-term plan positions reactive agents must respect
        blockers = [_av_center(new_pose, cfg)]
        if ok and path is not None:
            tt = dt
            while tt <= COMMIT_WINDOW + 1e-9:
                st = result.trajectory.state_at(tt)
                blockers.append(_av_center(path.pose_at(st.s), cfg))
                tt += 0.25
        t += dt
        av_pose, av_v, av_a = new_pose, new_v, new_a
        step_agents(agents, t, dt, av_pose, blockers, cfg)

        events = detect_collisions(av_pose, av_v, agents, cfg, t, active_contacts)
        all_collisions.extend(events)

        progress = route.project(av_pose.x, av_pose.y)[0] - s_start
        rec = StepRecord(
            t=t, av_pose=av_pose, av_v=av_v, av_a=av_a, progress=progress,
            planner_ok=ok, rf_count=rf,
            agents=[(a.desc.id, a.pose.x, a.pose.y, a.pose.heading, a.v, a.a)
                    for a in agents],
            collisions=events)
        if ok:
            rec.plan_t = result.trajectory.t
            rec.plan_s = result.trajectory.s
            rec.plan_v = result.trajectory.v
            rec.pairs = [(p.s_k, p.t_n, int(result.relations[p.zone_id]))
                         for p in result.pairs]
        steps.append(rec)

        if progress >= scenario.task_length:
            completed = True
            break
        if any(e.classification == "valid" for e in events):
            break

    return SimLog(scenario=scenario.name, variant=variant.name, steps=steps,
                  failed_cycles=failed, total_cycles=total,
                  collisions=all_collisions, counters=counters,
                  completed=completed, task_length=scenario.task_length)


def compute_metrics(logs: list[SimLog], dt: float = 0.1) -> MetricsReport:
    if not logs:
        raise ValueError("logs must be non-empty")
    dists, jerks, rcs = [], [], []
    failed = 0
    total = 0
    ct = 0
    rct = 0
    for log in logs:
        dists.append(min(log.distance, log.task_length))
        failed += log.failed_cycles
        total += log.total_cycles
        accels = np.array([st.av_a for st in log.steps])
        if len(accels) >= 2:
            j = np.diff(accels) / dt
            jerks.append(float(np.sum(j * j) * dt))
        else:
            jerks.append(0.0)
        rc = 0.0
        for st in log.steps:
            cx, cy = st.av_pose.x, st.av_pose.y
            for (_aid, x, y, _h, _v, a) in st.agents:
                if a < 0.0 and math.hypot(x - cx, y - cy) <= RC_RANGE:
                    rc += a * a * dt
        rcs.append(rc)
        for ev in log.collisions:
            if ev.classification == "valid":
                ct += 1
            elif ev.classification == "rear":
                rct += 1
    return MetricsReport(
        DIST=float(np.mean(dists)),
        FR=failed / total if total else 0.0,
        JERK=float(np.mean(jerks)),
        RC=float(np.mean(rcs)),
        CT=ct,
        RCT=rct,
    )
