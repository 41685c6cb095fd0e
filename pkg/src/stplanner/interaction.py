"""Interaction relations, zones, relation determination and edge checking."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .core import PlannerConfig, PoseState
from .frenet import PlannedPath
from .geometry import angle_diff, rect_corners, rects_overlap, rects_overlap_many
from .prediction import PredictionSet

_EPS_FEASIBLE = 1e-6


class Relation(IntEnum):
    UNDETERMINED = 0
    INFLUENCE = 1
    YIELD = 2
    OVERTAKE = 3
    INVALID = 4


@dataclass(frozen=True)
class OverlapPair:
    """One AV-path location overlapped by one predicted state."""

    s_k: float       # along the AV path
    t_n: float       # predicted state timestamp
    s_n: float       # accumulated distance along the predicted trajectory
    v0: float        # initial speed of the predicted agent
    zone_id: int
    heading: float   # predicted state heading


@dataclass
class InteractionZone:
    zone_id: int
    agent_id: int
    mode_index: int
    pairs: list[OverlapPair]
    inverse: bool
    member_states: list            # (PredictedState, v0) for pre-planning judgement
    agent_shape: tuple[float, float] = (4.5, 2.0)

    @property
    def s_min(self) -> float:
        return min(p.s_k for p in self.pairs)

    @property
    def s_max(self) -> float:
        return max(p.s_k for p in self.pairs)


@dataclass
class CheckCounters:
    """Instrumentation for the complexity accounting of edge checking."""

    edges: int = 0
    interp_states: int = 0        # total interpolated nodes K summed over edges
    constraint_checks: int = 0    # per-label constraint evaluations
    conflict_touches: int = 0     # zone-collection iterations during conflict resolution

    def reset(self) -> None:
        self.edges = 0
        self.interp_states = 0
        self.constraint_checks = 0
        self.conflict_touches = 0


@dataclass(frozen=True)
class EdgeCheckResult:
    valid: bool
    updated_relations: tuple


def _av_sweep_centers(path: PlannedPath, cfg: PlannerConfig):
    """AV footprint centres swept along the path (path samples are rear-axle poses)."""
    cos = np.cos(path.headings)
    sin = np.sin(path.headings)
    centers = path.xy + cfg.rear_axle_offset * np.column_stack([cos, sin])
    return centers


def _contiguous_runs(indices: np.ndarray):
    """Split sorted integer indices into maximal contiguous runs."""
    runs = []
    start = prev = int(indices[0])
    for i in indices[1:]:
        i = int(i)
        if i == prev + 1:
            prev = i
            continue
        runs.append((start, prev))
        start = prev = i
    runs.append((start, prev))
    return runs


def build_interaction_zones(pset: PredictionSet, path: PlannedPath, agent_shapes: dict,
                            cfg: PlannerConfig):
    """Swept-footprint overlaps grouped into interaction zones.

    agent_shapes maps agent id -> (length, width). Returns (zones, pairs)
    where pairs is the flat list of OverlapPairs sorted by s_k.
    """
    centers = _av_sweep_centers(path, cfg)
    zones: list[InteractionZone] = []
    for traj in pset.trajectories:
        length, width = agent_shapes[traj.agent_id]
        raw = []  # (s_k, state)
        for st in traj.states:
            other = rect_corners(st.pose.x, st.pose.y, st.pose.heading, length, width)
            mask = rects_overlap_many(centers, path.headings, cfg.av_length, cfg.av_width, other)
            if not mask.any():
                continue
            for start, end in _contiguous_runs(np.nonzero(mask)[0]):
                s_mid = 0.5 * (path.s[start] + path.s[end])
                raw.append((float(s_mid), st))
        if not raw:
            continue
        raw.sort(key=lambda r: r[0])
        # single-linkage clustering on s with threshold c_z1
        groups = [[raw[0]]]
        for item in raw[1:]:
            if item[0] - groups[-1][-1][0] <= cfg.c_z1:
                groups[-1].append(item)
            else:
                groups.append([item])
        for group in groups:
            inverse = any(
                abs(angle_diff(st.pose.heading, path.heading_at(s_k))) > math.pi / 2
                for s_k, st in group
            )
            if inverse:
                near = group[0][0]
                group = [g for g in group if g[0] - near <= cfg.c_z2]
            zone_id = len(zones)
            pairs = [
                OverlapPair(s_k=s_k, t_n=st.t, s_n=st.s_along, v0=traj.v0,
                            zone_id=zone_id, heading=st.pose.heading)
                for s_k, st in group
            ]
            zones.append(InteractionZone(
                zone_id=zone_id, agent_id=traj.agent_id, mode_index=traj.mode_index,
                pairs=pairs, inverse=inverse,
                member_states=[(st, traj.v0) for _, st in group],
                agent_shape=(length, width)))
    all_pairs = sorted((p for z in zones for p in z.pairs), key=lambda p: (p.s_k, p.zone_id, p.t_n))
    return zones, all_pairs


def initial_relations(zones, av_pose: PoseState, cfg: PlannerConfig) -> tuple:
    """Pre-planning relation judgement per zone.

    Influence: a member state reaches the AV's rear sub-rectangle no earlier
    than c_t. Yield: a member already occupies the path ahead (t < c_t).
    """
    c, s = math.cos(av_pose.heading), math.sin(av_pose.heading)
    # rear sub-rectangle sits behind the rear axle
    rear_center = (av_pose.x - 0.5 * cfg.rear_length * c, av_pose.y - 0.5 * cfg.rear_length * s)
    rear = rect_corners(rear_center[0], rear_center[1], av_pose.heading,
                        cfg.rear_length, cfg.rear_width)
    record = []
    for zone in zones:
        label = Relation.UNDETERMINED
        length, width = zone.agent_shape
        for st, _v0 in zone.member_states:
            if st.t < cfg.c_t:
                continue
            agent_rect = rect_corners(st.pose.x, st.pose.y, st.pose.heading, length, width)
            if rects_overlap(rear, agent_rect):
                label = Relation.INFLUENCE
                break
        if label is Relation.UNDETERMINED:
            if any(p.s_k > 0.0 and p.t_n < cfg.c_t for p in zone.pairs):
                label = Relation.YIELD
        record.append(label)
    return tuple(record)


def response_time(v0: float, s_target: float, u: float):
    """Smallest t >= 0 with s_target = v0 t + u t^2 / 2; None when unreachable."""
    if s_target <= 0.0:
        return 0.0
    if u == 0.0:
        if v0 <= 0.0:
            return None
        return s_target / v0
    if u < 0.0 and u <= -(v0 * v0) / (2.0 * s_target):
        return None
    disc = v0 * v0 + 2.0 * u * s_target
    if disc < 0.0:
        return None
    root = math.sqrt(disc)
    if u > 0.0:
        return (-v0 + root) / u
    t = (-v0 + root) / u
    return t if t >= 0.0 else None


def influence_feasible(t_k: float, s_n: float, v0: float, a_bound: float, c_t: float) -> bool:
    """Can the agent delay its arrival at s_n to t_k + c_t with some u >= a_bound?

    The strongest admissible deceleration maximises the delay; an agent that
    can stop short of s_n entirely always satisfies the constraint.
    """
    if s_n <= 0.0:
        return False
    floor = -(v0 * v0) / (2.0 * s_n) if s_n > 0.0 else -math.inf
    if a_bound <= floor:
        return True
    u_star = max(a_bound, floor + _EPS_FEASIBLE)
    t = response_time(v0, s_n, u_star)
    if t is None:
        return True
    return t >= t_k + c_t


def judge_relation_pred(t_k: float, t_n: float, c_t: float) -> Relation:
    """Implicit relation of plain collision avoidance: the safety-band split."""
    if t_k <= t_n - c_t:
        return Relation.OVERTAKE
    if t_k >= t_n + c_t:
        return Relation.YIELD
    return Relation.INVALID


def judge_relation_influ(t_k: float, v_k: float, pair: OverlapPair,
                         cfg: PlannerConfig) -> Relation:
    """Relation judgement with the influence branch enabled."""
    if v_k > cfg.c_v:
        if (influence_feasible(t_k, pair.s_n, pair.v0, cfg.a_i_judge, cfg.c_t)
                and t_k + cfg.c_f1 + cfg.c_f2 / v_k <= pair.t_n):
            return Relation.INFLUENCE
    return judge_relation_pred(t_k, pair.t_n, cfg.c_t)


def _edge_time_speed(parent_state, u: float, s_k: float):
    """Time and speed at s_k along an edge expanded with control u (CAM)."""
    ds = s_k - parent_state.s
    v2 = parent_state.v * parent_state.v + 2.0 * u * ds
    v_k = math.sqrt(max(v2, 0.0))
    denom = v_k + parent_state.v
    if denom <= 1e-9:
        return parent_state.t, v_k
    return parent_state.t + 2.0 * ds / denom, v_k


def pairs_on_edge(pairs, pairs_s: np.ndarray, s_lo: float, s_hi: float):
    """Pairs with s_k in (s_lo, s_hi]."""
    i = int(np.searchsorted(pairs_s, s_lo, side="right"))
    j = int(np.searchsorted(pairs_s, s_hi, side="right"))
    return pairs[i:j]


def edge_check_interactive(parent, child, ctx, judge: str = "influ",
                           resolve_conflicts: bool = True) -> EdgeCheckResult:
    """Relation-aware edge validation between a parent and its expanded child.

    ctx carries pairs/pairs_s/zone count, the PlannerConfig and CheckCounters.
    Undetermined relations are judged first (influence or safety-band form),
    then per-label constraints are applied, zone conflicts resolved, and the
    child's relation record derived with the yield > influence > overtake
    merge priority.
    """
    cfg = ctx.cfg
    counters = ctx.counters
    pairs = pairs_on_edge(ctx.pairs, ctx.pairs_s, parent.state.s, child.state.s)
    counters.edges += 1
    if not pairs:
        return EdgeCheckResult(True, parent.relations)

    k = len(pairs)
    counters.interp_states += k
    u = child.state.a
    record = parent.relations
    labels = []
    valid = True
    zone_labels: dict[int, set] = {}
    for pair in pairs:
        t_k, v_k = _edge_time_speed(parent.state, u, pair.s_k)
        label = record[pair.zone_id]
        if label is Relation.UNDETERMINED or label == Relation.UNDETERMINED:
            if judge == "influ":
                label = judge_relation_influ(t_k, v_k, pair, cfg)
            else:
                label = judge_relation_pred(t_k, pair.t_n, cfg.c_t)
        labels.append(label)
        zone_labels.setdefault(pair.zone_id, set()).add(label)
        counters.constraint_checks += 1
        if label == Relation.INVALID:
            valid = False
        elif label == Relation.INFLUENCE:
            if not influence_feasible(t_k, pair.s_n, pair.v0, cfg.a_i_check, cfg.c_t):
                valid = False
        elif label == Relation.OVERTAKE:
            if not t_k <= pair.t_n - cfg.c_t:
                valid = False
        elif label == Relation.YIELD:
            if not t_k >= pair.t_n + cfg.c_t:
                valid = False

    if resolve_conflicts:
        for zone_id, lbls in zone_labels.items():
            counters.conflict_touches += sum(1 for p in pairs if p.zone_id == zone_id) + 1
            if Relation.OVERTAKE in lbls and Relation.YIELD in lbls:
                valid = False

    if not valid:
        return EdgeCheckResult(False, parent.relations)

    new_record = list(record)
    for zone_id, lbls in zone_labels.items():
        if record[zone_id] != Relation.UNDETERMINED:
            continue  # frozen
        if Relation.YIELD in lbls:
            new_record[zone_id] = Relation.YIELD
        elif Relation.INFLUENCE in lbls:
            new_record[zone_id] = Relation.INFLUENCE
        elif Relation.OVERTAKE in lbls:
            new_record[zone_id] = Relation.OVERTAKE
    return EdgeCheckResult(True, tuple(new_record))
