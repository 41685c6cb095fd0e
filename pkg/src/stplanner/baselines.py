"""Planner variants sharing one search engine.

Five variants are provided: plain collision avoidance (ca), relation-aware
planning with the safety-band judgement only (ir-pred), the full influence
judgement (ir-influ), long/short prediction horizons (ls), and a
contingency-style trunk-and-branch planner (conti).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import AvState, PlannerConfig, PoseState
from .frenet import PlannedPath
from .interaction import (
    CheckCounters,
    EdgeCheckResult,
    Relation,
    _edge_time_speed,
    build_interaction_zones,
    edge_check_interactive,
    initial_relations,
    pairs_on_edge,
)
from .prediction import PredictionSet
from .stsearch import (
    SearchContext,
    SearchResult,
    make_context,
    node_chain,
    prune,
    search,
    terminal_cost,
    trajectory_from_edges,
)

VARIANT_NAMES = ("ca", "ir-pred", "ir-influ", "ls", "conti")

# default ablation flags per variant: (rear predictions kept, initial relation
# determination enabled)
_DEFAULT_FLAGS = {
    "ca": (False, False),
    "ir-pred": (True, True),
    "ir-influ": (True, True),
    "ls": (True, True),
    "conti": (False, True),
}

_LS_SHORT_HORIZON = 2.0
_CONTI_TRUNK_HORIZON = 3.0
_CONTI_INFEASIBLE_PENALTY = 1e4


@dataclass(frozen=True)
class PlannerVariant:
    name: str
    pred_k: int = 1
    rp: bool = True    # keep predictions of agents behind the AV
    ird: bool = True   # judge relations from current poses before searching

    def __post_init__(self):
        if self.name not in VARIANT_NAMES:
            raise ValueError(f"unknown variant {self.name!r} (choose from {VARIANT_NAMES})")
        if self.pred_k < 1:
            raise ValueError("pred_k must be >= 1")


def make_variant(name: str, pred_k: int = 1, rp: bool | None = None,
                 ird: bool | None = None) -> PlannerVariant:
    """Variant with its conventional flag defaults unless explicitly overridden."""
    d_rp, d_ird = _DEFAULT_FLAGS.get(name, (True, True))
    return PlannerVariant(name=name, pred_k=pred_k,
                          rp=d_rp if rp is None else rp,
                          ird=d_ird if ird is None else ird)


def edge_check_ca(parent, child, ctx: SearchContext) -> EdgeCheckResult:
    """Plain collision avoidance: the AV must clear every overlap by c_t."""
    counters = ctx.counters
    pairs = pairs_on_edge(ctx.pairs, ctx.pairs_s, parent.state.s, child.state.s)
    counters.edges += 1
    if not pairs:
        return EdgeCheckResult(True, parent.relations)
    counters.interp_states += len(pairs)
    c_t = ctx.cfg.c_t
    u = child.state.a
    for pair in pairs:
        t_k, _ = _edge_time_speed(parent.state, u, pair.s_k)
        counters.constraint_checks += 1
        if abs(t_k - pair.t_n) < c_t:
            return EdgeCheckResult(False, parent.relations)
    return EdgeCheckResult(True, parent.relations)


def filter_rear_predictions(pset: PredictionSet, path: PlannedPath,
                            enabled: bool) -> PredictionSet:
    """Drop trajectories of agents currently behind the AV unless enabled."""
    if enabled:
        return pset
    kept = []
    for traj in pset.trajectories:
        pose = traj.states[0].pose
        s, _ = path.project(pose.x, pose.y)
        if s >= 0.0:
            kept.append(traj)
    return PredictionSet(trajectories=tuple(kept), horizon=pset.horizon,
                         interval=pset.interval)


def truncate_ls(pset: PredictionSet, short_horizon: float = _LS_SHORT_HORIZON) -> PredictionSet:
    """Keep the most-probable mode full-length, shorten all other modes."""
    new = tuple(traj if traj.mode_index == 0 else traj.truncated(short_horizon)
                for traj in pset.trajectories)
    return PredictionSet(trajectories=new, horizon=pset.horizon, interval=pset.interval)


def _checker_for(variant: PlannerVariant):
    if variant.name == "ca" or variant.name == "conti":
        return edge_check_ca
    judge = "influ" if variant.name == "ir-influ" else "pred"

    def checker(parent, child, ctx):
        return edge_check_interactive(parent, child, ctx, judge=judge)

    return checker


def contingency_search(path: PlannedPath, pset: PredictionSet, agent_shapes: dict,
                       cfg: PlannerConfig, v_bar: float, root_state: AvState,
                       sim_dt: float, counters: CheckCounters | None = None,
                       trunk_horizon: float = _CONTI_TRUNK_HORIZON) -> SearchResult | None:
    """Short common trunk safe against every mode, then per-mode branches.

    The trunk is searched against the union of all modes up to trunk_horizon.
    Each surviving trunk leaf is scored by its running cost plus the mean of
    its best per-mode branch costs; branches with no valid continuation add a
    fixed infeasibility penalty. The executed plan is the best trunk extended
    by its most-probable-mode branch.
    """
    counters = counters or CheckCounters()
    mode_indices = sorted({t.mode_index for t in pset.trajectories})

    def ctx_for(trajs) -> SearchContext:
        sub = PredictionSet(trajectories=tuple(trajs), horizon=pset.horizon,
                            interval=pset.interval)
        zones, pairs = build_interaction_zones(sub, path, agent_shapes, cfg)
        return make_context(path, cfg, v_bar, pairs=pairs, zones=zones,
                            counters=counters)

    union_ctx = ctx_for(pset.trajectories)
    trunk = search(union_ctx, root_state, edge_check_ca, sim_dt,
                   horizon=trunk_horizon, collect_leaves=True)
    if trunk is None:
        return None
    trunk_leaves = prune(trunk.leaves, cfg)

    mode_ctxs = {
        j: ctx_for([t for t in pset.trajectories if t.mode_index == j])
        for j in mode_indices
    } or {0: ctx_for([])}

    best_score = math.inf
    best_edges = None
    best_leaf = None
    for leaf in trunk_leaves:
        branch_costs = []
        exec_branch = None
        for j, mctx in sorted(mode_ctxs.items()):
            res = search(mctx, leaf.state, edge_check_ca, sim_dt)
            if res is None:
                branch_costs.append(_CONTI_INFEASIBLE_PENALTY)
            else:
                branch_costs.append(res.cost)
                if j == min(mode_ctxs):
                    exec_branch = res
        score = leaf.cost + float(np.mean(branch_costs))
        if score < best_score:
            best_score = score
            chain = node_chain(leaf)
            edges = [(a.state, b.state) for a, b in zip(chain, chain[1:])]
            if exec_branch is not None:
                edges = edges + exec_branch.trajectory.edges
                best_leaf = exec_branch.leaf
            else:
                best_leaf = leaf
            best_edges = edges

    if best_edges is None:
        return None
    return SearchResult(trajectory=trajectory_from_edges(best_edges, cfg, sim_dt),
                        leaf=best_leaf, cost=best_score, leaves=[best_leaf])


@dataclass
class PlanCycleResult:
    """One replanning cycle's outcome as consumed by the closed loop."""

    trajectory: object           # Trajectory or None on failure
    path: PlannedPath
    zones: list
    pairs: list
    relations: tuple             # relation record of the selected leaf
    counters: CheckCounters
    failed: bool


def plan_cycle(path: PlannedPath, pset: PredictionSet, agent_shapes: dict,
               variant: PlannerVariant, cfg: PlannerConfig, v_bar: float,
               root_state: AvState, av_pose: PoseState, sim_dt: float,
               counters: CheckCounters | None = None) -> PlanCycleResult:
    """Run one planning cycle of the chosen variant along a prepared path."""
    counters = counters or CheckCounters()
    pset = filter_rear_predictions(pset, path, enabled=variant.rp)
    if variant.name == "ls":
        pset = truncate_ls(pset)

    if variant.name == "conti":
        result = contingency_search(path, pset, agent_shapes, cfg, v_bar,
                                    root_state, sim_dt, counters)
        zones, pairs = build_interaction_zones(pset, path, agent_shapes, cfg)
        relations = tuple(Relation.UNDETERMINED for _ in zones)
        return PlanCycleResult(
            trajectory=result.trajectory if result else None,
            path=path, zones=zones, pairs=pairs, relations=relations,
            counters=counters, failed=result is None)

    zones, pairs = build_interaction_zones(pset, path, agent_shapes, cfg)
    if variant.ird and variant.name != "ca":
        record = initial_relations(zones, av_pose, cfg)
    else:
        record = tuple(Relation.UNDETERMINED for _ in zones)
    ctx = make_context(path, cfg, v_bar, pairs=pairs, zones=zones,
                       initial_record=record, counters=counters)
    result = search(ctx, root_state, _checker_for(variant), sim_dt)
    return PlanCycleResult(
        trajectory=result.trajectory if result else None,
        path=path, zones=zones, pairs=pairs,
        relations=result.leaf.relations if result else record,
        counters=counters, failed=result is None)
