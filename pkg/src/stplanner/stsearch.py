"""Forward spatio-temporal tree search along a planned path.

Expansion uses the constant acceleration model over a speed-dependent
sampling distance; edge validation is delegated to a pluggable checker so
the same engine serves the plain collision-avoidance and the
relation-aware planners.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import AvState, PlannerConfig
from .frenet import PlannedPath, curvature_speed_profile
from .interaction import CheckCounters, EdgeCheckResult, Relation


@dataclass
class SearchNode:
    state: AvState
    parent: "SearchNode | None"
    cost: float
    relations: tuple
    leaf: bool = False


@dataclass
class SearchContext:
    """Immutable per-cycle context shared by expansion and edge checking."""

    path: PlannedPath
    cfg: PlannerConfig
    v_bar: float
    pairs: list
    pairs_s: np.ndarray
    zones: list
    initial_record: tuple
    counters: CheckCounters
    vkap_cum: np.ndarray = field(default=None)
    s_limit: float = 0.0

    def __post_init__(self):
        vkap = curvature_speed_profile(self.path, self.cfg, self.v_bar)
        self.vkap_cum = np.concatenate([[0.0], np.cumsum(vkap)])
        self.s_limit = min(self.cfg.c_s, self.path.length - self.cfg.ds_max)

    def mean_vkap(self, s0: float, s1: float) -> float:
        i = self.path.index_at(s0)
        j = self.path.index_at(s1)
        if j <= i:
            return float(self.vkap_cum[i + 1] - self.vkap_cum[i])
        return float((self.vkap_cum[j + 1] - self.vkap_cum[i]) / (j + 1 - i))


def make_context(path: PlannedPath, cfg: PlannerConfig, v_bar: float,
                 pairs=None, zones=None, initial_record: tuple | None = None,
                 counters: CheckCounters | None = None) -> SearchContext:
    pairs = list(pairs or [])
    zones = list(zones or [])
    if initial_record is None:
        initial_record = tuple(Relation.UNDETERMINED for _ in zones)
    return SearchContext(
        path=path, cfg=cfg, v_bar=v_bar,
        pairs=pairs, pairs_s=np.array([p.s_k for p in pairs]),
        zones=zones, initial_record=initial_record,
        counters=counters or CheckCounters())


def sampling_distance(parent: AvState, cfg: PlannerConfig) -> float:
    """Forward sampling distance: one-step reachable distance, clamped."""
    tau = cfg.expand_tau
    ds = parent.v * tau + 0.5 * cfg.a_max * tau * tau
    return min(max(ds, cfg.ds_min), cfg.ds_max)


def control_set(parent: AvState, ds: float, cfg: PlannerConfig) -> list[float]:
    lo = max(cfg.a_min, -(parent.v * parent.v) / (2.0 * ds))
    hi = cfg.a_max
    if hi <= lo:
        return [hi]
    n = cfg.control_count
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def node_cost(parent: AvState, child: AvState, cfg: PlannerConfig, v_bar: float,
              parent_cost: float) -> float:
    dt = child.t - parent.t
    jerk = (child.a - parent.a) / dt
    return (parent_cost
            + cfg.w_v * abs(v_bar - child.v) * dt
            + cfg.w_a * child.a * child.a * dt
            + cfg.w_j * jerk * jerk * dt)


def expand_children(parent: SearchNode, ctx: SearchContext,
                    horizon: float | None = None) -> list[SearchNode]:
    """CAM expansion of one parent; speed/jerk-infeasible children are dropped."""
    cfg = ctx.cfg
    if horizon is None:
        horizon = cfg.c_T
    p = parent.state
    ds = sampling_distance(p, cfg)
    s_c = p.s + ds
    if s_c > ctx.path.length - 1e-6:
        return []
    v_cap = min(ctx.v_bar, ctx.mean_vkap(p.s, s_c))
    children = []
    for u in control_set(p, ds, cfg):
        v2 = p.v * p.v + 2.0 * u * ds
        if v2 < -1e-9:
            continue
        v_c = math.sqrt(max(v2, 0.0))
        if v_c + p.v <= 1e-9:
            continue
        t_c = p.t + 2.0 * ds / (v_c + p.v)
        if v_c > v_cap + 1e-9:
            continue
        jerk = (u - p.a) / (t_c - p.t)
        if jerk < cfg.j_min - 1e-9 or jerk > cfg.j_max + 1e-9:
            continue
        state = AvState(t=t_c, s=s_c, v=v_c, a=u)
        leaf = (t_c > horizon) or (v_c < cfg.c_v) or (s_c > ctx.s_limit)
        children.append(SearchNode(
            state=state, parent=parent,
            cost=node_cost(p, state, cfg, ctx.v_bar, parent.cost),
            relations=parent.relations, leaf=leaf))
    return children


def prune(nodes: list[SearchNode], cfg: PlannerConfig) -> list[SearchNode]:
    """Keep the best node per (s, t, v) grid cell; ties prefer faster then earlier."""
    best: dict[tuple, SearchNode] = {}
    for node in nodes:
        st = node.state
        key = (math.floor(st.s / cfg.prune_ds),
               math.floor(st.t / cfg.prune_dt),
               math.floor(st.v / cfg.prune_dv))
        cur = best.get(key)
        if cur is None or (node.cost, -st.v, st.t) < (cur.cost, -cur.state.v, cur.state.t):
            best[key] = node
    return list(best.values())


def terminal_cost(node: SearchNode, cfg: PlannerConfig, v_bar: float,
                  horizon: float) -> float:
    """Leaf score: running cost plus shaping for unspent horizon below v_bar."""
    remaining = max(0.0, horizon - node.state.t)
    return node.cost + cfg.w_v * abs(v_bar - node.state.v) * remaining


@dataclass
class Trajectory:
    """Executed-speed profile: node chain resampled at sim_dt via per-edge CAM."""

    edges: list            # list of (parent AvState, child AvState)
    t: np.ndarray
    s: np.ndarray
    v: np.ndarray
    a: np.ndarray
    min_speed_leaf: bool   # leaf reached the minimum-speed condition

    def state_at(self, t_query: float) -> AvState:
        if not self.edges:
            first = AvState(t=0.0, s=0.0, v=0.0, a=0.0)
            return first
        t0 = self.edges[0][0].t
        if t_query <= t0:
            p = self.edges[0][0]
            return AvState(t=t_query, s=p.s, v=p.v, a=p.a)
        for p, c in self.edges:
            if t_query <= c.t + 1e-12:
                dt = t_query - p.t
                u = c.a
                v = max(0.0, p.v + u * dt)
                s = p.s + p.v * dt + 0.5 * u * dt * dt
                return AvState(t=t_query, s=s, v=v, a=u)
        leaf = self.edges[-1][1]
        dt = t_query - leaf.t
        if self.min_speed_leaf or leaf.v <= 0.0:
            return AvState(t=t_query, s=leaf.s, v=0.0, a=0.0)
        return AvState(t=t_query, s=leaf.s + leaf.v * dt, v=leaf.v, a=0.0)


def node_chain(leaf: SearchNode) -> list[SearchNode]:
    chain = [leaf]
    while chain[-1].parent is not None:
        chain.append(chain[-1].parent)
    chain.reverse()
    return chain


def trajectory_from_edges(edges: list, cfg: PlannerConfig, sim_dt: float) -> Trajectory:
    end = edges[-1][1]
    n = max(2, int(math.floor(end.t / sim_dt)) + 1)
    grid = np.arange(n) * sim_dt
    traj = Trajectory(edges=edges, t=grid, s=np.zeros(n), v=np.zeros(n), a=np.zeros(n),
                      min_speed_leaf=end.v < cfg.c_v)
    for i, tt in enumerate(grid):
        st = traj.state_at(float(tt))
        traj.s[i], traj.v[i], traj.a[i] = st.s, st.v, st.a
    return traj


def extract_trajectory(leaf: SearchNode, cfg: PlannerConfig, sim_dt: float) -> Trajectory:
    chain = node_chain(leaf)
    edges = [(a.state, b.state) for a, b in zip(chain, chain[1:])]
    return trajectory_from_edges(edges, cfg, sim_dt)


@dataclass
class SearchResult:
    trajectory: Trajectory
    leaf: SearchNode
    cost: float             # terminal-shaped cost of the selected leaf
    leaves: list            # all terminal leaves (populated on request)


def search(ctx: SearchContext, root_state: AvState, checker, sim_dt: float,
           horizon: float | None = None, collect_leaves: bool = False,
           root_cost: float = 0.0) -> SearchResult | None:
    """Layered forward search; returns None when no valid leaf exists."""
    cfg = ctx.cfg
    if horizon is None:
        horizon = cfg.c_T
    root = SearchNode(state=root_state, parent=None, cost=root_cost,
                      relations=ctx.initial_record, leaf=False)
    terminals: list[SearchNode] = []
    layer = [root]
    while layer:
        grown: list[SearchNode] = []
        for node in layer:
            if node.leaf:
                terminals.append(node)
                continue
            for child in expand_children(node, ctx, horizon):
                result = checker(node, child, ctx)
                if result.valid:
                    child.relations = result.updated_relations
                    grown.append(child)
        layer = prune(grown, cfg)
    if not terminals:
        return None
    best = min(terminals,
               key=lambda n: (terminal_cost(n, cfg, ctx.v_bar, horizon),
                              -n.state.v, n.state.t))
    return SearchResult(
        trajectory=extract_trajectory(best, cfg, sim_dt),
        leaf=best,
        cost=terminal_cost(best, cfg, ctx.v_bar, horizon),
        leaves=terminals if collect_leaves else [best])
