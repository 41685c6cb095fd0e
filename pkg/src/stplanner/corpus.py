"""Synthetic scenario corpus: generators and a writer entry point.

The centerpiece is a shallow-angle merge conflict: a faster agent converges
into the AV route ahead of the AV. The arrival-time margin at the merge
point is controlled directly, which makes the scenarios useful for sweeping
relation-judgement coefficients.
"""

from __future__ import annotations

import argparse
import math
import os

from .core import AgentDescriptor, AgentShape, PoseState, Scenario, TimedPose, save_scenario


def straight_empty(length: float = 250.0, v0: float = 10.0, v_limit: float = 12.0,
                   duration: float = 15.0, task_length: float = 80.0) -> Scenario:
    """Unobstructed straight road; the AV should cruise at the speed limit."""
    return Scenario(
        name="straight_empty",
        route=((-20.0, 0.0), (length, 0.0)),
        av_pose=PoseState(0.0, 0.0, 0.0),
        av_v=v0, av_a=0.0,
        task_length=task_length,
        agents=(),
        duration=duration,
        sim_dt=0.1,
        v_limit=v_limit,
    )


def merge_conflict(agent_dist: float = 60.0, agent_speed: float = 9.0,
                   merge_x: float = 30.0, angle_deg: float = 50.0,
                   av_speed: float = 6.0, duration: float = 10.0,
                   name: str = "crossing_reactive") -> Scenario:
    """A reactive agent merging into the AV route ahead of the AV.

    agent_dist is the agent's route distance to the merge point, so the
    arrival margin at the merge is agent_dist/agent_speed - merge_x/av_speed.
    The convergence angle is steep enough that an AV stopped short of the
    merge stays outside the agent's lookahead corridor.
    """
    ang = math.radians(angle_deg)
    start = (merge_x - agent_dist * math.cos(ang), agent_dist * math.sin(ang))
    agent = AgentDescriptor(
        id=1,
        shape=AgentShape(length=4.5, width=2.0),
        behavior="reactive",
        route=(start, (merge_x, 0.0), (250.0, 0.0)),
        speed=agent_speed,
        a_lo=-3.0,
        a_hi=1.0,
    )
    return Scenario(
        name=name,
        route=((-20.0, 0.0), (250.0, 0.0)),
        av_pose=PoseState(0.0, 0.0, 0.0),
        av_v=av_speed, av_a=0.0,
        task_length=150.0,
        agents=(agent,),
        duration=duration,
        sim_dt=0.1,
        v_limit=av_speed,
    )


def oblique_crossing(lead_time: float = 1.7, agent_speed: float = 10.8,
                     cross_angle_deg: float = 33.7, cross_x: float = 40.0,
                     agent_length: float = 12.0, agent_width: float = 2.5,
                     av_speed: float = 6.0, duration: float = 12.0,
                     name: str = "crossing_reactive") -> Scenario:
    """A long vehicle cutting across the AV lane at a shallow angle.

    Its footprint sweeps a zone long enough to span several expansion edges,
    with the AV's arrival margin shrinking toward the zone's far end.
    lead_time sets how long before the agent's center the AV would reach the
    crossing point when both hold speed.
    """
    ang = math.radians(cross_angle_deg)
    d = (math.cos(ang), -math.sin(ang))
    t_av = cross_x / av_speed
    dist = (t_av + lead_time) * agent_speed
    start = (cross_x - dist * d[0], -dist * d[1])
    end = (cross_x + 80.0 * d[0], 80.0 * d[1])
    agent = AgentDescriptor(
        id=1,
        shape=AgentShape(length=agent_length, width=agent_width),
        behavior="reactive",
        route=(start, (cross_x, 0.0), end),
        speed=agent_speed,
        a_lo=-3.0,
        a_hi=1.0,
    )
    return Scenario(
        name=name,
        route=((-20.0, 0.0), (250.0, 0.0)),
        av_pose=PoseState(0.0, 0.0, 0.0),
        av_v=av_speed, av_a=0.0,
        task_length=150.0,
        agents=(agent,),
        duration=duration,
        sim_dt=0.1,
        v_limit=av_speed,
    )


def crossing_suite() -> list[Scenario]:
    """Ten merge conflicts spanning arrival margins of roughly 0.8 to 2.4 s."""
    out = []
    for speed, dists in ((9.0, (52.0, 55.0, 58.0, 61.0, 64.0)),
                         (8.0, (47.0, 50.0, 53.0, 56.0, 59.0))):
        for dist in dists:
            name = f"merge_v{speed:.0f}_d{dist:.0f}"
            out.append(merge_conflict(agent_dist=dist, agent_speed=speed, name=name))
    return out


def scripted_crossing(cross_x: float = 45.0, agent_speed: float = 6.0,
                      arrival_t: float = 6.0, duration: float = 12.0) -> Scenario:
    """A scripted agent crossing the road perpendicularly at a fixed time."""
    y0 = arrival_t * agent_speed
    y1 = y0 - duration * agent_speed - 20.0
    traj = tuple(
        TimedPose(t=tt, x=cross_x, y=y0 - agent_speed * tt, heading=-math.pi / 2)
        for tt in (0.0, (y0 - y1) / agent_speed)
    )
    agent = AgentDescriptor(
        id=1,
        shape=AgentShape(length=4.5, width=2.0),
        behavior="scripted",
        scripted_trajectory=traj,
        route=((cross_x, y0 + 5.0), (cross_x, y1)),
    )
    return Scenario(
        name="scripted_crossing",
        route=((-20.0, 0.0), (250.0, 0.0)),
        av_pose=PoseState(0.0, 0.0, 0.0),
        av_v=8.0, av_a=0.0,
        task_length=120.0,
        agents=(agent,),
        duration=duration,
        sim_dt=0.1,
        v_limit=10.0,
    )


def default_corpus() -> list[Scenario]:
    return [straight_empty(), merge_conflict(), scripted_crossing()] + crossing_suite()


def write_corpus(outdir: str, scenarios=None) -> list[str]:
    os.makedirs(outdir, exist_ok=True)
    written = []
    for sc in scenarios or default_corpus():
        path = os.path.join(outdir, f"{sc.name}.json")
        save_scenario(sc, path)
        written.append(path)
    return written


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="write the bundled scenario corpus")
    parser.add_argument("outdir", help="directory to write scenario JSON files into")
    args = parser.parse_args(argv)
    for path in write_corpus(args.outdir):
        print(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
