"""Minimal end-to-end run: one scenario, one planner variant, one report.

Loads the bundled crossing scenario, runs the closed-loop simulator with the
influence-aware planner, and prints the headline metrics plus a short
cycle-by-cycle trace of the interaction relations the planner committed to.

Usage:
    python demos/quickstart.py [scenario.json] [variant]
"""

import os
import sys

from stplanner import PlannerConfig, compute_metrics, make_variant, run_closed_loop
from stplanner.core import load_scenario
from stplanner.interaction import Relation

HERE = os.path.dirname(os.path.abspath(__file__))
DEFAULT = os.path.join(HERE, os.pardir, "scenarios", "crossing_reactive.json")


def main() -> int:
    path = sys.argv[1] if len(sys.argv) > 1 else DEFAULT
    variant = sys.argv[2] if len(sys.argv) > 2 else "ir-influ"

    scenario = load_scenario(path)
    print(f"scenario: {scenario.name}  variant: {variant}")
    print(f"agents: {len(scenario.agents)}  duration: {scenario.duration}s "
          f"task length: {scenario.task_length} m")

    log = run_closed_loop(scenario, make_variant(variant), cfg=PlannerConfig(), seed=0)
    metrics = compute_metrics([log])

    print()
    print("cycle trace (1 s intervals):")
    for st in log.steps:
        if round(st.t * 10) % 10:
            continue
        rels = sorted({Relation(r).name for (_s, _t, r) in st.pairs})
        print(f"  t={st.t:5.1f}  s={st.progress:6.2f}  v={st.av_v:5.2f}  "
              f"a={st.av_a:+5.2f}  zones={st.rf_count} influence  "
              f"pairs={len(st.pairs)} {rels if rels else ''}")

    print()
    print(f"DIST  {metrics.DIST:8.2f}   distance covered (m, capped at task length)")
    print(f"FR    {metrics.FR:8.3f}   fraction of cycles with no valid plan")
    print(f"JERK  {metrics.JERK:8.2f}   integrated squared jerk of the executed profile")
    print(f"RC    {metrics.RC:8.2f}   integrated squared deceleration of nearby agents")
    print(f"CT    {metrics.CT:8d}   collisions")
    print(f"RCT   {metrics.RCT:8d}   rear-end collisions attributed to other agents")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
