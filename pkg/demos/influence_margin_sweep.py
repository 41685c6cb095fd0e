"""Sweep of the influence time-margin coefficient over the merge suite.

The influence judgement accepts a pass-ahead relation at an interaction zone
only when the arrival margin exceeds c_f1 + c_f2 / v. Raising c_f1 therefore
makes the planner more conservative: fewer influence relations are
established and mean progress drops toward the plain yield behaviour. This
script reproduces that trend over the ten-scenario merge suite.

Usage:
    python demos/influence_margin_sweep.py [c_f1 values, default -0.5 1.0 6.0]
"""

import sys

from stplanner import PlannerConfig, compute_metrics, make_variant, run_closed_loop
from stplanner.core import apply_overrides
from stplanner.corpus import crossing_suite


def main() -> int:
    values = [float(v) for v in sys.argv[1:]] or [-0.5, 1.0, 6.0]
    suite = crossing_suite()
    print(f"suite: {len(suite)} merge scenarios, variant ir-influ")
    print()
    print(f"{'c_f1':>6} {'mean DIST':>10} {'mean RC':>9} {'CT':>4} {'influ cycles':>13}")
    for c_f1 in values:
        cfg = apply_overrides(PlannerConfig(), {"c_f1": c_f1})
        logs = [run_closed_loop(sc, make_variant("ir-influ"), cfg=cfg, seed=0)
                for sc in suite]
        m = compute_metrics(logs)
        rf = sum(lg.rf_established for lg in logs)
        print(f"{c_f1:6.1f} {m.DIST:10.3f} {m.RC:9.2f} {m.CT:4d} {rf:13d}")
    print()
    print("expected trend: DIST and the influence count are non-increasing in c_f1")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
