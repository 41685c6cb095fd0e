"""Experiment runner: scenario batches, sweeps, CSV tables, SVG plots."""

from __future__ import annotations

import argparse
import math
import os
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .baselines import VARIANT_NAMES, make_variant
from .core import PlannerConfig, ScenarioError, apply_overrides, load_scenario
from .interaction import Relation
from .simloop import SimLog, compute_metrics, run_closed_loop

CSV_COLUMNS = ("scenario", "variant", "pred_k", "overrides",
               "DIST", "FR", "JERK", "RC", "CT", "RCT")

_RELATION_COLORS = {
    int(Relation.UNDETERMINED): "gray",
    int(Relation.INFLUENCE): "tab:red",
    int(Relation.YIELD): "tab:blue",
    int(Relation.OVERTAKE): "tab:green",
    int(Relation.INVALID): "black",
}


def _load_scenarios(directory: str):
    names = sorted(f for f in os.listdir(directory) if f.endswith(".json"))
    if not names:
        raise ScenarioError(f"no scenario files in {directory}")
    return [load_scenario(os.path.join(directory, n)) for n in names]


def _fmt(value: float) -> str:
    return f"{value:.4f}"


def _overrides_label(overrides: dict) -> str:
    return ";".join(f"{k}={overrides[k]}" for k in sorted(overrides))


def _run_one(scenario, variant, cfg, seed):
    log = run_closed_loop(scenario, variant, cfg, seed=seed)
    metrics = compute_metrics([log], dt=scenario.sim_dt)
    return log, metrics


def _write_csv(rows: list, out_path: str) -> None:
    with open(out_path, "w") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _metrics_row(scenario_name, variant, overrides, metrics) -> tuple:
    return (scenario_name, variant.name, str(variant.pred_k),
            _overrides_label(overrides),
            _fmt(metrics.DIST), _fmt(metrics.FR), _fmt(metrics.JERK),
            _fmt(metrics.RC), str(metrics.CT), str(metrics.RCT))


def plot_st_diagram(log: SimLog, cycle_index: int, out_path: str,
                    c_t: float = 0.5) -> None:
    """Planned s-t profile of one cycle with relation-colored overlap points."""
    if cycle_index < 0 or cycle_index >= len(log.steps):
        raise IndexError(f"cycle {cycle_index} out of range (0..{len(log.steps) - 1})")
    step = log.steps[cycle_index]
    fig, ax = plt.subplots(figsize=(6, 4))
    if step.plan_t is not None:
        ax.plot(step.plan_t, step.plan_s, color="black", label="planned")
    for s_k, t_n, rel in step.pairs:
        color = _RELATION_COLORS.get(rel, "gray")
        ax.plot([t_n], [s_k], marker="o", color=color, linestyle="none")
        if rel in (int(Relation.YIELD), int(Relation.OVERTAKE)):
            ax.plot([t_n - c_t, t_n + c_t], [s_k, s_k], color=color, alpha=0.4)
    ax.set_xlabel("t [s]")
    ax.set_ylabel("s [m]")
    ax.set_title(f"{log.scenario} / {log.variant} / cycle {cycle_index}")
    fig.savefig(out_path, format="svg")
    plt.close(fig)


def plot_birdseye(log: SimLog, out_path: str) -> None:
    """Traces of the AV and every agent over the whole simulation."""
    fig, ax = plt.subplots(figsize=(7, 4))
    av_x = [st.av_pose.x for st in log.steps]
    av_y = [st.av_pose.y for st in log.steps]
    ax.plot(av_x, av_y, color="black", label="AV")
    agent_ids = sorted({a[0] for st in log.steps for a in st.agents})
    for aid in agent_ids:
        xs = [a[1] for st in log.steps for a in st.agents if a[0] == aid]
        ys = [a[2] for st in log.steps for a in st.agents if a[0] == aid]
        ax.plot(xs, ys, label=f"agent {aid}")
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.legend(loc="best", fontsize=8)
    ax.set_title(f"{log.scenario} / {log.variant}")
    fig.savefig(out_path, format="svg")
    plt.close(fig)


def _emit_plots(log: SimLog, plots: str, plot_dir: str, cfg: PlannerConfig) -> None:
    want = plots == "all" or (plots == "failures" and
                              (log.failed_cycles > 0 or log.collisions))
    if not want:
        return
    os.makedirs(plot_dir, exist_ok=True)
    base = f"{log.scenario}_{log.variant}"
    plot_birdseye(log, os.path.join(plot_dir, f"{base}_birdseye.svg"))
    # pick the cycle with overlap pairs closest to mid-run for the s-t view
    candidates = [i for i, st in enumerate(log.steps) if st.pairs]
    idx = candidates[len(candidates) // 2] if candidates else len(log.steps) // 2
    plot_st_diagram(log, idx, os.path.join(plot_dir, f"{base}_st.svg"), c_t=cfg.c_t)


def _parse_overrides(pairs: list) -> dict:
    out = {}
    for item in pairs or []:
        if "=" not in item:
            raise ScenarioError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        out[key] = value
    return out


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scenarios", required=True, help="scenario directory")
    parser.add_argument("--variant", default="ir-influ", choices=VARIANT_NAMES)
    parser.add_argument("--pred-k", type=int, default=1)
    parser.add_argument("--rp", choices=("on", "off"), default=None)
    parser.add_argument("--ird", choices=("on", "off"), default=None)
    parser.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE", help="planner config override")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--plots", choices=("none", "failures", "all"), default="none")


def _flag(value):
    return None if value is None else value == "on"


def _run_batch(scenarios, variant, cfg, overrides, args, rows, failures):
    plot_dir = os.path.join(args.out, "plots")
    log_dir = os.path.join(args.out, "logs")
    for sc in scenarios:
        try:
            log, metrics = _run_one(sc, variant, cfg, args.seed)
        except Exception as exc:  # a single broken run must not kill the batch
            print(f"error: {sc.name}/{variant.name}: {exc}", file=sys.stderr)
            failures.append(sc.name)
            nan = _fmt(math.nan)
            rows.append((sc.name, variant.name, str(variant.pred_k),
                         _overrides_label(overrides), nan, nan, nan, nan, "0", "0"))
            continue
        rows.append(_metrics_row(sc.name, variant, overrides, metrics))
        os.makedirs(log_dir, exist_ok=True)
        log.to_jsonl(os.path.join(log_dir, f"{sc.name}_{variant.name}.jsonl"))
        _emit_plots(log, args.plots, plot_dir, cfg)


def cmd_run(args) -> int:
    scenarios = _load_scenarios(args.scenarios)
    overrides = _parse_overrides(args.overrides)
    cfg = apply_overrides(PlannerConfig(), overrides)
    variant = make_variant(args.variant, pred_k=args.pred_k,
                           rp=_flag(args.rp), ird=_flag(args.ird))
    os.makedirs(args.out, exist_ok=True)
    rows, failures = [], []
    _run_batch(scenarios, variant, cfg, overrides, args, rows, failures)
    rows.sort(key=lambda r: (r[0], r[1], r[2], r[3]))
    _write_csv(rows, os.path.join(args.out, "metrics.csv"))
    return 0


def cmd_sweep(args) -> int:
    scenarios = _load_scenarios(args.scenarios)
    base_overrides = _parse_overrides(args.overrides)
    values = [v for v in args.values.split(",") if v]
    variant = make_variant(args.variant, pred_k=args.pred_k,
                           rp=_flag(args.rp), ird=_flag(args.ird))
    os.makedirs(args.out, exist_ok=True)
    rows, failures = [], []
    for value in values:
        overrides = dict(base_overrides)
        overrides[args.param] = value
        cfg = apply_overrides(PlannerConfig(), overrides)
        _run_batch(scenarios, variant, cfg, overrides, args, rows, failures)
    rows.sort(key=lambda r: (r[0], r[1], r[2], r[3]))
    _write_csv(rows, os.path.join(args.out, "metrics.csv"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stplanner",
                                     description="closed-loop planner experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="run one variant over a scenario directory")
    _add_common(run_p)
    run_p.set_defaults(func=cmd_run)
    sweep_p = sub.add_parser("sweep", help="sweep one config parameter")
    _add_common(sweep_p)
    sweep_p.add_argument("--param", required=True, help="config field to sweep")
    sweep_p.add_argument("--values", required=True, help="comma-separated values")
    sweep_p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
