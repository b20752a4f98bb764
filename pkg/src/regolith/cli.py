"""Command-line entry points: simulate, optimize, bench, compare, serve.

Artifacts land in ``--out-dir`` (default: a timestamped directory under
``$REGOLITH_DATA_DIR`` or ./regolith-runs).  Invalid configurations exit
with code 2 and a machine-readable error JSON on stdout.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .bayes_opt import CampaignConfig
from .errors import RegolithError
from .experiments import (
    RunConfig,
    campaign_record_summary,
    default_data_dir,
    experiment_record,
    resolve_gait,
    run_optimization,
    run_simulation,
    trrp_seed_point,
)
from .gait import decode, default_space, encode, gait_to_json, preset_names
from .io import (
    ERROR_SCHEMA_VERSION,
    campaign_record_line,
    episode_csv,
    episode_jsonl,
    parse_campaign_jsonl,
)
from .slope_sim import EpisodeConfig, SlopeConfig, run_episode, time_to_yaw
from .terradynamics import (
    BENCH_DT,
    FLUID_PROTOCOL,
    SOLID_PROTOCOL,
    BenchProtocol,
    single_wheel_bench,
)


class CliError(Exception):
    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details


def _emit_error(exc: Exception) -> int:
    doc = {"schema_version": ERROR_SCHEMA_VERSION, "error": str(exc)}
    if isinstance(exc, CliError):
        doc.update(exc.details)
    print(json.dumps(doc, sort_keys=True))
    return 2


def _out_dir(args, kind: str) -> Path:
    if args.out_dir:
        path = Path(args.out_dir)
    else:
        path = default_data_dir() / f"{kind}-{time.strftime('%Y%m%d-%H%M%S')}"
    path.mkdir(parents=True, exist_ok=True)
    return path


def _slope_from(args) -> SlopeConfig:
    return SlopeConfig(slope_angle=math.radians(args.slope_deg))


def _episode_from(args) -> EpisodeConfig:
    return EpisodeConfig(
        duration=args.duration,
        dt=args.dt,
        target_yaw=math.radians(args.target_deg),
        rng_seed=args.seed,
        stop_at_target=args.stop_at_target,
    )


def _load_gait(spec: str):
    try:
        return resolve_gait(spec)
    except RegolithError as exc:
        raise CliError(str(exc), path=spec) from exc


# -- simulate ----------------------------------------------------------------

def cmd_simulate(args) -> int:
    gait = _load_gait(args.gait)
    cfg = RunConfig(gait=gait, slope=_slope_from(args), episode=_episode_from(args))
    result, summary = run_simulation(cfg)
    out = _out_dir(args, "simulate")
    (out / "trajectory.csv").write_text(episode_csv(result), encoding="utf-8")
    (out / "samples.jsonl").write_text(episode_jsonl(result), encoding="utf-8")
    (out / "summary.json").write_text(
        json.dumps(summary, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    record = experiment_record("simulate", cfg.to_doc(), summary)
    (out / "record.json").write_text(json.dumps(record, indent=2) + "\n", encoding="utf-8")
    ttt = summary["time_to_target_s"]
    print(f"outcome: {summary['outcome']}")
    print(f"time_to_target_s: {ttt if ttt is not None else 'never'}")
    print(f"final_yaw_deg: {math.degrees(summary['final_yaw_rad']):.2f}")
    print(f"artifacts: {out}")
    return 0


# -- optimize ----------------------------------------------------------------

def cmd_optimize(args) -> int:
    slope = _slope_from(args)
    episode = _episode_from(args)
    space = default_space()

    history = None
    out = _out_dir(args, "optimize")
    log_path = out / "campaign.jsonl"
    if args.resume:
        resume_path = Path(args.resume)
        if not resume_path.exists():
            raise CliError(f"resume log not found: {resume_path}", path=str(resume_path))
        history = parse_campaign_jsonl(resume_path.read_text(encoding="utf-8"))
        log_path = resume_path

    seed_points = () if args.no_seed_gait else (trrp_seed_point(space),)
    if args.seed_gait:
        seed_points = (encode(_load_gait(args.seed_gait), space),)
    cfg = CampaignConfig(
        budget=args.budget,
        n_random=args.n_random,
        seed_points=seed_points,
        rng_seed=args.seed,
        failure_policy=args.failure_policy,
        failure_penalty=args.penalty,
    )

    mode = "a" if args.resume else "w"
    with open(log_path, mode, encoding="utf-8") as fh:
        def on_record(record):
            fh.write(campaign_record_line(record) + "\n")
            fh.flush()

        log = run_optimization(cfg, slope, episode, space,
                               on_record=on_record, history=history)

    summary = campaign_record_summary(log, cfg)
    (out / "campaign_summary.json").write_text(
        json.dumps(summary, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    best = log.best_record()
    if best is not None:
        best_gait = decode(best.x, space, label=f"bo-best-iter{best.iteration}")
        (out / "best_gait.json").write_text(
            json.dumps(gait_to_json(best_gait), indent=2) + "\n", encoding="utf-8"
        )
    record = experiment_record(
        "campaign",
        {"slope_deg": args.slope_deg, "episode_duration_s": args.duration,
         "dt_s": args.dt, "budget": cfg.budget, "n_random": cfg.n_random,
         "rng_seed": cfg.rng_seed, "failure_policy": cfg.failure_policy},
        summary,
    )
    (out / "record.json").write_text(json.dumps(record, indent=2) + "\n", encoding="utf-8")
    print(f"iterations: {summary['iterations']} (failed: {summary['n_failed']})")
    print(f"best_so_far_rad: {summary['best_so_far']}")
    print(f"artifacts: {out}")
    return 0


# -- bench -------------------------------------------------------------------

def cmd_bench(args) -> int:
    solid = BenchProtocol(
        spin_rate=args.solid_spin, sweep_rate=args.solid_sweep_rate,
        sweep_extent=args.sweep_extent, settle_time=args.settle_time,
    )
    fluid = BenchProtocol(
        spin_rate=args.fluid_spin, sweep_rate=args.fluid_sweep_rate,
        sweep_extent=args.sweep_extent, settle_time=args.settle_time,
    )
    profile_solid = single_wheel_bench(solid, dt=args.dt)
    profile_fluid = single_wheel_bench(fluid, dt=args.dt)
    out = _out_dir(args, "bench")
    profile_solid.to_csv(out / "solid.csv")
    profile_fluid.to_csv(out / "fluid.csv")
    doc = {
        "schema_version": "bench.v1",
        "solid_peak_Nm": profile_solid.peak(),
        "fluid_peak_Nm": profile_fluid.peak(),
        "solid_duration_s": profile_solid.duration_above(0.1),
        "fluid_duration_s": profile_fluid.duration_above(0.1),
    }
    if len(profile_fluid) and profile_fluid.peak() > 0:
        doc["peak_ratio"] = profile_solid.peak() / profile_fluid.peak()
        doc["duration_ratio"] = (
            profile_solid.duration_above(0.1) / profile_fluid.duration_above(0.1)
        )
    (out / "ratios.json").write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n",
                                     encoding="utf-8")
    print(json.dumps(doc, sort_keys=True, indent=2))
    print(f"artifacts: {out}")
    return 0


# -- compare -----------------------------------------------------------------

def cmd_compare(args) -> int:
    names = []
    for name in args.gaits:
        if name in names:
            print(f"warning: duplicate gait {name!r} ignored", file=sys.stderr)
        else:
            names.append(name)
    gaits = [(name, _load_gait(name)) for name in names]

    slope = _slope_from(args)
    episode = _episode_from(args)
    results = {}
    for name, gait in gaits:
        results[name] = run_episode(gait, slope, episode)

    times = np.arange(0.0, args.duration + 1e-9, episode.sample_interval)
    header = "t_s," + ",".join(f"yaw_{name}_rad" for name in names)
    rows = [header]
    from .slope_sim import _yaw_at

    for t in times:
        row = [f"{t!r}"] + [f"{_yaw_at(results[name], float(t))!r}" for name in names]
        rows.append(",".join(row))
    out = _out_dir(args, "compare")
    (out / "compare.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")

    target = math.radians(args.target_deg)
    ordering = {
        name: time_to_yaw(results[name], target) for name in names
    }
    doc = {"schema_version": "compare.v1", "time_to_target_s": ordering,
           "ranking": sorted(
               names, key=lambda n: math.inf if ordering[n] is None else ordering[n]
           )}
    (out / "ordering.json").write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n",
                                       encoding="utf-8")
    print(json.dumps(doc, sort_keys=True, indent=2))
    print(f"artifacts: {out}")
    return 0


# -- serve ---------------------------------------------------------------------

def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(static_dir=args.static_dir, data_dir=args.data_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regolith",
        description="Granular-slope turning-gait laboratory: simulate episodes, "
                    "run optimization campaigns, and reproduce the torque bench.",
    )
    parser.add_argument("--version", action="version", version=f"regolith {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_episode_flags(p, duration=120.0):
        p.add_argument("--slope-deg", type=float, default=25.0)
        p.add_argument("--duration", type=float, default=duration, help="episode length, s")
        p.add_argument("--dt", type=float, default=0.01)
        p.add_argument("--target-deg", type=float, default=90.0)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--stop-at-target", action="store_true")
        p.add_argument("--out-dir", default=None)

    p = sub.add_parser("simulate", help="run one episode and export its trajectory")
    p.add_argument("--gait", required=True,
                   help=f"preset name ({', '.join(preset_names())}) or gait JSON path")
    add_episode_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("optimize", help="run a Bayesian-optimization campaign")
    add_episode_flags(p)
    p.add_argument("--budget", type=int, default=30)
    p.add_argument("--n-random", type=int, default=4)
    p.add_argument("--seed-gait", default=None,
                   help="gait used to seed the search (default: TRRP)")
    p.add_argument("--no-seed-gait", action="store_true")
    p.add_argument("--resume", default=None, help="existing campaign.jsonl to continue")
    p.add_argument("--failure-policy", choices=("omit", "penalty"), default="omit")
    p.add_argument("--penalty", type=float, default=0.0)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("bench", help="virtual single-wheel sweep/spin torque bench")
    p.add_argument("--solid-spin", type=float, default=SOLID_PROTOCOL.spin_rate)
    p.add_argument("--solid-sweep-rate", type=float, default=SOLID_PROTOCOL.sweep_rate)
    p.add_argument("--fluid-spin", type=float, default=FLUID_PROTOCOL.spin_rate)
    p.add_argument("--fluid-sweep-rate", type=float, default=FLUID_PROTOCOL.sweep_rate)
    p.add_argument("--sweep-extent", type=float, default=SOLID_PROTOCOL.sweep_extent,
                   help="stroke extent, rad")
    p.add_argument("--settle-time", type=float, default=SOLID_PROTOCOL.settle_time)
    p.add_argument("--dt", type=float, default=BENCH_DT)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("compare", help="yaw-vs-time comparison across gaits")
    p.add_argument("--gaits", nargs="+", required=True)
    add_episode_flags(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("serve", help="local JSON-over-HTTP service (and UI host)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8489)
    p.add_argument("--static-dir", default=None)
    p.add_argument("--data-dir", default=None)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (RegolithError, CliError, OSError) as exc:
        return _emit_error(exc)


if __name__ == "__main__":
    sys.exit(main())
