"""Local JSON-over-HTTP service backing the gait-studio UI.

Simulate requests are stateless and idempotent for a given seed; one
optimization campaign runs at a time as a background thread whose log can be
polled (a consistent prefix) and stopped.  Validation failures return 400
with field-level details; every response carries its schema version.
"""

from __future__ import annotations

import math
import threading
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .bayes_opt import CampaignConfig
from .errors import NotFoundError, RegolithError
from .experiments import (
    RunConfig,
    make_episode_evaluator,
    run_simulation,
    trrp_seed_point,
)
from .gait import decode, default_space, gait_to_json, preset, preset_names
from .io import (
    campaign_record_doc,
    campaign_record_line,
    downsample_samples,
)
from .slope_sim import EpisodeConfig, SlopeConfig
from .terradynamics import BENCH_DT, BenchProtocol, single_wheel_bench

API_SCHEMA_VERSION = "api.v1"
MAX_TRAJECTORY_POINTS = 2000


class SimulateRequest(BaseModel):
    gait: str | dict = Field(description="preset name or gait document")
    slope_deg: float = 25.0
    duration_s: float = 120.0
    dt_s: float = 0.01
    target_yaw_deg: float = 90.0
    seed: int = 0
    stop_at_target: bool = False


class CampaignStartRequest(BaseModel):
    budget: int = 30
    n_random: int = 4
    seed_gait: str | dict | None = "TRRP"
    slope_deg: float = 25.0
    duration_s: float = 120.0
    dt_s: float = 0.01
    target_yaw_deg: float = 90.0
    rng_seed: int = 0
    failure_policy: str = "omit"
    failure_penalty: float = 0.0


class _Campaign:
    def __init__(self, campaign_id: str, cfg: CampaignConfig, slope: SlopeConfig,
                 episode: EpisodeConfig, log_path: Path | None):
        self.id = campaign_id
        self.cfg = cfg
        self.slope = slope
        self.episode = episode
        self.records: list = []
        self.lock = threading.Lock()
        self.stop_event = threading.Event()
        self.done = threading.Event()
        self.error: str | None = None
        self.log_path = log_path
        self.thread = threading.Thread(target=self._run, daemon=True)

    def _run(self):
        from .bayes_opt import run_campaign

        space = default_space()
        evaluator = make_episode_evaluator(self.slope, self.episode, space)
        fh = open(self.log_path, "w", encoding="utf-8") if self.log_path else None
        try:
            def on_record(record):
                with self.lock:
                    self.records.append(record)
                if fh is not None:
                    fh.write(campaign_record_line(record) + "\n")
                    fh.flush()

            run_campaign(evaluator, self.cfg, space,
                         on_record=on_record, stop=self.stop_event.is_set)
        except Exception as exc:  # surfaced through /status
            self.error = str(exc)
        finally:
            if fh is not None:
                fh.close()
            self.done.set()

    def status_doc(self) -> dict:
        with self.lock:
            records = list(self.records)
        best = None
        best_x = None
        for r in records:
            if not r.failed and (best is None or r.value > best):
                best = r.value
                best_x = r.x
        doc: dict[str, Any] = {
            "schema_version": API_SCHEMA_VERSION,
            "campaign_id": self.id,
            "running": not self.done.is_set(),
            "stop_requested": self.stop_event.is_set(),
            "budget": self.cfg.budget,
            "iterations_completed": len(records),
            "records": [campaign_record_doc(r) for r in records],
            "best_so_far": best,
            "error": self.error,
        }
        if best_x is not None:
            doc["best_gait"] = gait_to_json(decode(best_x, default_space(), label="bo-best"))
        return doc


def create_app(static_dir: str | None = None, data_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="regolith", version=__version__)
    state = {"campaign": None, "counter": 0}
    state_lock = threading.Lock()
    artifacts = Path(data_dir) if data_dir else None
    if artifacts:
        artifacts.mkdir(parents=True, exist_ok=True)

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={
                "schema_version": API_SCHEMA_VERSION,
                "error": "validation failed",
                "fields": [
                    {"loc": [str(p) for p in e["loc"]], "message": e["msg"]}
                    for e in exc.errors()
                ],
            },
        )

    @app.exception_handler(RegolithError)
    async def domain_handler(request: Request, exc: RegolithError):
        status = 404 if isinstance(exc, NotFoundError) else 400
        return JSONResponse(
            status_code=status,
            content={"schema_version": API_SCHEMA_VERSION, "error": str(exc)},
        )

    @app.get("/api/presets")
    def get_presets():
        space = default_space()
        return {
            "schema_version": API_SCHEMA_VERSION,
            "presets": {name: gait_to_json(preset(name)) for name in preset_names()},
            "space": {
                "d": space.d,
                "dims": [
                    {"name": d.name, "lower": d.lower, "upper": d.upper, "kind": d.kind}
                    for d in space.dims
                ],
            },
        }

    def _episode_from(req) -> EpisodeConfig:
        return EpisodeConfig(
            duration=req.duration_s, dt=req.dt_s,
            target_yaw=math.radians(req.target_yaw_deg),
            rng_seed=getattr(req, "seed", getattr(req, "rng_seed", 0)),
            stop_at_target=getattr(req, "stop_at_target", False),
        )

    @app.post("/api/simulate")
    def post_simulate(req: SimulateRequest):
        from .experiments import resolve_gait

        gait = resolve_gait(req.gait) if not isinstance(req.gait, str) else None
        if gait is None:
            gait = preset(req.gait)  # NotFoundError -> 404 via handler
        cfg = RunConfig(
            gait=gait,
            slope=SlopeConfig(slope_angle=math.radians(req.slope_deg)),
            episode=_episode_from(req),
        )
        result, summary = run_simulation(cfg)
        return {
            "schema_version": API_SCHEMA_VERSION,
            "summary": summary,
            "trajectory": downsample_samples(result.samples, MAX_TRAJECTORY_POINTS),
        }

    @app.post("/api/campaign/start")
    def post_campaign_start(req: CampaignStartRequest):
        from .gait import encode
        from .experiments import resolve_gait

        with state_lock:
            active: _Campaign | None = state["campaign"]
            if active is not None and not active.done.is_set():
                return JSONResponse(
                    status_code=409,
                    content={
                        "schema_version": API_SCHEMA_VERSION,
                        "error": "a campaign is already running",
                        "campaign_id": active.id,
                    },
                )
            space = default_space()
            if req.seed_gait is None:
                seed_points = ()
            elif req.seed_gait == "TRRP":
                seed_points = (trrp_seed_point(space),)
            else:
                seed_points = (encode(resolve_gait(req.seed_gait), space),)
            cfg = CampaignConfig(
                budget=req.budget, n_random=req.n_random, seed_points=seed_points,
                rng_seed=req.rng_seed, failure_policy=req.failure_policy,
                failure_penalty=req.failure_penalty,
            ).validate(space)
            state["counter"] += 1
            campaign_id = f"campaign-{state['counter']:04d}"
            log_path = artifacts / f"{campaign_id}.jsonl" if artifacts else None
            campaign = _Campaign(
                campaign_id, cfg,
                SlopeConfig(slope_angle=math.radians(req.slope_deg)),
                _episode_from(req), log_path,
            )
            state["campaign"] = campaign
            campaign.thread.start()
        return {"schema_version": API_SCHEMA_VERSION, "campaign_id": campaign_id,
                "budget": cfg.budget}

    def _find_campaign(campaign_id: str) -> _Campaign:
        campaign: _Campaign | None = state["campaign"]
        if campaign is None or campaign.id != campaign_id:
            raise NotFoundError(f"unknown campaign {campaign_id!r}")
        return campaign

    @app.get("/api/campaign/{campaign_id}/status")
    def get_campaign_status(campaign_id: str):
        return _find_campaign(campaign_id).status_doc()

    @app.post("/api/campaign/{campaign_id}/stop")
    def post_campaign_stop(campaign_id: str):
        campaign = _find_campaign(campaign_id)
        campaign.stop_event.set()
        return {
            "schema_version": API_SCHEMA_VERSION,
            "campaign_id": campaign_id,
            "stop_requested": True,
            "running": not campaign.done.is_set(),
        }

    @app.get("/api/bench")
    def get_bench(
        solid_spin: float = 0.0, solid_sweep_rate: float = 1.0,
        fluid_spin: float = 11.0, fluid_sweep_rate: float = 6.0,
        sweep_extent: float = math.pi / 2, settle_time: float = 0.25,
        dt: float = BENCH_DT,
    ):
        profiles = {}
        ratios: dict[str, float] = {}
        for name, spin, sweep in (
            ("solid", solid_spin, solid_sweep_rate),
            ("fluid", fluid_spin, fluid_sweep_rate),
        ):
            profile = single_wheel_bench(
                BenchProtocol(spin_rate=spin, sweep_rate=sweep,
                              sweep_extent=sweep_extent, settle_time=settle_time),
                dt=dt,
            )
            profiles[name] = {
                "t_s": [float(v) for v in profile.t],
                "torque_Nm": [float(v) for v in profile.torque],
                "peak_Nm": profile.peak(),
                "duration_s": profile.duration_above(0.1),
            }
        if profiles["fluid"]["peak_Nm"] > 0:
            ratios["peak_ratio"] = profiles["solid"]["peak_Nm"] / profiles["fluid"]["peak_Nm"]
        if profiles["fluid"]["duration_s"] > 0:
            ratios["duration_ratio"] = (
                profiles["solid"]["duration_s"] / profiles["fluid"]["duration_s"]
            )
        return {"schema_version": API_SCHEMA_VERSION, "profiles": profiles, **ratios}

    if static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
