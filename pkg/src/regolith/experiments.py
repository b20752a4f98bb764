"""Shared experiment plumbing for the CLI and the HTTP service.

Both front ends build a :class:`RunConfig`, call :func:`run_simulation` or
:func:`run_optimization`, and serialize through :mod:`regolith.io`, so a
simulation submitted over HTTP reports exactly the numbers the CLI prints
for the same configuration and seed.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .bayes_opt import CampaignConfig, CampaignLog, CampaignRecord, run_campaign
from .errors import InvalidInputError, NotFoundError
from .gait import GaitParams, decode, default_space, encode, gait_from_json, gait_to_json, preset
from .io import RECORD_SCHEMA_VERSION, campaign_summary, episode_summary
from .slope_sim import EpisodeConfig, EpisodeResult, Outcome, SlopeConfig, run_episode
from .space import ParamSpace

DATA_DIR_ENV = "REGOLITH_DATA_DIR"


def default_data_dir() -> Path:
    return Path(os.environ.get(DATA_DIR_ENV, "regolith-runs"))


def resolve_gait(spec) -> GaitParams:
    """Accept a preset name, a gait JSON document, or a path to one."""
    if isinstance(spec, GaitParams):
        return spec
    if isinstance(spec, dict):
        return gait_from_json(spec)
    if isinstance(spec, str):
        try:
            return preset(spec)
        except NotFoundError:
            pass
        path = Path(spec)
        if not path.exists():
            raise NotFoundError(f"gait {spec!r} is neither a preset nor an existing file")
        import json

        return gait_from_json(json.loads(path.read_text(encoding="utf-8")))
    raise InvalidInputError(f"cannot interpret gait spec of type {type(spec).__name__}")


@dataclass(frozen=True)
class RunConfig:
    gait: GaitParams
    slope: SlopeConfig = field(default_factory=SlopeConfig)
    episode: EpisodeConfig = field(default_factory=EpisodeConfig)

    def to_doc(self) -> dict:
        return {
            "gait": gait_to_json(self.gait),
            "slope": {
                "slope_angle_rad": self.slope.slope_angle,
                "gravity_m_s2": self.slope.gravity,
                "downhill_drag_coeff_N_s_m": self.slope.downhill_drag_coeff,
                "translational_damping_N_s_m": self.slope.translational_damping,
                "rotational_damping_N_m_s_rad": self.slope.rotational_damping,
            },
            "episode": {
                "duration_s": self.episode.duration,
                "dt_s": self.episode.dt,
                "target_yaw_rad": self.episode.target_yaw,
                "failure_slide_limit_m": self.episode.failure_slide_limit,
                "rng_seed": self.episode.rng_seed,
                "stop_at_target": self.episode.stop_at_target,
                "sample_interval_s": self.episode.sample_interval,
            },
        }


def run_simulation(cfg: RunConfig) -> tuple[EpisodeResult, dict]:
    """Run one episode and build its summary document."""
    result = run_episode(cfg.gait, cfg.slope, cfg.episode)
    summary = episode_summary(result)
    summary["gait_label"] = cfg.gait.label
    summary["slope_angle_rad"] = cfg.slope.slope_angle
    summary["target_yaw_rad"] = cfg.episode.target_yaw
    summary["rng_seed"] = cfg.episode.rng_seed
    return result, summary


def make_episode_evaluator(
    slope: SlopeConfig,
    episode: EpisodeConfig,
    space: ParamSpace | None = None,
):
    """Evaluator mapping a unit-cube vector to (achieved CCW yaw, failed)."""
    space = space or default_space()

    def evaluate(x: np.ndarray) -> tuple[float | None, bool]:
        gait = decode(np.asarray(x, dtype=float), space)
        result = run_episode(gait, slope, episode)
        if result.outcome is not Outcome.COMPLETED:
            return None, True
        return result.final_yaw, False

    return evaluate


def run_optimization(
    campaign_cfg: CampaignConfig,
    slope: SlopeConfig,
    episode: EpisodeConfig,
    space: ParamSpace | None = None,
    on_record=None,
    stop=None,
    history: list[CampaignRecord] | None = None,
) -> CampaignLog:
    space = space or default_space()
    evaluator = make_episode_evaluator(slope, episode, space)
    return run_campaign(
        evaluator, campaign_cfg, space, on_record=on_record, stop=stop, history=history
    )


def trrp_seed_point(space: ParamSpace | None = None) -> np.ndarray:
    return encode(preset("TRRP"), space or default_space())


def experiment_record(kind: str, config_doc: dict, summary: dict) -> dict:
    """Self-contained record of one experiment: enough to re-run it."""
    return {
        "schema_version": RECORD_SCHEMA_VERSION,
        "package_version": __version__,
        "kind": kind,
        "created_unix": time.time(),
        "config": config_doc,
        "summary": summary,
    }


def campaign_record_summary(log: CampaignLog, campaign_cfg: CampaignConfig) -> dict:
    doc = campaign_summary(log)
    doc["budget"] = campaign_cfg.budget
    doc["n_random"] = campaign_cfg.n_random
    doc["rng_seed"] = campaign_cfg.rng_seed
    doc["failure_policy"] = campaign_cfg.failure_policy
    return doc
