"""Artifact serialization: JSON-lines logs, summaries, and CSV exports.

Trajectory and campaign JSONL files are byte-deterministic for identical
configurations and seeds; wall-clock timestamps and timing diagnostics live
only in summary / experiment-record documents.
"""

from __future__ import annotations

import json
from typing import Iterable

import numpy as np

from .bayes_opt import CampaignLog, CampaignRecord
from .errors import InvalidInputError
from .slope_sim import EpisodeResult, TrajectorySample


EPISODE_SCHEMA_VERSION = "episode.v1"
CAMPAIGN_SCHEMA_VERSION = "campaign.v1"
RECORD_SCHEMA_VERSION = "experiment-record.v1"
ERROR_SCHEMA_VERSION = "error.v1"


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


# -- episodes ---------------------------------------------------------------

def episode_sample_doc(s: TrajectorySample) -> dict:
    return {"t_s": s.t, "x_m": s.x, "y_m": s.y, "yaw_rad": s.yaw, "roll_rad": s.roll}


def episode_jsonl(result: EpisodeResult) -> str:
    return "\n".join(dumps(episode_sample_doc(s)) for s in result.samples) + "\n"


def episode_csv(result: EpisodeResult) -> str:
    lines = ["t_s,x_m,y_m,yaw_rad,roll_rad,outcome"]
    out = result.outcome.value
    lines.extend(
        f"{s.t!r},{s.x!r},{s.y!r},{s.yaw!r},{s.roll!r},{out}" for s in result.samples
    )
    return "\n".join(lines) + "\n"


def episode_summary(result: EpisodeResult) -> dict:
    return {
        "schema_version": EPISODE_SCHEMA_VERSION,
        "outcome": result.outcome.value,
        "final_yaw_rad": result.final_yaw,
        "time_to_target_s": result.time_to_target,
        "downhill_drift_m": result.downhill_drift,
        "n_samples": len(result.samples),
        "duration_recorded_s": result.samples[-1].t,
    }


def downsample_samples(samples: list[TrajectorySample], max_points: int = 2000) -> list[dict]:
    if len(samples) <= max_points:
        picked: Iterable[TrajectorySample] = samples
    else:
        idx = np.linspace(0, len(samples) - 1, max_points).round().astype(int)
        picked = [samples[i] for i in np.unique(idx)]
    return [episode_sample_doc(s) for s in picked]


# -- campaigns --------------------------------------------------------------

def campaign_record_doc(r: CampaignRecord) -> dict:
    return {
        "iteration": r.iteration,
        "kind": r.kind,
        "x": [float(v) for v in r.x],
        "value": r.value,
        "failed": r.failed,
        "best_so_far": r.best_so_far,
        "hyperparams": r.hyperparams,
    }


def campaign_record_line(r: CampaignRecord) -> str:
    return dumps(campaign_record_doc(r))


def campaign_jsonl(log: CampaignLog) -> str:
    return "\n".join(campaign_record_line(r) for r in log.records) + "\n"


def parse_campaign_record(doc: dict) -> CampaignRecord:
    try:
        return CampaignRecord(
            iteration=int(doc["iteration"]),
            kind=str(doc["kind"]),
            x=np.asarray(doc["x"], dtype=float),
            value=None if doc["value"] is None else float(doc["value"]),
            failed=bool(doc["failed"]),
            best_so_far=None if doc["best_so_far"] is None else float(doc["best_so_far"]),
            hyperparams=doc.get("hyperparams"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"malformed campaign record: {exc}") from exc


def parse_campaign_jsonl(text: str) -> list[CampaignRecord]:
    records = []
    for line in text.splitlines():
        line = line.strip()
        if line:
            records.append(parse_campaign_record(json.loads(line)))
    return records


def campaign_summary(log: CampaignLog) -> dict:
    best = log.best_record()
    return {
        "schema_version": CAMPAIGN_SCHEMA_VERSION,
        "iterations": len(log.records),
        "n_failed": sum(1 for r in log.records if r.failed),
        "best_so_far": log.best_so_far,
        "best_iteration": None if best is None else best.iteration,
        "wall_time_s": sum(log.wall_times),
        "wall_time_per_iteration_s": list(log.wall_times),
    }
