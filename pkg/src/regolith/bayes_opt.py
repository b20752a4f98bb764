"""Gaussian-process Bayesian optimization over the normalized gait space.

The campaign protocol mirrors the turning experiments: evaluate the seed
gait(s) first, explore a few uniform random points, then propose the
expected-improvement maximizer until the episode budget is spent.  Failed
episodes count against the budget; under the default ``omit`` policy their
parameters never enter the surrogate fit.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import erf

from .errors import EmptyModelError, InvalidInputError, RangeError
from .gp import GaussianProcess, as_sample_matrix
from .space import ParamSpace

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _norm_cdf(z: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + erf(z / _SQRT2))


def _norm_pdf(z: np.ndarray) -> np.ndarray:
    return _INV_SQRT_2PI * np.exp(-0.5 * z * z)


@dataclass(frozen=True)
class Observation:
    x: np.ndarray
    value: float | None
    failed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        if np.any(self.x < 0.0) or np.any(self.x > 1.0):
            raise RangeError("observation x must lie in the unit cube")
        if not self.failed and (self.value is None or not np.isfinite(self.value)):
            raise InvalidInputError("successful observation needs a finite value")


@dataclass(frozen=True)
class FixedHypers:
    lengthscales: float | np.ndarray = 0.3
    signal_variance: float = 1.0
    noise_variance: float = 1e-6
    prior_mean: float | str = 0.0


@dataclass(frozen=True)
class MaximizeLikelihood:
    n_restarts: int = 1
    initial_lengthscale: float = 0.3
    noise_floor: float = 1e-6
    prior_mean: float | str = "auto"


HyperMode = FixedHypers | MaximizeLikelihood


def gp_fit(
    observations: list[Observation],
    hyper_mode: HyperMode = MaximizeLikelihood(),
    rng: np.random.Generator | None = None,
    warm_start: GaussianProcess | None = None,
) -> GaussianProcess:
    """Fit the GP surrogate to the non-failed observations."""
    usable = [o for o in observations if not o.failed]
    if not usable:
        raise EmptyModelError("no successful observations to fit")
    X = np.vstack([o.x for o in usable])
    y = np.array([o.value for o in usable], dtype=float)

    if isinstance(hyper_mode, FixedHypers):
        model = GaussianProcess(
            lengthscales=hyper_mode.lengthscales,
            signal_variance=hyper_mode.signal_variance,
            noise_variance=hyper_mode.noise_variance,
            prior_mean=hyper_mode.prior_mean,
            optimize=False,
        )
        return model.fit(X, y)

    if warm_start is not None and hasattr(warm_start, "lengthscales_"):
        ell0 = warm_start.lengthscales_
        sf0 = warm_start.signal_variance_
        sn0 = warm_start.noise_variance_
    else:
        ell0 = hyper_mode.initial_lengthscale
        sf0 = max(float(np.var(y)), 1.0)
        sn0 = hyper_mode.noise_floor
    model = GaussianProcess(
        lengthscales=ell0, signal_variance=sf0,
        noise_variance=max(sn0, hyper_mode.noise_floor),
        prior_mean=hyper_mode.prior_mean,
        optimize=len(y) >= 2, n_restarts=hyper_mode.n_restarts,
    )
    return model.fit(X, y, rng=rng)


def gp_posterior(model: GaussianProcess, x) -> tuple[float, float]:
    """Posterior mean and variance at one point of the unit cube."""
    x = as_sample_matrix(x, d=model.X_.shape[1])
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise RangeError("query point outside the unit cube")
    mean, var = model.predict(x, return_var=True)
    return float(mean[0]), float(var[0])


def ei_from_moments(mu, sigma, best: float) -> np.ndarray:
    """EI closed form on raw posterior moments:
    (mu - best) Phi(z) + sigma phi(z) with z = (mu - best)/sigma, taking the
    exact limit max(mu - best, 0) where sigma vanishes."""
    mu = np.asarray(mu, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    improvement = mu - float(best)
    ei = np.maximum(improvement, 0.0)
    pos = sigma > 1e-12
    if np.any(pos):
        z = improvement[pos] / sigma[pos]
        ei = ei.copy()
        ei[pos] = improvement[pos] * _norm_cdf(z) + sigma[pos] * _norm_pdf(z)
    return np.maximum(ei, 0.0)


def expected_improvement(model: GaussianProcess, X, best: float) -> np.ndarray:
    """EI of the model's posterior at the rows of ``X``."""
    X = as_sample_matrix(X, d=model.X_.shape[1])
    mu, var = model.predict(X, return_var=True)
    return ei_from_moments(mu, np.sqrt(var), best)


def propose_next(
    model: GaussianProcess,
    space: ParamSpace,
    rng: np.random.Generator,
    best: float | None = None,
    n_starts: int = 256,
    refine_levels: int = 7,
) -> np.ndarray:
    """Multi-start EI maximization: uniform starts, then coordinate-wise
    refinement of the incumbent with halving steps.  Deterministic under a
    seeded generator, and the result's EI is never below any start's."""
    if best is None:
        best = float(np.max(model.y_))
    d = space.d
    starts = rng.random((n_starts, d))
    ei = expected_improvement(model, starts, best)
    x = starts[int(np.argmax(ei))].copy()
    best_ei = float(np.max(ei))

    step = 0.25
    for _ in range(refine_levels):
        for _ in range(2):  # passes per level
            cands = np.repeat(x[None, :], 2 * d, axis=0)
            for j in range(d):
                cands[2 * j, j] = min(1.0, x[j] + step)
                cands[2 * j + 1, j] = max(0.0, x[j] - step)
            vals = expected_improvement(model, cands, best)
            k = int(np.argmax(vals))
            if vals[k] > best_ei:
                best_ei = float(vals[k])
                x = cands[k].copy()
        step *= 0.5
    return x


# ---------------------------------------------------------------------------
# Campaign
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CampaignConfig:
    budget: int = 30
    n_random: int = 4
    seed_points: tuple = ()
    acquisition: str = "EI"
    rng_seed: int = 0
    failure_policy: str = "omit"           # "omit" | "penalty"
    failure_penalty: float = 0.0
    hyper_mode: HyperMode = field(default_factory=MaximizeLikelihood)
    n_starts: int = 256

    def validate(self, space: ParamSpace) -> "CampaignConfig":
        if self.budget < self.n_random + len(self.seed_points):
            raise InvalidInputError("budget must cover seed points plus random exploration")
        if self.n_random < 0:
            raise InvalidInputError("n_random must be >= 0")
        if self.acquisition != "EI":
            raise InvalidInputError(f"unknown acquisition {self.acquisition!r}")
        if self.failure_policy not in ("omit", "penalty"):
            raise InvalidInputError(f"unknown failure policy {self.failure_policy!r}")
        for p in self.seed_points:
            if np.asarray(p, dtype=float).shape != (space.d,):
                raise InvalidInputError("seed point dimensionality mismatch")
        return self


@dataclass(frozen=True)
class CampaignRecord:
    iteration: int
    kind: str                      # "seed" | "random" | "bo"
    x: np.ndarray
    value: float | None
    failed: bool
    best_so_far: float | None
    hyperparams: dict | None


@dataclass
class CampaignLog:
    records: list[CampaignRecord] = field(default_factory=list)
    wall_times: list[float] = field(default_factory=list)

    @property
    def best_so_far(self) -> float | None:
        return self.records[-1].best_so_far if self.records else None

    def best_record(self) -> CampaignRecord | None:
        best = None
        for r in self.records:
            if not r.failed and (best is None or r.value > best.value):
                best = r
        return best

    def observations(self) -> list[Observation]:
        return [Observation(x=r.x, value=r.value, failed=r.failed) for r in self.records]


def run_campaign(
    evaluator,
    cfg: CampaignConfig,
    space: ParamSpace,
    on_record=None,
    stop=None,
    history: list[CampaignRecord] | None = None,
) -> CampaignLog:
    """Run (or resume) one optimization campaign.

    ``evaluator`` maps a unit-cube vector to ``(value, failed)``; exceptions
    are recorded as failures and the campaign continues.  ``on_record`` is
    called after every iteration (for streaming persistence), ``stop`` is an
    optional callable polled between evaluations, and ``history`` seeds the
    log with previously completed iterations when resuming.
    """
    cfg.validate(space)
    log = CampaignLog()
    fit_set: list[Observation] = []
    best: float | None = None
    model: GaussianProcess | None = None
    next_opt_size = 0  # hyperparameters re-optimized on a geometric schedule
    n_seed = len(cfg.seed_points)

    def ingest(record: CampaignRecord):
        nonlocal best
        if not record.failed and (best is None or record.value > best):
            best = record.value
        if record.failed:
            if cfg.failure_policy == "penalty":
                fit_set.append(Observation(x=record.x, value=cfg.failure_penalty))
        else:
            fit_set.append(Observation(x=record.x, value=record.value))

    start_iter = 0
    if history:
        for r in history:
            ingest(r)
            log.records.append(r)
            log.wall_times.append(0.0)
        start_iter = history[-1].iteration + 1
    # A fresh run consumes default_rng(rng_seed) exactly; a resumed run
    # continues on a sub-stream keyed by the resume point.
    rng = (np.random.default_rng(cfg.rng_seed) if start_iter == 0
           else np.random.default_rng((cfg.rng_seed, start_iter)))

    for it in range(start_iter, cfg.budget):
        if stop is not None and stop():
            break
        hyper_doc = None
        if it < n_seed:
            x = np.asarray(cfg.seed_points[it], dtype=float)
            kind = "seed"
        elif it < n_seed + cfg.n_random or not fit_set:
            x = rng.random(space.d)
            kind = "random"
        else:
            full_opt = (
                isinstance(cfg.hyper_mode, MaximizeLikelihood)
                and (model is None or len(fit_set) >= next_opt_size)
            )
            if full_opt or model is None or isinstance(cfg.hyper_mode, FixedHypers):
                model = gp_fit(fit_set, cfg.hyper_mode, rng=rng, warm_start=model)
                if full_opt:
                    next_opt_size = len(fit_set) + max(1, len(fit_set) // 5)
            else:
                # Data changed but the hyperparameter schedule says reuse:
                # refactorize with the current hyperparameters.
                model = gp_fit(
                    fit_set,
                    FixedHypers(
                        lengthscales=model.lengthscales_,
                        signal_variance=model.signal_variance_,
                        noise_variance=model.noise_variance_,
                        prior_mean=cfg.hyper_mode.prior_mean,
                    ),
                )
            incumbent = best if best is not None else float(np.max(model.y_))
            x = propose_next(model, space, rng, best=incumbent, n_starts=cfg.n_starts)
            kind = "bo"
            hyper_doc = {
                "lengthscales": [float(v) for v in model.lengthscales_],
                "signal_variance": float(model.signal_variance_),
                "noise_variance": float(model.noise_variance_),
                "prior_mean": float(model.prior_mean_),
            }

        tic = time.perf_counter()
        try:
            value, failed = evaluator(x)
        except Exception:
            value, failed = None, True
        wall = time.perf_counter() - tic
        if failed or value is None or not np.isfinite(value):
            value, failed = None, True
        else:
            value = float(value)

        record = CampaignRecord(
            iteration=it, kind=kind, x=np.asarray(x, dtype=float),
            value=value, failed=failed, best_so_far=None, hyperparams=hyper_doc,
        )
        ingest(record)
        record = replace(record, best_so_far=best)
        log.records.append(record)
        log.wall_times.append(wall)
        if on_record is not None:
            on_record(record)
    return log
