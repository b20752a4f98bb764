import math

import numpy as np
import pytest

from regolith.bayes_opt import (
    FixedHypers,
    MaximizeLikelihood,
    Observation,
    expected_improvement,
    gp_fit,
    gp_posterior,
)
from regolith.errors import EmptyModelError, InvalidInputError, RangeError
from regolith.gp import GaussianProcess


def spaced_dataset(rng, min_gap=0.03):
    """Random dataset with a minimum pairwise separation so zero-noise
    interpolation is numerically well posed."""
    while True:
        d = int(rng.integers(1, 6))
        n = int(rng.integers(2, 21))
        X = rng.random((n, d))
        diff = X[:, None, :] - X[None, :, :]
        dist = np.sqrt(np.sum(diff * diff, axis=-1))
        np.fill_diagonal(dist, np.inf)
        if dist.min() >= min_gap:
            return X, rng.normal(size=n)


# -- posterior correctness ------------------------------------------------------

def test_single_observation_interpolated_exactly():
    m = GaussianProcess(noise_variance=0.0).fit([[0.3, 0.7]], [1.25])
    assert m.predict([[0.3, 0.7]])[0] == pytest.approx(1.25, abs=1e-12)


def test_two_point_posterior_matches_direct_formula():
    # oracle: mean(x*) = k*^T (K + s^2 I)^{-1} y with unit hyperparameters
    X = np.array([[0.0], [1.0]])
    y = np.array([0.0, 1.0])
    m = GaussianProcess(lengthscales=1.0, signal_variance=1.0,
                        noise_variance=0.0, prior_mean=0.0).fit(X, y)
    K = np.exp(-0.5 * (X - X.T) ** 2)
    ks = np.exp(-0.5 * (0.5 - X.ravel()) ** 2)
    oracle = ks @ np.linalg.solve(K, y)
    assert m.predict([[0.5]])[0] == pytest.approx(oracle, abs=1e-10)


def test_duplicate_inputs_take_jitter_path():
    X = [[0.5, 0.5], [0.5, 0.5], [0.2, 0.8]]
    m = GaussianProcess(noise_variance=0.0).fit(X, [1.0, 1.0, 0.0])
    assert m.jitter_ > 0.0
    assert np.all(np.isfinite(m.predict(X)))


def test_exact_interpolation_on_50_random_datasets(rng):
    worst = 0.0
    for _ in range(50):
        X, y = spaced_dataset(rng)
        m = GaussianProcess(lengthscales=0.3, noise_variance=0.0).fit(X, y)
        worst = max(worst, float(np.max(np.abs(m.predict(X) - y))))
    assert worst < 1e-6


def test_posterior_at_training_point_is_observation_with_zero_variance():
    X, y = [[0.1], [0.9]], [2.0, -1.0]
    m = GaussianProcess(lengthscales=0.5, noise_variance=0.0).fit(X, y)
    mean, var = m.predict(X, return_var=True)
    assert np.allclose(mean, y, atol=1e-9)
    assert np.all(var < 1e-9)


def test_far_point_reverts_to_prior():
    m = GaussianProcess(lengthscales=0.1, signal_variance=2.5,
                        noise_variance=0.0, prior_mean=0.7).fit(
        [[0.4, 0.4]], [3.0])
    mean, var = m.predict([[0.4 + 2.0, 0.4]], return_var=True)  # 20 lengthscales away
    assert abs(mean[0] - 0.7) < 1e-6
    assert abs(var[0] - 2.5) < 1e-6


def test_posterior_variance_bounded_by_signal_variance(rng):
    X, y = spaced_dataset(rng)
    m = GaussianProcess(lengthscales=0.3, signal_variance=1.7,
                        noise_variance=1e-6).fit(X, y)
    Q = rng.random((500, X.shape[1]))
    _, var = m.predict(Q, return_var=True)
    assert np.all(var >= 0.0)
    assert np.all(var <= 1.7 + 1e-9)


def test_auto_prior_mean_uses_target_mean():
    m = GaussianProcess(prior_mean="auto", lengthscales=0.1).fit(
        [[0.0], [0.2]], [2.0, 4.0])
    assert m.prior_mean_ == pytest.approx(3.0)
    assert m.predict([[50.0]])[0] == pytest.approx(3.0, abs=1e-9)


def test_likelihood_optimization_never_decreases(rng):
    for trial in range(20):
        X = rng.random((12, 2))
        y = np.sin(3.0 * X[:, 0]) + rng.normal(0.0, 0.1, 12)
        base = GaussianProcess(lengthscales=0.3, noise_variance=1e-4).fit(X, y)
        tuned = GaussianProcess(lengthscales=0.3, noise_variance=1e-4,
                                optimize=True, n_restarts=1).fit(
            X, y, rng=np.random.default_rng(trial))
        assert tuned.log_marginal_likelihood() >= base.log_marginal_likelihood() - 1e-9


def test_fit_validates_inputs():
    with pytest.raises(InvalidInputError):
        GaussianProcess().fit([[0.0, np.nan]], [1.0])
    with pytest.raises(InvalidInputError):
        GaussianProcess().fit([[0.0]], [np.inf])
    with pytest.raises(InvalidInputError):
        GaussianProcess(lengthscales=-1.0).fit([[0.0]], [1.0])


def test_get_set_params_roundtrip():
    m = GaussianProcess(lengthscales=0.2, noise_variance=1e-3)
    params = m.get_params()
    other = GaussianProcess().set_params(**params)
    assert other.get_params() == params
    with pytest.raises(InvalidInputError):
        m.set_params(bogus=1)


# -- spec wrappers ----------------------------------------------------------------

def test_gp_fit_filters_failures_and_requires_success():
    obs = [
        Observation(x=[0.2, 0.2], value=1.0),
        Observation(x=[0.8, 0.8], value=None, failed=True),
    ]
    m = gp_fit(obs, FixedHypers(noise_variance=0.0))
    assert m.X_.shape == (1, 2)
    with pytest.raises(EmptyModelError):
        gp_fit([Observation(x=[0.1, 0.1], value=None, failed=True)])


def test_gp_posterior_validates_cube():
    m = gp_fit([Observation(x=[0.5], value=2.0)], FixedHypers(noise_variance=0.0))
    mean, var = gp_posterior(m, [0.5])
    assert mean == pytest.approx(2.0, abs=1e-9)
    assert var == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(RangeError):
        gp_posterior(m, [1.5])


def test_gp_fit_maximize_likelihood_smoke(rng):
    obs = [Observation(x=rng.random(3), value=float(v))
           for v in rng.normal(size=10)]
    m = gp_fit(obs, MaximizeLikelihood(n_restarts=1), rng=rng)
    assert m.lengthscales_.shape == (3,)
    assert m.noise_variance_ >= 0.0


# -- expected improvement -----------------------------------------------------------

def fitted_model():
    return GaussianProcess(lengthscales=0.4, noise_variance=1e-8).fit(
        [[0.2], [0.8]], [0.3, -0.1])


def test_ei_zero_variance_is_hinge():
    m = fitted_model()
    # training points have (numerically) zero variance
    assert expected_improvement(m, [[0.2]], best=0.5)[0] == pytest.approx(0.0, abs=1e-9)
    assert expected_improvement(m, [[0.2]], best=0.1)[0] == pytest.approx(0.2, abs=1e-6)


def test_ei_at_mu_equals_best_is_sigma_over_sqrt_2pi():
    # closed form reduces to sigma * phi(0) = sigma / sqrt(2 pi)
    m = GaussianProcess(lengthscales=0.2, signal_variance=1.0,
                        noise_variance=0.0, prior_mean=0.0).fit([[0.0]], [0.0])
    far = [[0.9]]  # essentially prior: mu ~ 0, sigma ~ 1
    mu, var = m.predict(far, return_var=True)
    ei = expected_improvement(m, far, best=float(mu[0]))
    assert ei[0] == pytest.approx(math.sqrt(var[0]) * 0.3989422804014327, rel=1e-9)


def test_ei_dominant_improvement_limit():
    m = fitted_model()
    mu, var = m.predict([[0.5]], return_var=True)
    sigma = math.sqrt(var[0])
    best = mu[0] - 10.0 * sigma
    ei = expected_improvement(m, [[0.5]], best=best)
    assert abs(ei[0] - (mu[0] - best)) / (mu[0] - best) < 1e-3


def test_ei_nonnegative_everywhere(rng):
    m = fitted_model()
    X = rng.random((2000, 1))
    assert np.all(expected_improvement(m, X, best=0.4) >= 0.0)


def test_ei_continuous_across_sigma_zero(rng):
    # near-zero-variance points agree with the hinge limit
    m = fitted_model()
    for x, best in [([0.2], 0.0), ([0.8], 0.0), ([0.2], 0.4)]:
        mu = float(m.predict([x])[0])
        ei = float(expected_improvement(m, [x], best=best)[0])
        assert abs(ei - max(mu - best, 0.0)) < 1e-6
