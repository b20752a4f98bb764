"""Gaussian-process regression over the unit cube.

A small, exact GP with a squared-exponential ARD kernel, written in the
scikit-learn estimator style (``fit`` / ``predict`` / ``get_params``) so it
composes with the wider ecosystem.  Supports fixed hyperparameters or
marginal-likelihood maximization with analytic gradients; the optimizer
always evaluates the starting hyperparameters too, so optimization can never
return a model worse than the initial one.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular
from scipy.optimize import minimize

from .errors import ConditioningError, InvalidInputError

_JITTERS = (0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4)
_LOG_BOUNDS = {
    "lengthscale": (math.log(1e-2), math.log(1e2)),
    "signal_variance": (math.log(1e-8), math.log(1e6)),
    "noise_variance": (math.log(1e-12), math.log(1e2)),
}


def as_sample_matrix(X, d: int | None = None) -> np.ndarray:
    """Validate and coerce inputs to a finite (n, d) float matrix."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise InvalidInputError(f"expected a 2-d sample matrix, got ndim={X.ndim}")
    if not np.all(np.isfinite(X)):
        raise InvalidInputError("sample matrix contains non-finite values")
    if d is not None and X.shape[1] != d:
        raise InvalidInputError(f"expected {d} features, got {X.shape[1]}")
    return X


def as_target_vector(y, n: int) -> np.ndarray:
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.shape != (n,):
        raise InvalidInputError(f"expected {n} targets, got shape {y.shape}")
    if not np.all(np.isfinite(y)):
        raise InvalidInputError("targets contain non-finite values")
    return y


def _sqdist(XA: np.ndarray, XB: np.ndarray, lengthscales: np.ndarray) -> np.ndarray:
    A = XA / lengthscales
    B = XB / lengthscales
    aa = np.sum(A * A, axis=1)[:, None]
    bb = np.sum(B * B, axis=1)[None, :]
    sq = aa + bb - 2.0 * A @ B.T
    return np.maximum(sq, 0.0)


class GaussianProcess:
    """Exact GP regression with a squared-exponential ARD kernel.

    Parameters
    ----------
    lengthscales : float or array, per-dimension kernel lengthscales.
    signal_variance : prior variance of the latent function.
    noise_variance : observation noise variance (0 allowed; jitter handles
        conditioning).
    prior_mean : constant prior mean, or "auto" to use the target mean.
    optimize : if True, ``fit`` maximizes the log marginal likelihood over
        log-hyperparameters with L-BFGS-B restarts.
    n_restarts : extra optimizer starts beyond the initial hyperparameters.
    """

    def __init__(self, lengthscales=0.3, signal_variance=1.0, noise_variance=1e-6,
                 prior_mean=0.0, optimize=False, n_restarts=1):
        self.lengthscales = lengthscales
        self.signal_variance = signal_variance
        self.noise_variance = noise_variance
        self.prior_mean = prior_mean
        self.optimize = optimize
        self.n_restarts = n_restarts

    # -- sklearn-style parameter plumbing ---------------------------------

    _PARAM_NAMES = ("lengthscales", "signal_variance", "noise_variance",
                    "prior_mean", "optimize", "n_restarts")

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._PARAM_NAMES}

    def set_params(self, **params) -> "GaussianProcess":
        for name, value in params.items():
            if name not in self._PARAM_NAMES:
                raise InvalidInputError(f"unknown parameter {name!r}")
            setattr(self, name, value)
        return self

    # -- fitting -----------------------------------------------------------

    def fit(self, X, y, rng: np.random.Generator | None = None) -> "GaussianProcess":
        X = as_sample_matrix(X)
        n, d = X.shape
        y = as_target_vector(y, n)
        if n < 1:
            raise InvalidInputError("need at least one observation")

        ell = np.asarray(self.lengthscales, dtype=float)
        if ell.ndim == 0:
            ell = np.full(d, float(ell))
        if ell.shape != (d,) or np.any(ell <= 0):
            raise InvalidInputError("lengthscales must be positive, one per dimension")
        sf2 = float(self.signal_variance)
        sn2 = float(self.noise_variance)
        if sf2 <= 0 or sn2 < 0:
            raise InvalidInputError("signal_variance must be > 0 and noise_variance >= 0")

        mean = float(np.mean(y)) if self.prior_mean == "auto" else float(self.prior_mean)

        self.X_ = X
        self.y_ = y
        self.prior_mean_ = mean
        if self.optimize:
            ell, sf2, sn2 = self._optimize_hypers(X, y - mean, ell, sf2, sn2, rng)
        self.lengthscales_ = ell
        self.signal_variance_ = sf2
        self.noise_variance_ = sn2
        self._factorize(X, y - mean, ell, sf2, sn2)
        return self

    def _factorize(self, X, resid, ell, sf2, sn2):
        K = sf2 * np.exp(-0.5 * _sqdist(X, X, ell))
        K[np.diag_indices_from(K)] += sn2
        n = K.shape[0]
        last_err = None
        for jitter in _JITTERS:
            Kj = K + jitter * np.eye(n) if jitter else K
            try:
                cho = cho_factor(Kj, lower=True)
            except np.linalg.LinAlgError as err:
                last_err = err
                continue
            alpha = cho_solve(cho, resid)
            # Two rounds of iterative refinement: zero-noise interpolation
            # then reproduces the targets to machine precision when the
            # kernel matrix is honestly positive definite.
            for _ in range(2):
                alpha += cho_solve(cho, resid - Kj @ alpha)
            self.jitter_ = jitter
            self._cho = cho
            self.alpha_ = alpha
            return
        raise ConditioningError(
            f"kernel matrix not positive definite after jitter escalation: {last_err}"
        )

    # -- prediction --------------------------------------------------------

    def predict(self, X, return_std: bool = False, return_var: bool = False):
        self._check_fitted()
        X = as_sample_matrix(X, d=self.X_.shape[1])
        Ks = self.signal_variance_ * np.exp(-0.5 * _sqdist(X, self.X_, self.lengthscales_))
        mean = self.prior_mean_ + Ks @ self.alpha_
        if not (return_std or return_var):
            return mean
        L = self._cho[0]
        v = solve_triangular(L, Ks.T, lower=True)
        var = self.signal_variance_ - np.sum(v * v, axis=0)
        var = np.maximum(var, 0.0)
        if return_var:
            return mean, var
        return mean, np.sqrt(var)

    def _check_fitted(self):
        if not hasattr(self, "alpha_"):
            raise InvalidInputError("model is not fitted")

    # -- marginal likelihood -----------------------------------------------

    def log_marginal_likelihood(self, lengthscales=None, signal_variance=None,
                                noise_variance=None) -> float:
        self._check_fitted()
        ell = self.lengthscales_ if lengthscales is None else np.asarray(lengthscales, float)
        sf2 = self.signal_variance_ if signal_variance is None else float(signal_variance)
        sn2 = self.noise_variance_ if noise_variance is None else float(noise_variance)
        resid = self.y_ - self.prior_mean_
        value, _ = _lml_and_grad(self.X_, resid, ell, sf2, sn2, need_grad=False)
        return value

    def _optimize_hypers(self, X, resid, ell0, sf2_0, sn2_0, rng):
        d = X.shape[1]
        lb = np.array([_LOG_BOUNDS["lengthscale"][0]] * d
                      + [_LOG_BOUNDS["signal_variance"][0], _LOG_BOUNDS["noise_variance"][0]])
        ub = np.array([_LOG_BOUNDS["lengthscale"][1]] * d
                      + [_LOG_BOUNDS["signal_variance"][1], _LOG_BOUNDS["noise_variance"][1]])
        theta0 = np.log(np.concatenate([ell0, [max(sf2_0, 1e-8), max(sn2_0, 1e-10)]]))
        theta0 = np.clip(theta0, lb, ub)

        def objective(theta):
            ell = np.exp(theta[:d])
            sf2 = math.exp(theta[d])
            sn2 = math.exp(theta[d + 1])
            try:
                value, grad = _lml_and_grad(X, resid, ell, sf2, sn2, need_grad=True)
            except ConditioningError:
                return 1e25, np.zeros_like(theta)
            return -value, -grad

        starts = [theta0]
        for k in range(max(0, int(self.n_restarts))):
            if rng is not None:
                starts.append(np.clip(theta0 + rng.normal(0.0, 0.7, size=theta0.size), lb, ub))
            else:
                delta = 0.5 * (1 + k)
                starts.append(np.clip(theta0 + delta * np.where(np.arange(theta0.size) % 2, 1, -1), lb, ub))

        best_theta = theta0
        best_value = -objective(theta0)[0]
        for s in starts:
            res = minimize(objective, s, jac=True, method="L-BFGS-B",
                           bounds=list(zip(lb, ub)), options={"maxiter": 50})
            if np.all(np.isfinite(res.x)):
                value = -res.fun if np.isfinite(res.fun) else -np.inf
                if value > best_value:
                    best_value = value
                    best_theta = res.x
        ell = np.exp(best_theta[:d])
        return ell, math.exp(best_theta[d]), math.exp(best_theta[d + 1])


def _lml_and_grad(X, resid, ell, sf2, sn2, need_grad: bool):
    n, d = X.shape
    Kse = sf2 * np.exp(-0.5 * _sqdist(X, X, ell))
    K = Kse.copy()
    K[np.diag_indices_from(K)] += sn2
    cho = None
    for jitter in _JITTERS:
        try:
            cho = cho_factor(K + jitter * np.eye(n), lower=True)
            break
        except np.linalg.LinAlgError:
            continue
    if cho is None:
        raise ConditioningError("kernel matrix not positive definite")
    alpha = cho_solve(cho, resid)
    value = (-0.5 * float(resid @ alpha)
             - float(np.sum(np.log(np.diag(cho[0]))))
             - 0.5 * n * math.log(2.0 * math.pi))
    if not need_grad:
        return value, None
    Kinv = cho_solve(cho, np.eye(n))
    W = np.outer(alpha, alpha) - Kinv
    grad = np.empty(d + 2)
    for j in range(d):
        diff = X[:, j][:, None] - X[:, j][None, :]
        dK = Kse * (diff * diff) / (ell[j] ** 2)
        grad[j] = 0.5 * float(np.sum(W * dK))
    grad[d] = 0.5 * float(np.sum(W * Kse))          # d/d log sf2
    grad[d + 1] = 0.5 * sn2 * float(np.trace(W))    # d/d log sn2
    return value, grad
