"""L2-regularised linear classifiers trained by deterministic full-batch descent.

Both models minimise, over coefficients ``w`` and intercept ``b``::

    (1/S) * sum_i s_i * loss(y_i, x_i.w + b)  +  ||w||^2 / (2 C S)

which is the usual ``0.5||w||^2 + C * sum loss`` objective divided by ``C S``
(``s_i`` sample weights, ``S`` their sum). Features are standardised
internally before descent; the intercept is not penalised.
"""
from __future__ import annotations

import numpy as np
from scipy.special import expit

from .base import BinaryClassifier, FeatureScaler


def logistic_loss_grad(params, X, y, w, C):
    """Objective value and gradient; ``params = [coef..., intercept]``."""
    coef, b = params[:-1], params[-1]
    S = w.sum()
    sign = 2.0 * y - 1.0
    margin = sign * (X @ coef + b)
    loss = (w @ np.logaddexp(0.0, -margin)) / S + (coef @ coef) / (2.0 * C * S)
    gz = -sign * expit(-margin) * w / S
    grad = np.empty_like(params)
    grad[:-1] = X.T @ gz + coef / (C * S)
    grad[-1] = gz.sum()
    return loss, grad


def hinge_loss_subgrad(params, X, y, w, C):
    coef, b = params[:-1], params[-1]
    S = w.sum()
    sign = 2.0 * y - 1.0
    margin = sign * (X @ coef + b)
    active = margin < 1.0
    loss = (w @ np.where(active, 1.0 - margin, 0.0)) / S + (coef @ coef) / (2.0 * C * S)
    gz = np.where(active, -sign * w, 0.0) / S
    grad = np.empty_like(params)
    grad[:-1] = X.T @ gz + coef / (C * S)
    grad[-1] = gz.sum()
    return loss, grad


class _Linear(BinaryClassifier):
    decision_threshold = 0.0

    def __init__(self, C=1.0, max_iter=1000, tol=1e-6):
        if C <= 0:
            raise ValueError("C must be positive")
        self.C = C
        self.max_iter = max_iter
        self.tol = tol

    def _fit(self, X, y, w):
        self.scaler_ = FeatureScaler(X, w)
        Z = self.scaler_(X)
        params = self._solve(Z, y, w)
        self.coef_ = params[:-1]
        self.intercept_ = params[-1]

    def _scores(self, X):
        return self.scaler_(X) @ self.coef_ + self.intercept_


class LogisticRegression(_Linear):
    """Nesterov-accelerated gradient descent with adaptive restart.

    Step size ``1/L`` from the exact Lipschitz bound of the gradient; stops
    when the objective changes by less than ``tol`` (relative) or after
    ``max_iter`` iterations.
    """

    def _solve(self, Z, y, w):
        n, d = Z.shape
        S = w.sum()
        Za = np.hstack([Z, np.ones((n, 1))])
        gram = (Za * (w / S)[:, None]).T @ Za
        lip = 0.25 * np.linalg.eigvalsh(gram)[-1] + 1.0 / (self.C * S)
        theta = np.zeros(d + 1)
        f_theta, _ = logistic_loss_grad(theta, Z, y, w, self.C)
        v, t = theta.copy(), 1.0
        self.n_iter_ = 0
        for it in range(1, self.max_iter + 1):
            _, g = logistic_loss_grad(v, Z, y, w, self.C)
            new = v - g / lip
            f_new, _ = logistic_loss_grad(new, Z, y, w, self.C)
            self.n_iter_ = it
            if f_new > f_theta:
                # restart momentum from the last accepted point
                v, t = theta.copy(), 1.0
                continue
            t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
            v = new + ((t - 1.0) / t_next) * (new - theta)
            done = abs(f_theta - f_new) <= self.tol * max(1.0, abs(f_new))
            theta, f_theta, t = new, f_new, t_next
            if done:
                break
        self.loss_ = f_theta
        return theta


class LinearSVM(_Linear):
    """Hinge loss minimised by full-batch subgradient descent.

    Step ``eta0 / sqrt(t)``; the iterate with the lowest objective is kept.
    Stops when the best objective improved by less than ``tol`` (relative)
    over the last ``patience`` iterations, or after ``max_iter``.
    """

    patience = 50

    def __init__(self, C=1.0, max_iter=1000, tol=1e-6, eta0=10.0):
        super().__init__(C, max_iter, tol)
        self.eta0 = eta0

    def _solve(self, Z, y, w):
        theta = np.zeros(Z.shape[1] + 1)
        best, f_best = theta.copy(), np.inf
        history = []
        self.n_iter_ = 0
        for it in range(1, self.max_iter + 1):
            f, g = hinge_loss_subgrad(theta, Z, y, w, self.C)
            self.n_iter_ = it
            if f < f_best:
                best, f_best = theta.copy(), f
            history.append(f_best)
            if not g.any():
                break
            if it > self.patience:
                old = history[-1 - self.patience]
                if old - f_best <= self.tol * max(1.0, abs(f_best)):
                    break
            theta = theta - (self.eta0 / np.sqrt(it)) * g
        self.loss_ = f_best
        return best
