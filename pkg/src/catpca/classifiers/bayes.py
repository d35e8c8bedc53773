from __future__ import annotations

import numpy as np

from .base import BinaryClassifier

LOG_2PI = np.log(2.0 * np.pi)


class GaussianNB(BinaryClassifier):
    """Gaussian naive Bayes; the score is the log posterior odds of class 1.

    Every per-class variance gets ``var_smoothing * max feature variance``
    added, so constant features stay finite.
    """

    decision_threshold = 0.0

    def __init__(self, var_smoothing=1e-9):
        self.var_smoothing = var_smoothing

    def _fit(self, X, y, w):
        S = w.sum()
        grand = (w @ X) / S
        eps = self.var_smoothing * float(np.max((w @ (X - grand) ** 2) / S, initial=0.0))
        self.theta_ = np.empty((2, X.shape[1]))
        self.var_ = np.empty((2, X.shape[1]))
        self.log_prior_ = np.empty(2)
        for c in (0, 1):
            wc = np.where(y == c, w, 0.0)
            sc = wc.sum()
            mu = (wc @ X) / sc
            self.theta_[c] = mu
            self.var_[c] = (wc @ (X - mu) ** 2) / sc + eps
            self.log_prior_[c] = np.log(sc / S)
        if np.any(self.var_ <= 0):
            raise ValueError("all features constant; Gaussian NB is undefined")

    def joint_log_likelihood(self, X) -> np.ndarray:
        X = self._check_width(X)
        out = np.empty((X.shape[0], 2))
        for c in (0, 1):
            ll = -0.5 * (LOG_2PI + np.log(self.var_[c]) + (X - self.theta_[c]) ** 2 / self.var_[c])
            out[:, c] = self.log_prior_[c] + ll.sum(axis=1)
        return out

    def _scores(self, X):
        jll = self.joint_log_likelihood(X)
        return jll[:, 1] - jll[:, 0]
