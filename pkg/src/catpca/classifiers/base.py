from __future__ import annotations

import numpy as np


def check_fit_input(X, y, sample_weight=None):
    """Validate training data; returns float X, {0,1} y and float weights."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("X must be a 2-D matrix")
    y = np.asarray(y)
    if y.ndim != 1 or y.shape[0] != X.shape[0]:
        raise ValueError(f"y must have one label per row of X ({X.shape[0]}), got {y.shape}")
    if X.shape[0] < 2:
        raise ValueError("need at least two training rows")
    if np.isnan(X).any():
        raise ValueError("NaN in X")
    if not np.isin(y, (0, 1)).all():
        raise ValueError("labels must be 0 (C1) or 1 (C2)")
    y = y.astype(np.int8)
    if sample_weight is None:
        w = np.ones(X.shape[0])
    else:
        w = np.asarray(sample_weight, dtype=np.float64)
        if w.shape != y.shape or (w < 0).any():
            raise ValueError("sample_weight must be non-negative, one per row")
    if not (w[y == 0].sum() > 0 and w[y == 1].sum() > 0):
        raise ValueError("both classes must be present in the training data")
    return X, y, w


class BinaryClassifier:
    """Shared predict/score plumbing.

    Subclasses implement ``_fit`` and ``_scores``; a higher score means more
    attack-like (class 1) and ``predict`` is ``score >= decision_threshold``.
    """

    decision_threshold = 0.0
    n_features_: int

    def fit(self, X, y, sample_weight=None):
        X, y, w = check_fit_input(X, y, sample_weight)
        self.n_features_ = X.shape[1]
        self._fit(X, y, w)
        return self

    def _check_width(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features_:
            raise ValueError(
                f"model was trained on {self.n_features_} features, got shape {X.shape}"
            )
        return X

    def decision_function(self, X) -> np.ndarray:
        return self._scores(self._check_width(X))

    def predict(self, X) -> np.ndarray:
        return (self.decision_function(X) >= self.decision_threshold).astype(np.int8)


class FeatureScaler:
    """Weighted mean/std scaling; constant columns are left unscaled."""

    def __init__(self, X, w):
        s = w.sum()
        self.mean = (w @ X) / s
        var = (w @ (X - self.mean) ** 2) / s
        self.scale = np.where(var > 0, np.sqrt(var), 1.0)

    def __call__(self, X):
        return (X - self.mean) / self.scale
