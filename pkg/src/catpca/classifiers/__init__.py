"""Reference binary classifiers.

All models share ``fit(X, y, sample_weight=None)``, ``decision_function``
(higher = more attack-like) and ``predict``. Training is single-threaded and
seeded, so identical inputs give identical models.
"""
from __future__ import annotations

import numpy as np

from .base import BinaryClassifier
from .bayes import GaussianNB
from .ensemble import AdaBoost, RandomForest
from .linear import LinearSVM, LogisticRegression, hinge_loss_subgrad, logistic_loss_grad
from .tree import DecisionTree

KINDS = (
    "logistic_regression", "linear_svm", "decision_tree",
    "adaboost_stumps", "adaboost_depth5", "random_forest", "gaussian_nb",
)
# short labels used in reports and leaderboards
LABELS = {
    "logistic_regression": "LR",
    "linear_svm": "SVM3",
    "decision_tree": "DT",
    "adaboost_stumps": "ADA1",
    "adaboost_depth5": "ADA2",
    "random_forest": "Forest",
    "gaussian_nb": "GNB",
}


def _defaults(kind):
    return {
        "logistic_regression": dict(C=1.0, max_iter=1000, tol=1e-6),
        "linear_svm": dict(C=1.0, max_iter=1000, tol=1e-6, eta0=10.0),
        "decision_tree": dict(max_depth=5, max_features=8),
        "adaboost_stumps": dict(n_estimators=50, max_depth=1),
        "adaboost_depth5": dict(n_estimators=10, max_depth=5),
        "random_forest": dict(n_estimators=10, max_depth=5, max_features=5, bootstrap=True),
        "gaussian_nb": dict(var_smoothing=1e-9),
    }[kind]


def make(kind: str, seed: int = 0, **config) -> BinaryClassifier:
    """Unfitted classifier of ``kind`` with the benchmark defaults."""
    if kind not in KINDS:
        raise ValueError(f"unknown classifier {kind!r}; choose from {', '.join(KINDS)}")
    params = _defaults(kind)
    unknown = set(config) - set(params)
    if unknown:
        raise ValueError(f"{kind}: unexpected option(s) {sorted(unknown)}")
    params.update(config)
    if kind == "logistic_regression":
        return LogisticRegression(**params)
    if kind == "linear_svm":
        return LinearSVM(**params)
    if kind == "decision_tree":
        return DecisionTree(seed=seed, **params)
    if kind.startswith("adaboost"):
        return AdaBoost(seed=seed, **params)
    if kind == "random_forest":
        return RandomForest(seed=seed, **params)
    return GaussianNB(**params)


def train(kind: str, X, y, seed: int = 0, sample_weight=None, **config) -> BinaryClassifier:
    return make(kind, seed, **config).fit(X, y, sample_weight)


def predict_scores(model: BinaryClassifier, X) -> np.ndarray:
    return model.decision_function(X)


__all__ = [
    "KINDS", "LABELS", "AdaBoost", "BinaryClassifier", "DecisionTree", "GaussianNB",
    "LinearSVM", "LogisticRegression", "RandomForest", "hinge_loss_subgrad",
    "logistic_loss_grad", "make", "predict_scores", "train",
]
