"""AdaBoost (SAMME) and random forest built on :class:`DecisionTree`."""
from __future__ import annotations

import numpy as np

from .base import BinaryClassifier
from .tree import DecisionTree


class AdaBoost(BinaryClassifier):
    """Discrete two-class AdaBoost with SAMME estimator weights.

    Boosting stops early when a round fits the weighted data perfectly or
    when its weighted error reaches 0.5. The score is the
    ``alpha``-weighted vote in [-1, 1].
    """

    decision_threshold = 0.0

    def __init__(self, n_estimators=50, max_depth=1, seed=0):
        self.n_estimators = n_estimators
        self.max_depth = max_depth
        self.seed = seed

    def _fit(self, X, y, w):
        w = w / w.sum()
        self.estimators_, self.estimator_weights_, self.estimator_errors_ = [], [], []
        for m in range(self.n_estimators):
            tree = DecisionTree(max_depth=self.max_depth, seed=self.seed + m)
            tree.n_features_ = X.shape[1]
            tree._fit(X, y, w)
            wrong = tree.predict(X) != y
            err = float(w[wrong].sum() / w.sum())
            if err <= 0.0:
                self.estimators_.append(tree)
                self.estimator_weights_.append(1.0)
                self.estimator_errors_.append(0.0)
                break
            if err >= 0.5:
                if not self.estimators_:
                    raise ValueError("first weak learner is no better than chance")
                break
            alpha = np.log((1.0 - err) / err)
            self.estimators_.append(tree)
            self.estimator_weights_.append(alpha)
            self.estimator_errors_.append(err)
            w = w * np.exp(alpha * wrong)
            w /= w.sum()
        self.estimator_weights_ = np.asarray(self.estimator_weights_)
        self.estimator_errors_ = np.asarray(self.estimator_errors_)

    def staged_scores(self, X):
        """Yield the ensemble score after each boosting round."""
        X = self._check_width(X)
        acc = np.zeros(X.shape[0])
        total = 0.0
        for tree, alpha in zip(self.estimators_, self.estimator_weights_):
            acc += alpha * (2.0 * tree.predict(X) - 1.0)
            total += alpha
            yield acc / total

    def _scores(self, X):
        *_, last = self.staged_scores(X)
        return last


class RandomForest(BinaryClassifier):
    """Bagged Gini trees; the score is the mean leaf probability of class 1.

    Tree ``i`` uses feature-draw seed ``seed + i``. Bootstrap replicates are
    drawn as multinomial row counts (``n`` draws, probabilities proportional
    to the sample weights) from a separate generator seeded with
    ``(seed, i)``.
    """

    decision_threshold = 0.5

    def __init__(self, n_estimators=10, max_depth=5, max_features=5, bootstrap=True, seed=0):
        self.n_estimators = n_estimators
        self.max_depth = max_depth
        self.max_features = max_features
        self.bootstrap = bootstrap
        self.seed = seed

    def _fit(self, X, y, w):
        self.estimators_ = []
        n_draws = int(round(w.sum()))
        for i in range(self.n_estimators):
            wi = w
            if self.bootstrap:
                rng = np.random.default_rng([self.seed, i])
                wi = rng.multinomial(n_draws, w / w.sum()).astype(np.float64)
            tree = DecisionTree(self.max_depth, self.max_features, seed=self.seed + i)
            tree.n_features_ = X.shape[1]
            tree._fit(X, y, wi)
            self.estimators_.append(tree)

    def _scores(self, X):
        return np.mean([t._scores(X) for t in self.estimators_], axis=0)
