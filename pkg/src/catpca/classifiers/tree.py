"""Weighted CART decision tree with Gini impurity."""
from __future__ import annotations

import numpy as np

from .base import BinaryClassifier


def _best_split_on(x, y, w):
    """Best threshold on one feature: (weighted child impurity, threshold) or None.

    Impurity is the weight-summed Gini of the two children, ``W_l G_l + W_r G_r``.
    """
    order = np.argsort(x, kind="stable")
    xs = x[order]
    valid = xs[:-1] < xs[1:]
    if not valid.any():
        return None
    ws = w[order]
    cw = np.cumsum(ws)
    cp = np.cumsum(ws * y[order])
    W, P = cw[-1], cp[-1]
    wl, pl = cw[:-1], cp[:-1]
    wr, pr = W - wl, P - pl
    valid &= (wl > 0) & (wr > 0)
    if not valid.any():
        return None
    with np.errstate(divide="ignore", invalid="ignore"):
        imp = 2.0 * pl * (wl - pl) / wl + 2.0 * pr * (wr - pr) / wr
    imp = np.where(valid, imp, np.inf)
    i = int(np.argmin(imp))
    return imp[i], 0.5 * (xs[i] + xs[i + 1])


class DecisionTree(BinaryClassifier):
    """Depth-limited CART tree; leaves store the weighted fraction of class 1.

    Parameters
    ----------
    max_depth : int
        Maximum depth (a stump has depth 1).
    max_features : int or None
        Features drawn (without replacement, re-drawn at every node) as split
        candidates, capped at the number of features. Constant features do
        not count towards the cap, so a node keeps drawing until it has
        ``max_features`` usable candidates or runs out.
    seed : int
        Seed of the feature draws.
    """

    decision_threshold = 0.5

    def __init__(self, max_depth=5, max_features=None, min_samples_split=2, seed=0):
        self.max_depth = max_depth
        self.max_features = max_features
        self.min_samples_split = min_samples_split
        self.seed = seed

    def _fit(self, X, y, w):
        d = X.shape[1]
        self.max_features_ = d if self.max_features is None else max(1, min(int(self.max_features), d))
        self._rng = np.random.default_rng(self.seed)
        self.feature_, self.threshold_, self.left_, self.right_, self.value_ = [], [], [], [], []
        self._grow(X, y.astype(np.float64), w, np.arange(X.shape[0]), 0)
        self.feature_ = np.asarray(self.feature_, dtype=np.int64)
        self.threshold_ = np.asarray(self.threshold_, dtype=np.float64)
        self.left_ = np.asarray(self.left_, dtype=np.int64)
        self.right_ = np.asarray(self.right_, dtype=np.int64)
        self.value_ = np.asarray(self.value_, dtype=np.float64)
        del self._rng

    def _new_node(self, value):
        self.feature_.append(-1)
        self.threshold_.append(0.0)
        self.left_.append(-1)
        self.right_.append(-1)
        self.value_.append(value)
        return len(self.value_) - 1

    def _grow(self, X, y, w, rows, depth):
        wn, yn = w[rows], y[rows]
        W = wn.sum()
        p = (wn @ yn) / W if W > 0 else 0.0
        node = self._new_node(p)
        if depth >= self.max_depth or rows.size < self.min_samples_split or p <= 0.0 or p >= 1.0:
            return node

        best = None
        n_tried = 0
        for f in self._rng.permutation(X.shape[1]):
            if n_tried >= self.max_features_:
                break
            found = _best_split_on(X[rows, f], yn, wn)
            if found is None:
                continue
            n_tried += 1
            if best is None or found[0] < best[0]:
                best = (found[0], int(f), found[1])
        if best is None:
            return node

        _, f, thr = best
        go_left = X[rows, f] <= thr
        self.feature_[node] = f
        self.threshold_[node] = thr
        left = self._grow(X, y, w, rows[go_left], depth + 1)
        right = self._grow(X, y, w, rows[~go_left], depth + 1)
        self.left_[node] = left
        self.right_[node] = right
        return node

    def apply(self, X) -> np.ndarray:
        """Leaf index of every row."""
        X = self._check_width(X)
        node = np.zeros(X.shape[0], dtype=np.int64)
        active = self.feature_[node] >= 0
        while active.any():
            idx = np.flatnonzero(active)
            cur = node[idx]
            go_left = X[idx, self.feature_[cur]] <= self.threshold_[cur]
            node[idx] = np.where(go_left, self.left_[cur], self.right_[cur])
            active = self.feature_[node] >= 0
        return node

    def _scores(self, X):
        return self.value_[self.apply(X)]

    @property
    def depth(self) -> int:
        def walk(i):
            if self.feature_[i] < 0:
                return 0
            return 1 + max(walk(self.left_[i]), walk(self.right_[i]))
        return walk(0)
