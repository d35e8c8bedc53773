"""PCA-based conditional-probability category encoder.

Each categorical variable becomes two 0/1 indicators::

    (1, 0)  p1 > p2 and p2 > threshold     majority C1, minority not rare
    (0, 1)  p1 < p2 and p1 > threshold     majority C2, minority not rare
    (0, 0)  otherwise                      min(p1, p2) <= threshold, or p1 == p2

Categories never seen during fitting also map to (0, 0). The 2N indicator
columns are centred and rotated onto their principal axes; the first ``k``
scores are standardised with statistics of the fitting split.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset, SchemaError
from .stats import CategoryStats, fit_all_stats

STATE_C1 = (1, 0)
STATE_C2 = (0, 1)
STATE_NONE = (0, 0)

DEGENERATE_RTOL = 1e-12


def _check_threshold(threshold: float) -> float:
    threshold = float(threshold)
    if not 0.0 <= threshold <= 0.5:
        raise ValueError(f"threshold must lie in [0, 0.5] (a fraction), got {threshold!r}")
    return threshold


def indicator_states(p1, p2, threshold: float) -> np.ndarray:
    """Vectorised state rule; returns an ``(n, 2)`` int8 array."""
    p1 = np.asarray(p1, dtype=np.float64)
    p2 = np.asarray(p2, dtype=np.float64)
    first = (p1 > p2) & (p2 > threshold)
    second = (p1 < p2) & (p1 > threshold)
    return np.stack([first, second], axis=-1).astype(np.int8)


def state_for(p1: float, p2: float, threshold: float) -> tuple[int, int]:
    s = indicator_states([p1], [p2], _check_threshold(threshold))[0]
    return int(s[0]), int(s[1])


@dataclass(frozen=True, eq=False)
class ThresholdMap:
    threshold: float
    variables: tuple[str, ...]
    tables: tuple[dict[str, tuple[int, int]], ...]

    def states(self, variable: str) -> dict[str, tuple[int, int]]:
        return self.tables[self.variables.index(variable)]

    @property
    def width(self) -> int:
        return 2 * len(self.variables)


def build_threshold_map(stats: list[CategoryStats], threshold: float) -> ThresholdMap:
    threshold = _check_threshold(threshold)
    tables = []
    for st in stats:
        states = indicator_states(st.p1, st.p2, threshold)
        tables.append({c: (int(a), int(b)) for c, (a, b) in zip(st.categories, states)})
    return ThresholdMap(threshold, tuple(st.variable for st in stats), tuple(tables))


def expand_indicators(ds: Dataset, tmap: ThresholdMap) -> np.ndarray:
    """``(n_rows, 2N)`` indicator matrix; variable i fills columns 2i and 2i+1."""
    X = np.zeros((ds.n_rows, tmap.width), dtype=np.float64)
    for i, (var, table) in enumerate(zip(tmap.variables, tmap.tables)):
        j = ds.variable_index(var)
        lut = np.array([table.get(c, STATE_NONE) for c in ds.vocab[j]], dtype=np.float64)
        lut = lut.reshape(-1, 2)
        X[:, 2 * i:2 * i + 2] = lut[ds.codes[:, j]]
    return X


@dataclass(frozen=True, eq=False)
class PCAModel:
    """Principal axes of a data matrix, largest variance first.

    ``components`` holds only the non-degenerate axes, one per row.
    """

    means: np.ndarray
    components: np.ndarray
    explained_variance: np.ndarray
    total_variance: float

    @property
    def n_usable(self) -> int:
        return self.components.shape[0]

    def project(self, X, k=None) -> np.ndarray:
        k = self.n_usable if k is None else k
        return (np.asarray(X, dtype=np.float64) - self.means) @ self.components[:k].T

    def reconstruct(self, scores) -> np.ndarray:
        """Map scores back to the centred input space."""
        scores = np.asarray(scores, dtype=np.float64)
        return scores @ self.components[:scores.shape[1]]


def fit_pca(X) -> PCAModel:
    """Eigendecomposition of the sample covariance (ddof=1) of ``X``.

    Axes whose eigenvalue falls below ``1e-12 * max eigenvalue`` are dropped.
    Each axis is oriented so its largest-magnitude loading is positive.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError("PCA needs a 2-D matrix with at least two rows")
    means = X.mean(axis=0)
    Xc = X - means
    cov = (Xc.T @ Xc) / (X.shape[0] - 1)
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(-evals, kind="stable")
    evals, evecs = evals[order], evecs[:, order].T.copy()

    top = evals[0] if evals.size else 0.0
    keep = evals > DEGENERATE_RTOL * top if top > 0 else np.zeros(evals.shape, bool)
    comps = evecs[keep]
    for row in comps:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    return PCAModel(
        means=means,
        components=comps,
        explained_variance=np.clip(evals[keep], 0.0, None),
        total_variance=float(np.trace(cov)),
    )


@dataclass(frozen=True, eq=False)
class Standardizer:
    mean: np.ndarray
    std: np.ndarray

    @classmethod
    def fit(cls, Z) -> Standardizer:
        Z = np.asarray(Z, dtype=np.float64)
        std = Z.std(axis=0)
        if np.any(std <= 0):
            raise ValueError("cannot standardise a zero-variance column")
        return cls(Z.mean(axis=0), std)

    def apply(self, Z) -> np.ndarray:
        return (np.asarray(Z, dtype=np.float64) - self.mean) / self.std


@dataclass(frozen=True, eq=False)
class ProposedEncoder:
    """Fitted threshold map, PCA rotation and score standardiser."""

    threshold_map: ThresholdMap
    pca: PCAModel
    standardizer: Standardizer
    k: int
    k_requested: int

    scheme = "proposed"

    @property
    def threshold(self) -> float:
        return self.threshold_map.threshold

    @property
    def variables(self) -> tuple[str, ...]:
        return self.threshold_map.variables

    @property
    def clamped(self) -> bool:
        return self.k != self.k_requested

    @property
    def output_dim(self) -> int:
        return self.k

    @property
    def column_names(self) -> list[str]:
        return [f"pc{i + 1}" for i in range(self.k)]

    def indicators(self, ds: Dataset) -> np.ndarray:
        for var in self.variables:
            if var not in ds.categorical_names:
                raise SchemaError(f"dataset has no categorical variable {var!r}")
        return expand_indicators(ds, self.threshold_map)

    def transform(self, ds: Dataset, training: bool = False) -> np.ndarray:
        # ``training`` is accepted for interface parity with the baselines
        return self.standardizer.apply(self.pca.project(self.indicators(ds), self.k))


def fit(train: Dataset, threshold: float, k: int, variables=None) -> ProposedEncoder:
    """Fit the encoder on ``train``; ``threshold`` is a fraction, not percent.

    ``k`` larger than the number of usable principal axes is clamped;
    ``encoder.clamped`` reports whether that happened.
    """
    k = int(k)
    if k < 1:
        raise ValueError(f"number of principal components must be >= 1, got {k}")
    tmap = build_threshold_map(fit_all_stats(train, variables), threshold)
    X = expand_indicators(train, tmap)
    pca = fit_pca(X)
    if pca.n_usable == 0:
        raise ValueError(
            f"threshold {tmap.threshold:g} leaves every indicator constant; "
            "no usable principal component"
        )
    k_used = min(k, pca.n_usable)
    scaler = Standardizer.fit(pca.project(X, k_used))
    return ProposedEncoder(tmap, pca, scaler, k_used, k)


def transform(enc: ProposedEncoder, ds: Dataset) -> np.ndarray:
    return enc.transform(ds)
