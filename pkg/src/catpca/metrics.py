"""Accuracy, ROC AUC and the train/test trade-off metrics.

Accuracies are percentages in [0, 100]; AUCs are fractions in [0, 1].
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import rankdata


def accuracy(pred, truth) -> float:
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape:
        raise ValueError(f"length mismatch: {pred.shape} vs {truth.shape}")
    if pred.size == 0:
        raise ValueError("accuracy of zero predictions")
    return 100.0 * np.count_nonzero(pred == truth) / pred.size


def auc(scores, truth) -> float:
    """Mann-Whitney form of ROC AUC; tied positive/negative pairs count 1/2.

    ``truth`` is 1 for the positive (attack) class and 0 otherwise.
    """
    scores = np.asarray(scores, dtype=np.float64)
    truth = np.asarray(truth)
    if scores.shape != truth.shape:
        raise ValueError(f"length mismatch: {scores.shape} vs {truth.shape}")
    pos = truth == 1
    n_pos = int(np.count_nonzero(pos))
    n_neg = truth.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs both classes in the ground truth")
    if np.isnan(scores).any():
        raise ValueError("NaN score")
    ranks = rankdata(scores, method="average")
    # average ranks are multiples of 1/2, so doubling keeps the sum exact
    u2 = 2.0 * ranks[pos].sum() - n_pos * (n_pos + 1.0)
    return u2 / (2.0 * n_pos * n_neg)


def _check_range(name, value, hi):
    if not 0.0 <= value <= hi:
        raise ValueError(f"{name}={value!r} outside [0, {hi}]")


def mse_to_ideal_accuracy(a: float, b: float) -> float:
    """Half the squared distance of (train, test) accuracy to (100, 100)."""
    _check_range("a", a, 100.0)
    _check_range("b", b, 100.0)
    return 0.5 * ((100.0 - a) ** 2 + (100.0 - b) ** 2)


def mse_to_ideal_auc(c: float, d: float) -> float:
    """Half the squared distance of (train, test) AUC to (1, 1)."""
    _check_range("c", c, 1.0)
    _check_range("d", d, 1.0)
    return 0.5 * ((1.0 - c) ** 2 + (1.0 - d) ** 2)


def harmonic_avg(e: float, f: float) -> float:
    if not (e > 0 and f > 0):
        raise ValueError(f"harmonic average needs positive inputs, got {e!r}, {f!r}")
    return 2.0 * e * f / (e + f)


RECORD_FIELDS = (
    "encoder", "classifier", "threshold_pct", "k", "output_dim", "status",
    "train_accuracy", "test_accuracy", "train_auc", "test_auc",
    "mse_accuracy", "mse_auc", "harmonic_accuracy", "harmonic_auc", "error",
)


@dataclass(frozen=True)
class EvalRecord:
    """One evaluated (encoder configuration, classifier) cell.

    Failed cells carry ``status="failed"``, the message in ``error`` and NaN
    metrics.
    """

    encoder: str
    classifier: str
    threshold_pct: float | None = None
    k: int | None = None
    output_dim: int | None = None
    status: str = "ok"
    train_accuracy: float = float("nan")
    test_accuracy: float = float("nan")
    train_auc: float = float("nan")
    test_auc: float = float("nan")
    mse_accuracy: float = float("nan")
    mse_auc: float = float("nan")
    harmonic_accuracy: float = float("nan")
    harmonic_auc: float = float("nan")
    error: str = ""

    @classmethod
    def from_metrics(cls, encoder, classifier, train_acc, test_acc, train_auc, test_auc,
                     threshold_pct=None, k=None, output_dim=None) -> EvalRecord:
        return cls(
            encoder=encoder,
            classifier=classifier,
            threshold_pct=threshold_pct,
            k=k,
            output_dim=output_dim,
            train_accuracy=train_acc,
            test_accuracy=test_acc,
            train_auc=train_auc,
            test_auc=test_auc,
            mse_accuracy=mse_to_ideal_accuracy(train_acc, test_acc),
            mse_auc=mse_to_ideal_auc(train_auc, test_auc),
            harmonic_accuracy=_harmonic_or_zero(train_acc, test_acc),
            harmonic_auc=_harmonic_or_zero(train_auc, test_auc),
        )

    @classmethod
    def failed(cls, encoder, classifier, error, threshold_pct=None, k=None) -> EvalRecord:
        return cls(encoder, classifier, threshold_pct, k, status="failed", error=str(error))

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def as_dict(self) -> dict:
        return asdict(self)


def _harmonic_or_zero(e, f):
    # a zero metric (e.g. 0% accuracy) has harmonic mean 0 in the limit
    return 0.0 if e == 0 or f == 0 else harmonic_avg(e, f)
