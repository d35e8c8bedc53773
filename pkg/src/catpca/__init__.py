"""Supervised category encoding with conditional probabilities and PCA.

The package bundles the encoder itself (:mod:`catpca.proposed`), classical
baseline encoders, reference binary classifiers, evaluation metrics and a
grid-search harness for NSL-KDD-format data.
"""

__version__ = "0.1.0"

from .data import (  # noqa: E402
    BalanceReport, Dataset, ParseError, SchemaError, balance_report,
    load_mini_kdd, parse_nslkdd, unseen_categories,
)
from .stats import CategoryStats, fit_stats  # noqa: E402
from .proposed import ProposedEncoder, build_threshold_map, fit_pca  # noqa: E402
from .proposed import fit as fit_proposed  # noqa: E402
from .baselines import FittedBaseline, fit_baseline  # noqa: E402
from .metrics import (  # noqa: E402
    EvalRecord, accuracy, auc, harmonic_avg, mse_to_ideal_accuracy, mse_to_ideal_auc,
)

__all__ = [
    "BalanceReport", "CategoryStats", "Dataset", "EvalRecord", "FittedBaseline",
    "ParseError", "ProposedEncoder", "SchemaError", "accuracy", "auc",
    "balance_report", "build_threshold_map", "fit_baseline", "fit_pca",
    "fit_proposed", "fit_stats", "harmonic_avg", "load_mini_kdd",
    "mse_to_ideal_accuracy", "mse_to_ideal_auc", "parse_nslkdd", "unseen_categories",
]
