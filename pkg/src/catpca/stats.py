"""Per-category class counts and conditional class probabilities."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .data import C2, Dataset


@dataclass(frozen=True, eq=False)
class CategoryStats:
    """Counts of C1/C2 rows for every category of one variable.

    Categories are listed in first-appearance order of the fitting split.
    ``p1[j] = P(C1 | category j)`` and ``p2[j] = P(C2 | category j)``.
    """

    variable: str
    categories: tuple[str, ...]
    count_c1: np.ndarray
    count_c2: np.ndarray

    def __post_init__(self):
        if len(self.categories) != len(self.count_c1) or len(self.categories) != len(self.count_c2):
            raise ValueError("one count per category expected")
        if np.any(self.count_c1 + self.count_c2 < 1):
            raise ValueError("every stored category needs at least one occurrence")

    @property
    def count_total(self) -> np.ndarray:
        return self.count_c1 + self.count_c2

    @property
    def p1(self) -> np.ndarray:
        return self.count_c1 / self.count_total

    @property
    def p2(self) -> np.ndarray:
        return self.count_c2 / self.count_total

    @cached_property
    def index(self) -> dict[str, int]:
        return {c: j for j, c in enumerate(self.categories)}

    def __len__(self):
        return len(self.categories)

    def lookup(self, category: str) -> tuple[float, float] | None:
        """``(p1, p2)`` of a category, or None when it was not seen at fit time."""
        j = self.index.get(category)
        if j is None:
            return None
        n = int(self.count_c1[j] + self.count_c2[j])
        return int(self.count_c1[j]) / n, int(self.count_c2[j]) / n

    def records(self):
        for j, cat in enumerate(self.categories):
            c1, c2 = int(self.count_c1[j]), int(self.count_c2[j])
            yield cat, c1, c2, c1 / (c1 + c2), c2 / (c1 + c2)

    def dump_csv(self, fh, header=True) -> None:
        """Debug dump: ``variable,category,count_c1,count_c2,p1,p2``."""
        w = csv.writer(fh, lineterminator="\n")
        if header:
            w.writerow(["variable", "category", "count_c1", "count_c2", "p1", "p2"])
        for cat, c1, c2, p1, p2 in self.records():
            w.writerow([self.variable, cat, c1, c2, f"{p1:.17g}", f"{p2:.17g}"])


def fit_stats(ds: Dataset, variable: str) -> CategoryStats:
    """Count class occurrences per category of ``variable`` in ``ds``."""
    if ds.n_rows == 0:
        raise ValueError("cannot fit category statistics on an empty dataset")
    i = ds.variable_index(variable)
    codes = ds.codes[:, i]
    size = len(ds.vocab[i])
    is_c2 = ds.target == C2
    c2 = np.bincount(codes[is_c2], minlength=size)
    c1 = np.bincount(codes[~is_c2], minlength=size)
    # a subsampled dataset may keep intern entries for categories it no longer has;
    # order follows first appearance in the rows themselves
    _, first = np.unique(codes, return_index=True)
    present = codes[np.sort(first)]
    return CategoryStats(
        variable=variable,
        categories=tuple(ds.vocab[i][k] for k in present),
        count_c1=c1[present].astype(np.int64),
        count_c2=c2[present].astype(np.int64),
    )


def fit_all_stats(ds: Dataset, variables=None) -> list[CategoryStats]:
    variables = ds.categorical_names if variables is None else variables
    return [fit_stats(ds, v) for v in variables]


def codes_to_table_index(ds: Dataset, stats: CategoryStats) -> np.ndarray:
    """Per-row position of each category in ``stats`` (-1 for unseen categories)."""
    i = ds.variable_index(stats.variable)
    lut = np.array([stats.index.get(c, -1) for c in ds.vocab[i]], dtype=np.int64)
    return lut[ds.codes[:, i]]
