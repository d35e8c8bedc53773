"""Classical category encoders used as comparison baselines.

Every scheme is fitted per categorical variable and concatenates one block
per variable, except ``hashing`` which folds all variables into a shared set
of buckets.

Unseen categories at transform time:

* one_hot, binary, base_n, contrast coders: all-zero block
* ordinal: reserved code 0; count: 0
* target-statistic family: the global prior (``woe``: 0)
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .data import C2, Dataset, SchemaError
from .stats import CategoryStats, codes_to_table_index, fit_all_stats

CONTRASTS = ("sum", "helmert", "backward_difference", "polynomial")
TARGET_FAMILY = ("target", "m_estimate", "james_stein", "leave_one_out", "catboost", "woe")
SCHEMES = (
    "one_hot", "ordinal", "count", "binary", "base_n", "hashing",
    *TARGET_FAMILY, *CONTRASTS,
)
# short labels used in reports and leaderboards
LABELS = {
    "one_hot": "One Hot", "ordinal": "Ordinal", "count": "Count",
    "binary": "Binary", "base_n": "Base-N", "hashing": "Hash",
    "target": "Target", "m_estimate": "MEstimate", "james_stein": "James-Stein",
    "leave_one_out": "LOOE", "catboost": "Cat Boost", "woe": "WOE",
    "sum": "Sum", "helmert": "Helmert", "backward_difference": "Backward Difference",
    "polynomial": "Polynomial",
}

DEFAULT_PARAMS = {
    "base_n": {"base": 2},
    "hashing": {"n_components": 8},
    "target": {"min_samples_leaf": 20, "smoothing": 10.0},
    "m_estimate": {"m": 1.0},
    "catboost": {"a": 1.0, "shuffle": False, "seed": 0},
    "woe": {"regularization": 0.5},
}


# ---------------------------------------------------------------------------
# contrast matrices


def contrast_matrix(kind: str, n_levels: int) -> np.ndarray:
    """``(n_levels, n_levels - 1)`` coding matrix; row j codes level j."""
    c = int(n_levels)
    if c < 1:
        raise ValueError("a contrast needs at least one level")
    if kind == "sum":
        m = np.zeros((c, c - 1))
        m[: c - 1] = np.eye(c - 1)
        m[c - 1] = -1.0
        return m
    if kind == "helmert":
        m = np.zeros((c, c - 1))
        for j in range(c - 1):
            m[: j + 1, j] = -1.0
            m[j + 1, j] = j + 1
        return m
    if kind == "backward_difference":
        m = np.zeros((c, c - 1))
        for j in range(c - 1):
            m[: j + 1, j] = -(c - 1 - j) / c
            m[j + 1:, j] = (j + 1) / c
        return m
    if kind == "polynomial":
        return _orthonormal_poly(c)
    raise ValueError(f"unknown contrast {kind!r}")


def _orthonormal_poly(c: int) -> np.ndarray:
    # Gram-Schmidt (applied twice) on x * q_j over equally spaced levels:
    # stable up to high degree, unlike a QR of the Vandermonde matrix
    x = np.arange(c, dtype=np.float64)
    x = (x - x.mean()) / max(1.0, x.std())
    q = np.empty((c, c))
    q[:, 0] = 1.0 / np.sqrt(c)
    for j in range(1, c):
        v = x * q[:, j - 1]
        for _ in range(2):
            v -= q[:, :j] @ (q[:, :j].T @ v)
        q[:, j] = v / np.linalg.norm(v)
    return q[:, 1:]


def n_digits(n_levels: int, base: int) -> int:
    """Digits needed to write codes 1..n_levels in ``base``."""
    digits, top = 0, int(n_levels)
    while top > 0:
        top //= base
        digits += 1
    return digits


def hash_bucket(variable: str, category: str, n_components: int) -> int:
    """md5 of ``"variable=category"`` (UTF-8), first 8 bytes big-endian, mod n."""
    digest = hashlib.md5(f"{variable}={category}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") % n_components


# ---------------------------------------------------------------------------
# fitted encoder


@dataclass(frozen=True, eq=False)
class FittedBaseline:
    """Per-variable lookup tables for one scheme.

    ``tables[i]`` maps a category string to its block of output values for
    variable ``variables[i]``; ``defaults[i]`` is the block used for unseen
    categories. ``stats`` keeps the class counts target-based schemes need
    for their training-time (row-dependent) encodings.
    """

    scheme: str
    params: dict
    variables: tuple[str, ...]
    tables: tuple[dict[str, np.ndarray], ...]
    defaults: tuple[np.ndarray, ...]
    prior: float
    stats: tuple[CategoryStats, ...] = field(repr=False)

    @property
    def output_dim(self) -> int:
        if self.scheme == "hashing":
            return self.params["n_components"]
        return sum(len(d) for d in self.defaults)

    @property
    def label(self) -> str:
        return LABELS[self.scheme]

    @property
    def column_names(self) -> list[str]:
        if self.scheme == "hashing":
            return [f"hash_{b}" for b in range(self.output_dim)]
        names = []
        for var, table, default in zip(self.variables, self.tables, self.defaults):
            width = len(default)
            if self.scheme == "one_hot":
                names += [f"{var}_{cat}" for cat in table]
            elif width == 1:
                names.append(var)
            else:
                names += [f"{var}_{j}" for j in range(width)]
        return names

    def _check(self, ds: Dataset):
        for var in self.variables:
            if var not in ds.categorical_names:
                raise SchemaError(f"dataset has no categorical variable {var!r}")

    def transform(self, ds: Dataset, training: bool = False) -> np.ndarray:
        """Encode ``ds``.

        With ``training=True`` the leave-one-out and CatBoost schemes treat
        ``ds`` as the fitting split and use each row's own target (leave-one-out
        excludes it, CatBoost only looks at earlier rows). Other schemes ignore
        the flag.
        """
        self._check(ds)
        if self.scheme == "hashing":
            return self._transform_hashing(ds)
        blocks = []
        for i, var in enumerate(self.variables):
            if training and self.scheme == "leave_one_out":
                blocks.append(self._loo_train(ds, i)[:, None])
            elif training and self.scheme == "catboost":
                blocks.append(self._catboost_train(ds, i)[:, None])
            else:
                j = ds.variable_index(var)
                table, default = self.tables[i], self.defaults[i]
                lut = np.array([table.get(c, default) for c in ds.vocab[j]], dtype=np.float64)
                lut = lut.reshape(len(ds.vocab[j]), len(default))
                blocks.append(lut[ds.codes[:, j]])
        if not blocks:
            return np.zeros((ds.n_rows, 0))
        return np.hstack(blocks)

    def _transform_hashing(self, ds: Dataset) -> np.ndarray:
        n = self.params["n_components"]
        out = np.zeros((ds.n_rows, n))
        rows = np.arange(ds.n_rows)
        for var in self.variables:
            j = ds.variable_index(var)
            lut = np.array([hash_bucket(var, c, n) for c in ds.vocab[j]], dtype=np.int64)
            np.add.at(out, (rows, lut[ds.codes[:, j]]), 1.0)
        return out

    def _loo_train(self, ds: Dataset, i: int) -> np.ndarray:
        st = self.stats[i]
        pos = codes_to_table_index(ds, st)
        seen = pos >= 0
        total = np.where(seen, st.count_total[np.maximum(pos, 0)], 0).astype(np.float64)
        c2 = np.where(seen, st.count_c2[np.maximum(pos, 0)], 0).astype(np.float64)
        y = (ds.target == C2).astype(np.float64)
        out = np.full(ds.n_rows, self.prior)
        ok = seen & (total > 1)
        out[ok] = (c2[ok] - y[ok]) / (total[ok] - 1)
        return out

    def _catboost_train(self, ds: Dataset, i: int) -> np.ndarray:
        a = float(self.params["a"])
        j = ds.variable_index(self.variables[i])
        codes = ds.codes[:, j]
        y = (ds.target == C2).astype(np.float64)
        order = np.arange(ds.n_rows)
        if self.params.get("shuffle"):
            order = np.random.default_rng(self.params.get("seed", 0)).permutation(ds.n_rows)
        # running per-category sums over rows strictly before each row in `order`
        c_seq, y_seq = codes[order], y[order]
        by_cat = np.argsort(c_seq, kind="stable")
        c_sorted, y_sorted = c_seq[by_cat], y_seq[by_cat]
        starts = np.r_[True, c_sorted[1:] != c_sorted[:-1]]
        group_start = np.maximum.accumulate(np.where(starts, np.arange(len(c_sorted)), 0))
        csum = np.concatenate([[0.0], np.cumsum(y_sorted)])
        prev_count = np.arange(len(c_sorted)) - group_start
        prev_sum = csum[:-1] - csum[group_start]
        vals = np.empty(ds.n_rows)
        vals[by_cat] = (prev_sum + a * self.prior) / (prev_count + a)
        out = np.empty(ds.n_rows)
        out[order] = vals
        return out

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "params": dict(self.params),
            "prior": self.prior,
            "variables": [
                {
                    "name": var,
                    "table": {cat: [float(v) for v in vec] for cat, vec in table.items()},
                    "unseen": [float(v) for v in default],
                    "count_c1": [int(v) for v in st.count_c1],
                    "count_c2": [int(v) for v in st.count_c2],
                    "categories": list(st.categories),
                }
                for var, table, default, st in zip(self.variables, self.tables, self.defaults, self.stats)
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> FittedBaseline:
        variables, tables, defaults, stats = [], [], [], []
        for v in doc["variables"]:
            variables.append(v["name"])
            tables.append({c: np.asarray(vec, dtype=np.float64) for c, vec in v["table"].items()})
            defaults.append(np.asarray(v["unseen"], dtype=np.float64))
            stats.append(CategoryStats(
                v["name"], tuple(v["categories"]),
                np.asarray(v["count_c1"], dtype=np.int64),
                np.asarray(v["count_c2"], dtype=np.int64),
            ))
        return cls(doc["scheme"], dict(doc["params"]), tuple(variables), tuple(tables),
                   tuple(defaults), float(doc["prior"]), tuple(stats))


# ---------------------------------------------------------------------------
# per-scheme tables


def _resolve_params(scheme: str, params: dict) -> dict:
    if scheme not in SCHEMES:
        raise ValueError(f"unknown encoding scheme {scheme!r}; choose from {', '.join(SCHEMES)}")
    merged = dict(DEFAULT_PARAMS.get(scheme, {}))
    unknown = set(params) - set(merged)
    if unknown:
        raise ValueError(f"{scheme}: unexpected parameter(s) {sorted(unknown)}")
    merged.update(params)
    if scheme == "base_n" and (int(merged["base"]) != merged["base"] or merged["base"] < 2):
        raise ValueError("base_n: base must be an integer >= 2")
    if scheme == "hashing" and (int(merged["n_components"]) != merged["n_components"] or merged["n_components"] < 1):
        raise ValueError("hashing: n_components must be an integer >= 1")
    if scheme == "m_estimate" and merged["m"] < 0:
        raise ValueError("m_estimate: m must be >= 0")
    if scheme == "target" and (merged["smoothing"] <= 0 or merged["min_samples_leaf"] < 0):
        raise ValueError("target: smoothing must be > 0 and min_samples_leaf >= 0")
    if scheme == "catboost" and merged["a"] <= 0:
        raise ValueError("catboost: a must be > 0")
    if scheme == "woe" and merged["regularization"] < 0:
        raise ValueError("woe: regularization must be >= 0")
    return merged


def _digits_table(st: CategoryStats, base: int):
    width = n_digits(len(st), base)
    table = {}
    for code, cat in enumerate(st.categories, start=1):
        digits, v = [], code
        for _ in range(width):
            digits.append(v % base)
            v //= base
        table[cat] = np.array(digits[::-1], dtype=np.float64)
    return table, np.zeros(width)


def _scalar_table(st: CategoryStats, values, unseen: float):
    table = {c: np.array([float(v)]) for c, v in zip(st.categories, values)}
    return table, np.array([float(unseen)])


def _target_values(scheme, st: CategoryStats, prior: float, p: dict, n_c1: int, n_c2: int):
    n = st.count_total.astype(np.float64)
    c2 = st.count_c2.astype(np.float64)
    mean = c2 / n
    if scheme == "target":
        s = 1.0 / (1.0 + np.exp(-(n - p["min_samples_leaf"]) / p["smoothing"]))
        return prior * (1.0 - s) + mean * s, prior
    if scheme == "m_estimate":
        return (c2 + p["m"] * prior) / (n + p["m"]), prior
    if scheme == "james_stein":
        # pooled binomial variance of each category mean vs spread of the means
        within = prior * (1.0 - prior) / n
        between = mean.var() if len(mean) > 1 else 0.0
        if between > 0:
            b = within / (within + between)
        else:
            b = np.ones_like(mean)
        return (1.0 - b) * mean + b * prior, prior
    if scheme == "leave_one_out":
        return mean, prior
    if scheme == "catboost":
        a = p["a"]
        return (c2 + a * prior) / (n + a), prior
    if scheme == "woe":
        r = p["regularization"]
        dist_c2 = (c2 + r) / (n_c2 + 2 * r)
        dist_c1 = (st.count_c1 + r) / (n_c1 + 2 * r)
        return np.log(dist_c2 / dist_c1), 0.0
    raise AssertionError(scheme)


def fit_baseline(train: Dataset, scheme: str, variables=None, **params) -> FittedBaseline:
    """Fit baseline ``scheme`` on the categorical columns of ``train``."""
    p = _resolve_params(scheme, params)
    stats = fit_all_stats(train, variables)
    n_c2 = int(np.count_nonzero(train.target == C2))
    n_c1 = train.n_rows - n_c2
    prior = n_c2 / train.n_rows
    tables, defaults = [], []
    for st in stats:
        c = len(st)
        if scheme == "one_hot":
            eye = np.eye(c)
            table, default = {cat: eye[j] for j, cat in enumerate(st.categories)}, np.zeros(c)
        elif scheme == "ordinal":
            table, default = _scalar_table(st, range(1, c + 1), 0)
        elif scheme == "count":
            table, default = _scalar_table(st, st.count_total, 0)
        elif scheme == "binary":
            table, default = _digits_table(st, 2)
        elif scheme == "base_n":
            table, default = _digits_table(st, int(p["base"]))
        elif scheme == "hashing":
            table, default = {}, np.zeros(0)
        elif scheme in CONTRASTS:
            m = contrast_matrix(scheme, c)
            table, default = {cat: m[j] for j, cat in enumerate(st.categories)}, np.zeros(c - 1)
        else:
            values, unseen = _target_values(scheme, st, prior, p, n_c1, n_c2)
            table, default = _scalar_table(st, values, unseen)
        tables.append(table)
        defaults.append(default)
    return FittedBaseline(
        scheme=scheme,
        params=p,
        variables=tuple(st.variable for st in stats),
        tables=tuple(tables),
        defaults=tuple(defaults),
        prior=prior,
        stats=tuple(stats),
    )


def transform_baseline(enc: FittedBaseline, ds: Dataset, training: bool = False) -> np.ndarray:
    return enc.transform(ds, training=training)


def expected_output_dim(scheme: str, cardinalities, **params) -> int:
    """Output width of ``scheme`` for variables with the given cardinalities."""
    p = _resolve_params(scheme, params)
    cards = list(cardinalities)
    if scheme == "one_hot":
        return sum(cards)
    if scheme in CONTRASTS:
        return sum(c - 1 for c in cards)
    if scheme == "binary":
        return sum(n_digits(c, 2) for c in cards)
    if scheme == "base_n":
        return sum(n_digits(c, int(p["base"])) for c in cards)
    if scheme == "hashing":
        return int(p["n_components"])
    return len(cards)
