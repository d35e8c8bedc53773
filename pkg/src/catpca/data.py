"""NSL-KDD ingestion.

Files are plain CSV without a header: 41 features, the attack label and a
difficulty score (43 fields per line). Categorical strings are interned to
integer codes per dataset; everything user-facing resolves them back to
strings.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

FEATURES = (
    "duration", "protocol_type", "service", "flag", "src_bytes", "dst_bytes",
    "land", "wrong_fragment", "urgent", "hot", "num_failed_logins",
    "logged_in", "num_compromised", "root_shell", "su_attempted", "num_root",
    "num_file_creations", "num_shells", "num_access_files",
    "num_outbound_cmds", "is_host_login", "is_guest_login", "count",
    "srv_count", "serror_rate", "srv_serror_rate", "rerror_rate",
    "srv_rerror_rate", "same_srv_rate", "diff_srv_rate", "srv_diff_host_rate",
    "dst_host_count", "dst_host_srv_count", "dst_host_same_srv_rate",
    "dst_host_diff_srv_rate", "dst_host_same_src_port_rate",
    "dst_host_srv_diff_host_rate", "dst_host_serror_rate",
    "dst_host_srv_serror_rate", "dst_host_rerror_rate",
    "dst_host_srv_rerror_rate",
)
CATEGORICAL = ("protocol_type", "service", "flag")
N_FIELDS = len(FEATURES) + 2

NORMAL_LABEL = "normal"
# target encoding: 0 = C1 (normal traffic), 1 = C2 (attack)
C1, C2 = 0, 1


class ParseError(ValueError):
    """Malformed input file. ``line`` is 1-based, or None for whole-file errors."""

    def __init__(self, message, path=None, line=None):
        self.path = None if path is None else str(path)
        self.line = line
        where = self.path or "<input>"
        if line is not None:
            where = f"{where}:{line}"
        super().__init__(f"{where}: {message}")


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class ColumnSchema:
    name: str
    kind: str  # categorical | numeric | label | difficulty
    position: int


def nslkdd_schema() -> tuple[ColumnSchema, ...]:
    cols = []
    for pos, name in enumerate(FEATURES):
        kind = "categorical" if name in CATEGORICAL else "numeric"
        cols.append(ColumnSchema(name, kind, pos))
    cols.append(ColumnSchema("label", "label", len(FEATURES)))
    cols.append(ColumnSchema("difficulty", "difficulty", len(FEATURES) + 1))
    return tuple(cols)


@dataclass(frozen=True, eq=False)
class Dataset:
    """Column-oriented view of one NSL-KDD split.

    ``codes[:, i]`` indexes into ``vocab[i]`` for the i-th categorical
    variable; ``target`` is 1 for attacks (C2) and 0 for normal traffic (C1).
    """

    schema: tuple[ColumnSchema, ...]
    numeric: np.ndarray
    codes: np.ndarray
    vocab: tuple[tuple[str, ...], ...]
    target: np.ndarray
    labels: np.ndarray
    difficulty: np.ndarray
    role: str = "train"
    source: str | None = field(default=None, compare=False)

    def __post_init__(self):
        n = len(self.target)
        if self.numeric.shape[0] != n or self.codes.shape[0] != n:
            raise SchemaError("column arrays disagree on the row count")
        if len(self.labels) != n or len(self.difficulty) != n:
            raise SchemaError("label/difficulty length differs from target")
        if self.codes.shape[1] != len(self.vocab):
            raise SchemaError("one intern table per categorical column expected")
        for i, table in enumerate(self.vocab):
            col = self.codes[:, i]
            if n and (col.min() < 0 or col.max() >= len(table)):
                raise SchemaError("categorical code outside its intern table")
        kinds = [c.kind for c in self.schema]
        if kinds.count("label") != 1:
            raise SchemaError("exactly one label column required")
        if [c.position for c in self.schema] != list(range(len(self.schema))):
            raise SchemaError("column positions must be contiguous from 0")

    @property
    def n_rows(self) -> int:
        return len(self.target)

    @property
    def categorical_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.schema if c.kind == "categorical")

    @property
    def numeric_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.schema if c.kind == "numeric")

    def variable_index(self, variable: str) -> int:
        try:
            return self.categorical_names.index(variable)
        except ValueError:
            raise SchemaError(f"{variable!r} is not a categorical variable") from None

    def categories(self, variable: str) -> np.ndarray:
        """Resolved category strings of ``variable``, one per row."""
        i = self.variable_index(variable)
        return np.asarray(self.vocab[i], dtype=object)[self.codes[:, i]]

    def take(self, rows) -> Dataset:
        """Row subset, order as given. Intern tables are kept as they are."""
        rows = np.asarray(rows)
        return Dataset(
            self.schema, self.numeric[rows], self.codes[rows], self.vocab,
            self.target[rows], self.labels[rows], self.difficulty[rows],
            self.role, self.source,
        )

    @classmethod
    def from_categorical(cls, columns, target, role="train") -> Dataset:
        """Dataset made only of categorical columns plus a 0/1 target.

        ``columns`` maps variable name to a sequence of category strings;
        ``target`` is 1 for C2 (attack) and 0 for C1 (normal).
        """
        names = list(columns)
        target = np.asarray(target, dtype=np.int8)
        n = len(target)
        if not np.isin(target, (C1, C2)).all():
            raise ValueError("target values must be 0 (C1) or 1 (C2)")
        codes = np.empty((n, len(names)), dtype=np.int32)
        vocab = []
        for j, name in enumerate(names):
            col = [str(v) for v in columns[name]]
            if len(col) != n:
                raise SchemaError(f"column {name!r} has {len(col)} values, target has {n}")
            codes[:, j], table = _intern(col)
            vocab.append(table)
        schema = [ColumnSchema(name, "categorical", j) for j, name in enumerate(names)]
        schema.append(ColumnSchema("label", "label", len(names)))
        schema.append(ColumnSchema("difficulty", "difficulty", len(names) + 1))
        labels = np.where(target == C2, "attack", NORMAL_LABEL).astype(object)
        return cls(tuple(schema), np.zeros((n, 0)), codes, tuple(vocab), target,
                   labels, np.zeros(n, dtype=np.int64), role)

    def iter_rows(self):
        """Yield each row as the list of its 43 original field strings."""
        cat_idx = {name: i for i, name in enumerate(self.categorical_names)}
        num_idx = {name: i for i, name in enumerate(self.numeric_names)}
        vocab = self.vocab
        for r in range(self.n_rows):
            cells = []
            for col in self.schema:
                if col.kind == "categorical":
                    i = cat_idx[col.name]
                    cells.append(vocab[i][self.codes[r, i]])
                elif col.kind == "numeric":
                    cells.append(_format_number(self.numeric[r, num_idx[col.name]]))
                elif col.kind == "label":
                    cells.append(self.labels[r])
                else:
                    cells.append(str(int(self.difficulty[r])))
            yield cells


def _format_number(x: float) -> str:
    x = float(x)
    if x.is_integer() and abs(x) < 2**53:
        return str(int(x))
    return repr(x)


def _intern(column: list[str]) -> tuple[np.ndarray, tuple[str, ...]]:
    table: dict[str, int] = {}
    codes = np.empty(len(column), dtype=np.int32)
    for r, value in enumerate(column):
        code = table.get(value)
        if code is None:
            code = table[value] = len(table)
        codes[r] = code
    return codes, tuple(table)


def parse_lines(lines, role="train", source=None) -> Dataset:
    """Parse NSL-KDD records from an iterable of text lines."""
    schema = nslkdd_schema()
    records = []
    for lineno, fields in enumerate(csv.reader(lines), start=1):
        if not fields or (len(fields) == 1 and not fields[0].strip()):
            continue
        if len(fields) != N_FIELDS:
            raise ParseError(
                f"expected {N_FIELDS} comma-separated fields, got {len(fields)}",
                source, lineno,
            )
        records.append((lineno, [f.strip() for f in fields]))
    if not records:
        raise ParseError("no records found", source)

    num_pos = [c.position for c in schema if c.kind == "numeric"]
    cat_pos = [c.position for c in schema if c.kind == "categorical"]
    label_pos = N_FIELDS - 2

    cells = np.array([f for _, f in records], dtype=object)
    try:
        numeric = cells[:, num_pos].astype(np.float64)
        difficulty = cells[:, label_pos + 1].astype(np.int64)
    except ValueError:
        # slow path, only to locate the offending line
        for lineno, fields in records:
            for pos in num_pos + [label_pos + 1]:
                try:
                    float(fields[pos]) if pos != label_pos + 1 else int(fields[pos])
                except ValueError:
                    raise ParseError(
                        f"field {pos + 1} ({schema[pos].name}) is not a number: "
                        f"{fields[pos]!r}", source, lineno,
                    ) from None
        raise

    codes = np.empty((len(records), len(cat_pos)), dtype=np.int32)
    vocab = []
    for j, pos in enumerate(cat_pos):
        codes[:, j], table = _intern(list(cells[:, pos]))
        vocab.append(table)

    labels = cells[:, label_pos].astype(str).astype(object)
    target = (labels != NORMAL_LABEL).astype(np.int8)
    return Dataset(
        schema=schema,
        numeric=numeric,
        codes=codes,
        vocab=tuple(vocab),
        target=target,
        labels=labels,
        difficulty=difficulty,
        role=role,
        source=None if source is None else str(source),
    )


def parse_nslkdd(path, role="train") -> Dataset:
    """Read an NSL-KDD partition (KDDTrain+, KDDTest+, ...) from ``path``."""
    if role not in ("train", "test"):
        raise ValueError(f"role must be 'train' or 'test', got {role!r}")
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        return parse_lines(fh, role=role, source=path)


def write_nslkdd(ds: Dataset, path_or_buffer) -> None:
    """Write ``ds`` back in the 43-field NSL-KDD format."""
    if isinstance(path_or_buffer, (str, Path)):
        with open(path_or_buffer, "w", newline="", encoding="utf-8") as fh:
            write_nslkdd(ds, fh)
        return
    writer = csv.writer(path_or_buffer, lineterminator="\n")
    writer.writerows(ds.iter_rows())


def to_csv_text(ds: Dataset) -> str:
    buf = io.StringIO()
    write_nslkdd(ds, buf)
    return buf.getvalue()


@dataclass(frozen=True)
class BalanceReport:
    n_rows: int
    frac_c1: float
    frac_c2: float
    cardinality: dict[str, int]

    @property
    def frac_normal(self) -> float:
        return self.frac_c1

    @property
    def frac_attack(self) -> float:
        return self.frac_c2


def balance_report(ds: Dataset) -> BalanceReport:
    if ds.n_rows == 0:
        raise ValueError("balance report of an empty dataset")
    n_c2 = int(np.count_nonzero(ds.target == C2))
    n_c1 = ds.n_rows - n_c2
    card = {}
    for i, name in enumerate(ds.categorical_names):
        card[name] = int(np.unique(ds.codes[:, i]).size)
    return BalanceReport(ds.n_rows, n_c1 / ds.n_rows, n_c2 / ds.n_rows, card)


def unseen_categories(train: Dataset, test: Dataset, variable: str) -> frozenset[str]:
    """Categories of ``variable`` that occur in ``test`` but never in ``train``."""
    seen = set(np.unique(train.categories(variable)))
    return frozenset(set(np.unique(test.categories(variable))) - seen)


def stratified_subsample(ds: Dataset, fraction: float, seed: int = 0) -> Dataset:
    """Seeded per-class subsample keeping file order among the kept rows."""
    if not 0 < fraction <= 1:
        raise ValueError("subsample fraction must lie in (0, 1]")
    if fraction == 1:
        return ds
    rng = np.random.default_rng(seed)
    keep = []
    for cls in (C1, C2):
        idx = np.flatnonzero(ds.target == cls)
        if idx.size == 0:
            continue
        m = max(1, int(round(fraction * idx.size)))
        keep.append(rng.choice(idx, size=m, replace=False))
    return ds.take(np.sort(np.concatenate(keep)))


def bundled_path(name: str) -> Path:
    """Path of a bundled fixture file, e.g. ``bundled_path("mini_kdd_train.txt")``."""
    return Path(__file__).with_name("data") / name


def load_mini_kdd() -> tuple[Dataset, Dataset]:
    """The small NSL-KDD-format fixture shipped with the package."""
    return (
        parse_nslkdd(bundled_path("mini_kdd_train.txt"), "train"),
        parse_nslkdd(bundled_path("mini_kdd_test.txt"), "test"),
    )
