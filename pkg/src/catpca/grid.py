"""Benchmark harness: threshold x PC-count sweep plus baseline encoders.

Every (encoder configuration, classifier) pair is one independent cell.
A cell that raises is recorded with ``status="failed"`` and the sweep goes
on. Results come back in configuration order whatever order cells finish in.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from . import classifiers as clf
from .baselines import DEFAULT_PARAMS, LABELS as ENCODER_LABELS, SCHEMES, fit_baseline
from .data import Dataset, parse_nslkdd, stratified_subsample
from .metrics import RECORD_FIELDS, EvalRecord, accuracy, auc
from .proposed import fit as fit_proposed

DEFAULT_THRESHOLDS = (
    0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1, 1.87, 2, 3, 3.64, 5, 5.45,
    10, 11.9, 15, 20, 30, 40, 50,
)
PROPOSED = "Proposed"

SORT_METRICS = (
    "test_accuracy", "harmonic_accuracy", "mse_accuracy",
    "test_auc", "harmonic_auc", "mse_auc",
)
ASCENDING = {"mse_accuracy", "mse_auc"}


@dataclass(frozen=True)
class ClassifierSpec:
    kind: str
    label: str = ""
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in clf.KINDS:
            raise ValueError(f"unknown classifier {self.kind!r}; choose from {', '.join(clf.KINDS)}")
        if not self.label:
            object.__setattr__(self, "label", clf.LABELS[self.kind])
        clf.make(self.kind, **self.options)  # validates option names

    def as_config(self) -> dict:
        out = {"kind": self.kind, "label": self.label}
        out.update(self.options)
        return out


@dataclass(frozen=True)
class EncoderSpec:
    scheme: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown encoder {self.scheme!r}; choose from {', '.join(SCHEMES)}")
        unknown = set(self.params) - set(DEFAULT_PARAMS.get(self.scheme, {}))
        if unknown:
            raise ValueError(f"{self.scheme}: unexpected parameter(s) {sorted(unknown)}")

    @property
    def label(self) -> str:
        return ENCODER_LABELS[self.scheme]

    def as_config(self):
        return {"scheme": self.scheme, **self.params} if self.params else self.scheme


@dataclass(frozen=True)
class GridSpec:
    """Everything a sweep needs. Thresholds are percentages."""

    train_path: str | None = None
    test_path: str | None = None
    thresholds: tuple[float, ...] = DEFAULT_THRESHOLDS
    pc_counts: tuple[int, ...] = (1, 2, 3, 4, 5, 6)
    classifiers: tuple[ClassifierSpec, ...] = tuple(ClassifierSpec(k) for k in clf.KINDS)
    encoders: tuple[EncoderSpec, ...] = tuple(EncoderSpec(s) for s in SCHEMES)
    seed: int = 0
    subsample: float | None = None
    sort_metric: str = "harmonic_accuracy"
    allow_any_threshold: bool = False
    n_jobs: int = 1

    def validate(self, n_variables: int = 3) -> None:
        if not self.classifiers:
            raise ValueError("classifiers: at least one classifier is required")
        for t in self.thresholds:
            lo, hi = (0.0, 50.0) if self.allow_any_threshold else (0.01, 50.0)
            if not lo <= t <= hi:
                raise ValueError(f"thresholds: {t} outside [{lo}, {hi}] percent")
        for k in self.pc_counts:
            if not 1 <= k <= 2 * n_variables:
                raise ValueError(f"pc_counts: {k} outside [1, {2 * n_variables}]")
        if self.sort_metric not in SORT_METRICS:
            raise ValueError(f"sort_metric: choose from {', '.join(SORT_METRICS)}")
        if self.subsample is not None and not 0 < self.subsample <= 1:
            raise ValueError("subsample: fraction in (0, 1] expected")
        if self.n_jobs < 1:
            raise ValueError("n_jobs: must be >= 1")

    def as_config(self) -> dict:
        return {
            "train": self.train_path,
            "test": self.test_path,
            "thresholds": list(self.thresholds),
            "pc_counts": list(self.pc_counts),
            "classifiers": [c.as_config() for c in self.classifiers],
            "encoders": [e.as_config() for e in self.encoders],
            "seed": self.seed,
            "subsample": self.subsample,
            "sort_metric": self.sort_metric,
            "allow_any_threshold": self.allow_any_threshold,
            "n_jobs": self.n_jobs,
        }


CONFIG_KEYS = {
    "train", "test", "thresholds", "pc_counts", "classifiers", "encoders",
    "seed", "subsample", "sort_metric", "allow_any_threshold", "n_jobs",
}


def spec_from_config(cfg: dict, base_dir: Path | None = None) -> GridSpec:
    """Build a :class:`GridSpec` from a parsed config mapping.

    Relative dataset paths resolve against ``base_dir``.
    """
    if not isinstance(cfg, dict):
        raise ValueError("config must be a mapping of key: value pairs")
    unknown = set(cfg) - CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config key(s): {', '.join(sorted(unknown))}")

    def path(key):
        p = cfg.get(key)
        if p is None:
            return None
        p = Path(p)
        if base_dir is not None and not p.is_absolute():
            p = base_dir / p
        return str(p)

    kw = {"train_path": path("train"), "test_path": path("test")}
    try:
        if "thresholds" in cfg:
            kw["thresholds"] = tuple(float(t) for t in cfg["thresholds"])
        if "pc_counts" in cfg:
            kw["pc_counts"] = tuple(int(k) for k in cfg["pc_counts"])
    except (TypeError, ValueError) as exc:
        raise ValueError(f"thresholds/pc_counts: list of numbers expected ({exc})") from None
    if "classifiers" in cfg:
        specs = []
        for item in cfg["classifiers"]:
            if isinstance(item, str):
                specs.append(ClassifierSpec(item))
            else:
                item = dict(item)
                kind = item.pop("kind", None)
                if kind is None:
                    raise ValueError("classifiers: every block needs a 'kind'")
                label = item.pop("label", "")
                specs.append(ClassifierSpec(kind, label, item))
        kw["classifiers"] = tuple(specs)
    if "encoders" in cfg:
        encs = []
        for item in cfg["encoders"] or ():
            if isinstance(item, str):
                encs.append(EncoderSpec(item))
            else:
                item = dict(item)
                scheme = item.pop("scheme", None)
                if scheme is None:
                    raise ValueError("encoders: every block needs a 'scheme'")
                encs.append(EncoderSpec(scheme, item))
        kw["encoders"] = tuple(encs)
    for key, conv in (("seed", int), ("sort_metric", str), ("allow_any_threshold", bool), ("n_jobs", int)):
        if key in cfg:
            kw[key] = conv(cfg[key])
    if cfg.get("subsample") is not None:
        kw["subsample"] = float(cfg["subsample"])
    spec = GridSpec(**kw)
    spec.validate()
    return spec


def load_config(path) -> GridSpec:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        cfg = yaml.safe_load(fh)
    return spec_from_config(cfg, base_dir=path.parent)


# ---------------------------------------------------------------------------
# cell evaluation


def _compress(X, y=None):
    """Unique rows (with the label appended when given), counts and inverse map.

    Rows are compared bytewise, which is much faster than ``np.unique(axis=0)``
    on wide matrices; ``-0.0`` and ``0.0`` stay distinct, which only costs a
    little compression.
    """
    key = X if y is None else np.hstack([X, y[:, None].astype(np.float64)])
    key = np.ascontiguousarray(key, dtype=np.float64)
    rows = key.view(np.dtype((np.void, key.dtype.itemsize * key.shape[1]))).ravel()
    _, first, inverse, counts = np.unique(rows, return_index=True, return_inverse=True,
                                          return_counts=True)
    uniq = key[first]
    inverse = inverse.reshape(-1)
    if y is None:
        return uniq, counts.astype(np.float64), inverse
    return uniq[:, :-1], uniq[:, -1].astype(np.int8), counts.astype(np.float64), inverse


class _Compressed:
    """Train/test matrices reduced to weighted unique rows, built once per encoder."""

    def __init__(self, Xtr, ytr, Xte, yte):
        self.ytr, self.yte = ytr, yte
        self.Xu, self.yu, self.wu, self.inv_tr = _compress(Xtr, ytr)
        self.Xq, _, self.inv_te = _compress(Xte)

    def evaluate(self, kind, options, seed=0):
        model = clf.train(kind, self.Xu, self.yu, seed=seed, sample_weight=self.wu, **options)
        s_tr = model.decision_function(self.Xu)[self.inv_tr]
        s_te = model.decision_function(self.Xq)[self.inv_te]
        thr = model.decision_threshold
        return (
            accuracy((s_tr >= thr).astype(np.int8), self.ytr),
            accuracy((s_te >= thr).astype(np.int8), self.yte),
            auc(s_tr, self.ytr),
            auc(s_te, self.yte),
        )


def evaluate(kind, options, Xtr, ytr, Xte, yte, seed=0):
    """Train on (Xtr, ytr), score both splits.

    Identical rows are merged into one weighted row before training and
    scoring; all classifiers treat an integer weight exactly like repeated
    rows (the forest draws its bootstrap as multinomial counts).
    Returns ``(train_acc, test_acc, train_auc, test_auc)``.
    """
    return _Compressed(Xtr, ytr, Xte, yte).evaluate(kind, options, seed)


def _encoder_cells(job):
    """All classifier cells of one encoder configuration (runs in a worker)."""
    enc_kind, enc_arg, train, test, classifiers, seed = job
    label = PROPOSED if enc_kind == "proposed" else ENCODER_LABELS[enc_arg.scheme]
    thr_pct = k_req = None
    try:
        if enc_kind == "proposed":
            thr_pct, k_req = enc_arg
            enc = fit_proposed(train, thr_pct / 100.0, k_req)
        else:
            enc = fit_baseline(train, enc_arg.scheme, **enc_arg.params)
        Xtr = enc.transform(train, training=True)
        Xte = enc.transform(test)
        if Xtr.shape[1] == 0:
            raise ValueError("encoder produced no columns")
        data = _Compressed(Xtr, train.target.astype(np.int8), Xte, test.target.astype(np.int8))
    except Exception as exc:  # noqa: BLE001 - a failed cell must not abort the sweep
        return [EvalRecord.failed(label, c.label, f"{type(exc).__name__}: {exc}", thr_pct, k_req)
                for c in classifiers]
    out = []
    for c in classifiers:
        try:
            m = data.evaluate(c.kind, c.options, seed=seed)
            out.append(EvalRecord.from_metrics(label, c.label, *m, threshold_pct=thr_pct,
                                               k=k_req, output_dim=enc.output_dim))
        except Exception as exc:  # noqa: BLE001
            out.append(EvalRecord.failed(label, c.label, f"{type(exc).__name__}: {exc}", thr_pct, k_req))
    return out


@dataclass
class GridResult:
    records: list[EvalRecord]
    leaderboard: list[tuple[EvalRecord, str]]
    sort_metric: str

    @property
    def n_failed(self) -> int:
        return sum(not r.ok for r in self.records)


def load_datasets(spec: GridSpec) -> tuple[Dataset, Dataset]:
    if not spec.train_path or not spec.test_path:
        raise ValueError("train and test dataset paths are required")
    train = parse_nslkdd(spec.train_path, "train")
    test = parse_nslkdd(spec.test_path, "test")
    if spec.subsample is not None:
        train = stratified_subsample(train, spec.subsample, spec.seed)
        test = stratified_subsample(test, spec.subsample, spec.seed + 1)
    return train, test


def run_grid(spec: GridSpec, train: Dataset | None = None, test: Dataset | None = None) -> GridResult:
    """Evaluate every proposed-encoder cell and every baseline cell of ``spec``."""
    if train is None or test is None:
        train, test = load_datasets(spec)
    spec.validate(len(train.categorical_names))
    jobs = [("proposed", (t, k), train, test, spec.classifiers, spec.seed)
            for t in spec.thresholds for k in spec.pc_counts]
    jobs += [("baseline", e, train, test, spec.classifiers, spec.seed) for e in spec.encoders]
    if spec.n_jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(spec.n_jobs) as pool:
            chunks = list(pool.map(_encoder_cells, jobs))
    else:
        chunks = [_encoder_cells(j) for j in jobs]
    records = [r for chunk in chunks for r in chunk]
    board = leaderboard(records, spec.sort_metric) if any(r.ok for r in records) else []
    return GridResult(records, board, spec.sort_metric)


# ---------------------------------------------------------------------------
# leaderboard and reports


def _metric_key(rec: EvalRecord, metric: str) -> float:
    v = getattr(rec, metric)
    return v if metric in ASCENDING else -v


def _cell_tag(rec: EvalRecord) -> str:
    tag = rec.classifier
    if rec.threshold_pct is not None:
        tag += f"@Thre({rec.threshold_pct:g}),PCs({rec.k})"
    return tag


def leaderboard(records, sort_metric="harmonic_accuracy", tie_tol=1e-9):
    """Best record per encoder, best first.

    Returns ``(record, tied)`` pairs; ``tied`` lists the other cells of the
    same encoder whose metric equals the winner's within ``tie_tol``.
    """
    if sort_metric not in SORT_METRICS:
        raise ValueError(f"sort metric must be one of {', '.join(SORT_METRICS)}")
    records = [r for r in records if r.ok and not math.isnan(getattr(r, sort_metric))]
    if not records:
        raise ValueError("leaderboard of an empty record set")

    def order(r):
        return (_metric_key(r, sort_metric), r.encoder, r.classifier,
                -1.0 if r.threshold_pct is None else r.threshold_pct, r.k or 0)

    by_encoder: dict[str, list[EvalRecord]] = {}
    for r in records:
        by_encoder.setdefault(r.encoder, []).append(r)
    rows = []
    for enc, recs in by_encoder.items():
        recs = sorted(recs, key=order)
        best = recs[0]
        bv = getattr(best, sort_metric)
        tied = [_cell_tag(r) for r in recs[1:] if abs(getattr(r, sort_metric) - bv) <= tie_tol]
        rows.append((best, "; ".join(tied)))
    rows.sort(key=lambda row: order(row[0]))
    return rows


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return "nan" if math.isnan(v) else f"{v:.17g}"
    return str(v)


def header_line(seed: int) -> str:
    return f"# catpca {__version__} seed={seed}\n"


def records_csv(records, seed=0) -> str:
    buf = io.StringIO()
    buf.write(header_line(seed))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RECORD_FIELDS)
    for r in records:
        w.writerow([_fmt(getattr(r, f)) for f in RECORD_FIELDS])
    return buf.getvalue()


def read_records_csv(path) -> list[EvalRecord]:
    return parse_records_csv(Path(path).read_text(encoding="utf-8"))


def parse_records_csv(text: str) -> list[EvalRecord]:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    types = {f.name: f.type for f in fields(EvalRecord)}
    out = []
    for row in csv.DictReader(lines):
        kw = {}
        for name in RECORD_FIELDS:
            raw = row.get(name, "")
            t = str(types[name])
            if name in ("encoder", "classifier", "status", "error"):
                kw[name] = raw
            elif raw == "":
                kw[name] = None if "None" in t else float("nan")
            elif name in ("k", "output_dim"):
                kw[name] = int(raw)
            else:
                kw[name] = float(raw)
        out.append(EvalRecord(**kw))
    return out


def leaderboard_csv(board, sort_metric, seed=0) -> str:
    buf = io.StringIO()
    buf.write(header_line(seed))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("rank", "sort_metric", *RECORD_FIELDS, "tied"))
    for rank, (r, tied) in enumerate(board, start=1):
        w.writerow([rank, sort_metric, *[_fmt(getattr(r, f)) for f in RECORD_FIELDS], tied])
    return buf.getvalue()


def scatter_export(records, seed=0) -> dict[str, str]:
    """CSV texts for train-vs-test scatter plots, keyed by file name.

    Each of the two metric-family files starts with an ``ideal`` reference
    row at the perfect-score corner.
    """
    ok = [r for r in records if r.ok]
    out = {}
    for name, (a, b, ideal) in {
        "scatter_accuracy.csv": ("train_accuracy", "test_accuracy", 100.0),
        "scatter_auc.csv": ("train_auc", "test_auc", 1.0),
    }.items():
        buf = io.StringIO()
        buf.write(header_line(seed))
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("kind", "encoder", "classifier", a, b))
        w.writerow(("ideal", "", "", _fmt(ideal), _fmt(ideal)))
        for r in ok:
            w.writerow(("cell", r.encoder, r.classifier, _fmt(getattr(r, a)), _fmt(getattr(r, b))))
        out[name] = buf.getvalue()

    buf = io.StringIO()
    buf.write(header_line(seed))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("threshold_pct", "k", "output_dim", "classifier", "train_accuracy",
                "test_accuracy", "train_auc", "test_auc"))
    for r in ok:
        if r.encoder == PROPOSED:
            w.writerow((_fmt(r.threshold_pct), r.k, r.output_dim, r.classifier,
                        *[_fmt(getattr(r, f)) for f in ("train_accuracy", "test_accuracy", "train_auc", "test_auc")]))
    out["grid_scatter.csv"] = buf.getvalue()
    return out


def summary_text(result: GridResult, spec: GridSpec) -> str:
    n = len(result.records)
    lines = [
        f"catpca {__version__} grid summary",
        f"seed: {spec.seed}",
        f"cells: {n} ({n - result.n_failed} ok, {result.n_failed} failed)",
        f"sort metric: {result.sort_metric}",
        "",
        f"{'rank':>4}  {'encoder':<20} {'classifier':<8} {'hyper':<18} "
        f"{'train_acc':>9} {'test_acc':>9} {'harm_acc':>9} {'test_auc':>8}",
    ]
    for rank, (r, _) in enumerate(result.leaderboard, start=1):
        hyper = "" if r.threshold_pct is None else f"Thre({r.threshold_pct:g}),PCs({r.k})"
        lines.append(
            f"{rank:>4}  {r.encoder:<20} {r.classifier:<8} {hyper:<18} "
            f"{r.train_accuracy:9.4f} {r.test_accuracy:9.4f} {r.harmonic_accuracy:9.4f} {r.test_auc:8.4f}"
        )
    failed = [r for r in result.records if not r.ok]
    if failed:
        lines += ["", "failed cells:"]
        for r in failed:
            hyper = "" if r.threshold_pct is None else f" Thre({r.threshold_pct:g}),PCs({r.k})"
            lines.append(f"  {r.encoder}{hyper} / {r.classifier}: {r.error}")
    return "\n".join(lines) + "\n"


def write_outputs(result: GridResult, spec: GridSpec, out_dir) -> list[Path]:
    """Write records, leaderboard, scatter CSVs, summary and resolved config."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    files = {
        "records.csv": records_csv(result.records, spec.seed),
        "leaderboard.csv": leaderboard_csv(result.leaderboard, result.sort_metric, spec.seed),
        **scatter_export(result.records, spec.seed),
        "summary.txt": summary_text(result, spec),
        "config.resolved.yaml": header_line(spec.seed)
        + yaml.safe_dump(spec.as_config(), sort_keys=False),
    }
    written = []
    for name, text in files.items():
        p = out_dir / name
        p.write_text(text, encoding="utf-8")
        written.append(p)
    return written


def with_sort(spec: GridSpec, sort_metric: str) -> GridSpec:
    spec = replace(spec, sort_metric=sort_metric)
    spec.validate()
    return spec
