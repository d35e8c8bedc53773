"""Numbered acceptance criteria.

Each test carries an ``acceptance`` marker; the terminal summary prints one
PASS/FAIL/SKIP line per criterion. Criteria 1-7 need the public NSL-KDD
files: point ``NSLKDD_DIR`` at a directory holding ``KDDTrain+.txt`` and
``KDDTest+.txt``. Without them those criteria are skipped, never faked.
"""
import filecmp
import os
import time
from pathlib import Path

import numpy as np
import pytest

from catpca import classifiers as clf
from catpca.baselines import SCHEMES, fit_baseline
from catpca.classifiers import AdaBoost, DecisionTree, RandomForest, logistic_loss_grad
from catpca.cli import main as cli_main
from catpca.data import Dataset, balance_report, parse_nslkdd, unseen_categories
from catpca.grid import DEFAULT_THRESHOLDS, PROPOSED, ClassifierSpec, EncoderSpec, GridSpec, run_grid
from catpca.metrics import auc, harmonic_avg, mse_to_ideal_accuracy, mse_to_ideal_auc
from catpca.proposed import fit as fit_proposed
from catpca.proposed import fit_pca, indicator_states
from catpca.stats import fit_stats
from conftest import REPO
from test_classifiers import and_toys, stump_toys
from test_metrics import pairwise_auc, random_instances
from test_proposed import brute_force_pca, rule_oracle


def _nslkdd_dir():
    d = os.environ.get("NSLKDD_DIR")
    if not d:
        return None
    d = Path(d)
    if (d / "KDDTrain+.txt").is_file() and (d / "KDDTest+.txt").is_file():
        return d
    return None


NSLKDD = _nslkdd_dir()
needs_data = pytest.mark.skipif(
    NSLKDD is None, reason="NSL-KDD files not available (set NSLKDD_DIR)")


@pytest.fixture(scope="module")
def kdd():
    t0 = time.perf_counter()
    train = parse_nslkdd(NSLKDD / "KDDTrain+.txt", "train")
    test = parse_nslkdd(NSLKDD / "KDDTest+.txt", "test")
    return train, test, time.perf_counter() - t0


@pytest.fixture(scope="module")
def full_sweep(kdd):
    train, test, _ = kdd
    return run_grid(GridSpec(), train, test)


def measured(record_property, text):
    record_property("measured", text)


# --- dataset level -----------------------------------------------------------

@needs_data
@pytest.mark.nslkdd
@pytest.mark.acceptance(1, "ingestion row counts 125973 / 22544, < 10 s")
def test_c01_ingestion(kdd, record_property):
    train, test, seconds = kdd
    measured(record_property, f"{train.n_rows}/{test.n_rows} rows in {seconds:.1f} s")
    assert (train.n_rows, test.n_rows) == (125973, 22544)
    assert seconds < 10


@needs_data
@pytest.mark.nslkdd
@pytest.mark.acceptance(2, "class balance within 0.01 percentage points")
def test_c02_balance(kdd, record_property):
    train, test, _ = kdd
    tr, te = balance_report(train), balance_report(test)
    measured(record_property, f"train {100 * tr.frac_attack:.4f}/{100 * tr.frac_normal:.4f}, "
                              f"test {100 * te.frac_attack:.4f}/{100 * te.frac_normal:.4f}")
    for got, want in ((tr.frac_attack, 46.54), (tr.frac_normal, 53.46),
                      (te.frac_attack, 56.92), (te.frac_normal, 43.08)):
        assert abs(100 * got - want) <= 0.01


@needs_data
@pytest.mark.nslkdd
@pytest.mark.acceptance(3, "encoder output dimensionality table")
def test_c03_dimensions(kdd, record_property):
    train, _, _ = kdd
    want = {"one_hot": 84, "sum": 81, "helmert": 81, "backward_difference": 81,
            "polynomial": 81, "binary": 13, "base_n": 13, "hashing": 8}
    dims = {s: fit_baseline(train, s).output_dim for s in SCHEMES}
    for s in SCHEMES:
        assert dims[s] == want.get(s, 3), s
    widths = set()
    for t in DEFAULT_THRESHOLDS:
        for k in range(1, 7):
            try:
                widths.add(fit_proposed(train, t / 100, k).output_dim)
            except ValueError:
                # a threshold that leaves no usable component produces no cell
                continue
    measured(record_property, f"proposed widths {sorted(widths)}")
    assert widths and min(widths) >= 1 and max(widths) <= 6


@needs_data
@pytest.mark.nslkdd
@pytest.mark.acceptance(4, "unseen categories only in service")
def test_c04_unseen(kdd, record_property):
    train, test, _ = kdd
    service = unseen_categories(train, test, "service")
    measured(record_property, f"service unseen: {sorted(service)}")
    assert len(service) >= 1
    assert unseen_categories(train, test, "protocol_type") == frozenset()
    assert unseen_categories(train, test, "flag") == frozenset()


# --- benchmark reproduction --------------------------------------------------

@needs_data
@pytest.mark.nslkdd
@pytest.mark.slow
@pytest.mark.acceptance(5, "proposed + linear SVM, Thre 1.87, K=3: harmonic 90.62 +- 1.5")
def test_c05_svm_harmonic(kdd, record_property):
    train, test, _ = kdd
    spec = GridSpec(thresholds=(1.87,), pc_counts=(3,), encoders=(),
                    classifiers=(ClassifierSpec("linear_svm"),))
    (r,) = run_grid(spec, train, test).records
    measured(record_property, f"train {r.train_accuracy:.4f}, test {r.test_accuracy:.4f}, "
                              f"harmonic {r.harmonic_accuracy:.4f}")
    assert abs(r.harmonic_accuracy - 90.62) <= 1.5


@needs_data
@pytest.mark.nslkdd
@pytest.mark.slow
@pytest.mark.acceptance(6, "proposed + linear SVM best test accuracy >= 87.5")
def test_c06_svm_best_test(kdd, record_property):
    train, test, _ = kdd
    spec = GridSpec(encoders=(), classifiers=(ClassifierSpec("linear_svm"),))
    result = run_grid(spec, train, test)
    best = max((r for r in result.records if r.ok), key=lambda r: r.test_accuracy)
    measured(record_property, f"best test {best.test_accuracy:.4f} at "
                              f"Thre({best.threshold_pct:g}), PCs({best.k})")
    assert best.test_accuracy >= 87.5


@needs_data
@pytest.mark.nslkdd
@pytest.mark.slow
@pytest.mark.acceptance(7, "proposed ranks above all baselines but polynomial (ties 0.3)")
def test_c07_ordering(full_sweep, record_property):
    best = {r.encoder: r.harmonic_accuracy for r, _ in full_sweep.leaderboard}
    ours = best[PROPOSED]
    beaten_by = [e for e, v in best.items()
                 if e not in (PROPOSED, "Polynomial") and v > ours + 0.3]
    measured(record_property, f"proposed {ours:.4f}; above it: {beaten_by or 'none'}")
    assert not beaten_by


# --- property based ----------------------------------------------------------

@pytest.mark.acceptance(8, "p1 + p2 = 1 within 1e-12 on 1000 random toy datasets")
def test_c08_conservation(record_property):
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 200))
        cats = rng.integers(0, int(rng.integers(1, 30)), n).astype(str)
        ds = Dataset.from_categorical({"v": cats}, rng.integers(0, 2, n))
        s = fit_stats(ds, "v")
        worst = max(worst, float(np.abs(s.p1 + s.p2 - 1).max()))
    measured(record_property, f"max |p1+p2-1| = {worst:.1e}")
    assert worst <= 1e-12


@pytest.mark.acceptance(9, "indicator trichotomy matches the rule oracle on an exhaustive grid")
def test_c09_trichotomy(record_property):
    ks = np.arange(0, 2001)
    p1 = ks / 2000
    p2 = (2000 - ks) / 2000
    thresholds = np.unique(np.r_[np.linspace(0, 0.5, 1001), p1[p1 <= 0.5]])
    n = 0
    for t in thresholds:
        got = indicator_states(p1, p2, t)
        assert (got.sum(axis=1) <= 1).all()
        want = np.array([rule_oracle(a, b, t) for a, b in zip(p1, p2)])
        assert (got == want).all()
        n += len(p1)
    measured(record_property, f"{n} (p1, threshold) pairs")


@pytest.mark.acceptance(10, "PCA orthonormality, oracle agreement, reconstruction, decorrelation")
def test_c10_pca(record_property):
    rng = np.random.default_rng(10)
    worst = dict(orth=0.0, oracle=0.0, recon=0.0, corr=0.0)
    for _ in range(100):
        X = (rng.random((50, 6)) < rng.uniform(0.1, 0.9, 6)).astype(float)
        model = fit_pca(X)
        V = model.components
        worst["orth"] = max(worst["orth"], np.abs(V @ V.T - np.eye(len(V))).max())
        cov, evals, evecs = brute_force_pca(X)
        keep = evals > 1e-12 * evals[0]
        err = np.abs(model.explained_variance - evals[keep]).max()
        err = max(err, np.abs(V.T @ np.diag(model.explained_variance) @ V - cov).max())
        for i, v in enumerate(V):
            if np.abs(np.delete(evals, i) - evals[i]).min() > 1e-6:
                err = max(err, abs(abs(v @ evecs[i]) - 1))
        worst["oracle"] = max(worst["oracle"], err)
        Z = model.project(X)
        worst["recon"] = max(worst["recon"], np.abs(model.reconstruct(Z) - (X - X.mean(0))).max())
        C = np.corrcoef(Z, rowvar=False)
        worst["corr"] = max(worst["corr"], np.abs(C[~np.eye(len(C), dtype=bool)]).max())
    measured(record_property, ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))
    assert worst["orth"] <= 1e-9
    assert worst["oracle"] <= 1e-8
    assert worst["recon"] <= 1e-9
    assert worst["corr"] <= 1e-8


@pytest.mark.acceptance(11, "AUC equals the pairwise oracle; monotone invariance")
def test_c11_auc(record_property):
    worst = 0.0
    for scores, truth in random_instances(1000, seed=11):
        a = auc(scores, truth)
        worst = max(worst, abs(a - pairwise_auc(scores, truth)))
        assert auc(np.exp(scores), truth) == a
        assert auc(2.5 * scores + 1.0, truth) == a
    measured(record_property, f"max deviation {worst:.1e}")
    assert worst <= 1e-12


@pytest.mark.acceptance(12, "trade-off metric arithmetic")
def test_c12_tradeoff(record_property):
    h = harmonic_avg(92.18, 89.11)
    measured(record_property, f"harmonic(92.18, 89.11) = {h:.4f}")
    assert mse_to_ideal_accuracy(100, 100) == 0
    assert mse_to_ideal_accuracy(90, 80) == pytest.approx(250, abs=1e-12)
    assert mse_to_ideal_auc(1, 1) == 0
    assert mse_to_ideal_auc(0.9, 0.8) == pytest.approx(0.025, abs=1e-15)
    for x in (0.5, 1.0, 37.25, 99.9):
        assert harmonic_avg(x, x) == pytest.approx(x, rel=1e-15)
    assert abs(h - 90.6161) <= 0.005


@pytest.mark.acceptance(13, "mini grid config twice gives byte-identical files")
def test_c13_determinism(tmp_path, record_property):
    config = str(REPO / "configs" / "mini_kdd.yaml")
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli_main(["grid", config, "--out", str(a)]) == 0
    assert cli_main(["grid", config, "--out", str(b)]) == 0
    names = sorted(p.name for p in a.iterdir())
    match, mismatch, errors = filecmp.cmpfiles(a, b, names, shallow=False)
    measured(record_property, f"{len(match)} files identical")
    assert not mismatch and not errors and len(match) >= 5


@pytest.mark.acceptance(14, "LR gradient, forest of one, AdaBoost weighted error on separable toys")
def test_c14_classifier_checks(record_property):
    rng = np.random.default_rng(14)
    X = rng.normal(size=(80, 4))
    y = (X @ rng.normal(size=4) + 0.3 * rng.normal(size=80) > 0).astype(int)
    w = rng.uniform(0.5, 2, 80)
    worst = 0.0
    for _ in range(20):
        params = rng.normal(size=5)
        _, g = logistic_loss_grad(params, X, y, w, 1.0)
        fd = np.array([(logistic_loss_grad(params + e, X, y, w, 1.0)[0]
                        - logistic_loss_grad(params - e, X, y, w, 1.0)[0]) / 2e-6
                       for e in 1e-6 * np.eye(5)])
        worst = max(worst, (np.abs(fd - g) / np.maximum(np.abs(g), 1e-8)).max())
    assert worst <= 1e-5

    for seed in range(5):
        forest = RandomForest(1, max_depth=5, max_features=2, bootstrap=False, seed=seed).fit(X, y)
        tree = DecisionTree(max_depth=5, max_features=2, seed=seed).fit(X, y)
        assert (forest.decision_function(X) == tree.decision_function(X)).all()

    n_toys = 0
    for Xt, yt in [*stump_toys(), *and_toys()]:
        model = AdaBoost(n_estimators=50, max_depth=1).fit(Xt, yt)
        assert (model.estimator_errors_ < 0.5).all()
        ys = 2 * yt - 1
        F, losses = np.zeros(len(yt)), [1.0]
        for tree, alpha in zip(model.estimators_, model.estimator_weights_):
            F += 0.5 * alpha * (2 * tree.predict(Xt) - 1)
            losses.append(np.mean(np.exp(-ys * F)))
        assert all(b <= a + 1e-12 for a, b in zip(losses, losses[1:]))
        assert (model.predict(Xt) == yt).all()
        n_toys += 1
    measured(record_property, f"grad rel err {worst:.1e}; {n_toys} boosting toys")
