"""Regenerate the golden files under tests/golden/ from the bundled mini fixture.

Run from the repository root after an intentional behaviour change:

    python scripts/make_goldens.py
"""
import csv
from pathlib import Path

from catpca import classifiers as clf
from catpca.cli import inspect_report
from catpca.data import load_mini_kdd
from catpca.metrics import accuracy
from catpca.proposed import fit

OUT = Path(__file__).resolve().parents[1] / "tests" / "golden"
THRESHOLD, K = 0.0187, 3


def write_matrix(path, X, names):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        w.writerows([[f"{v:.17g}" for v in row] for row in X])


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    train, test = load_mini_kdd()
    (OUT / "inspect_mini.txt").write_text(inspect_report(train, test))

    enc = fit(train, THRESHOLD, K)
    Xtr, Xte = enc.transform(train), enc.transform(test)
    write_matrix(OUT / "mini_proposed_train.csv", Xtr, enc.column_names)
    write_matrix(OUT / "mini_proposed_test.csv", Xte, enc.column_names)

    with open(OUT / "mini_accuracy.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["classifier", "train_accuracy", "test_accuracy"])
        for kind in clf.KINDS:
            model = clf.train(kind, Xtr, train.target, seed=0)
            w.writerow([kind,
                        f"{accuracy(model.predict(Xtr), train.target):.17g}",
                        f"{accuracy(model.predict(Xte), test.target):.17g}"])
    print(f"goldens written to {OUT}")


if __name__ == "__main__":
    main()
