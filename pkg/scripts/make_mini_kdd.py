"""Regenerate the bundled mini NSL-KDD fixture.

The fixture is synthetic: it follows the 43-field KDDTrain+/KDDTest+ layout
and mimics the rough class/category structure of the real data (neptune
SYN floods on private/S0, smurf on icmp ecr_i, normal http/SF, ...), but no
row is copied from the public NSL-KDD files. The test split carries two
services that never occur in the train split.

    python scripts/make_mini_kdd.py
"""
from pathlib import Path

import numpy as np

from catpca.data import FEATURES

OUT = Path(__file__).resolve().parents[1] / "src" / "catpca" / "data"

# (label, protocol, services, flags, weight)
TRAIN_PROFILES = [
    ("normal", "tcp", ["http", "smtp", "ftp_data", "domain_u", "telnet", "ftp"], ["SF"], 40),
    ("normal", "udp", ["domain_u", "ntp_u", "private"], ["SF"], 10),
    ("normal", "icmp", ["eco_i", "ecr_i"], ["SF"], 4),
    ("normal", "tcp", ["http", "private"], ["REJ", "RSTO", "S1"], 6),
    ("neptune", "tcp", ["private", "telnet", "ftp_data", "http", "smtp"], ["S0", "REJ"], 28),
    ("smurf", "icmp", ["ecr_i"], ["SF"], 8),
    ("satan", "tcp", ["private", "telnet", "ftp"], ["REJ", "RSTO", "S0", "RSTR"], 8),
    ("portsweep", "tcp", ["private", "ftp", "telnet"], ["RSTR", "REJ", "SH"], 6),
    ("ipsweep", "icmp", ["eco_i"], ["SF"], 5),
    ("back", "tcp", ["http"], ["SF", "RSTR"], 4),
    ("guess_passwd", "tcp", ["telnet"], ["RSTO", "SF"], 2),
]
TEST_EXTRA = [
    ("mscan", "tcp", ["aol", "private"], ["S0", "REJ"], 4),
    ("normal", "tcp", ["http_8001", "http"], ["SF"], 3),
]


def _rows(rng, profiles, n):
    weights = np.array([p[-1] for p in profiles], dtype=float)
    picks = rng.choice(len(profiles), size=n, p=weights / weights.sum())
    out = []
    for k in picks:
        label, proto, services, flags, _ = profiles[k]
        attack = label != "normal"
        row = {name: 0 for name in FEATURES}
        row["protocol_type"] = proto
        row["service"] = services[rng.integers(len(services))]
        row["flag"] = flags[rng.integers(len(flags))]
        row["duration"] = int(rng.integers(0, 3) if attack else rng.integers(0, 40))
        row["src_bytes"] = int(rng.integers(0, 60) if attack else rng.integers(100, 3000))
        row["dst_bytes"] = int(0 if attack else rng.integers(0, 9000))
        row["logged_in"] = int(not attack and row["service"] in ("http", "ftp", "telnet", "smtp"))
        row["count"] = int(rng.integers(100, 500) if attack else rng.integers(1, 30))
        row["srv_count"] = int(rng.integers(1, 40))
        s0 = row["flag"] == "S0"
        rej = row["flag"] in ("REJ", "RSTO", "RSTR")
        row["serror_rate"] = row["srv_serror_rate"] = 1.0 if s0 else 0.0
        row["rerror_rate"] = row["srv_rerror_rate"] = 1.0 if rej else 0.0
        same = round(float(rng.uniform(0.0, 0.2) if attack else rng.uniform(0.8, 1.0)), 2)
        row["same_srv_rate"] = same
        row["diff_srv_rate"] = round(1.0 - same, 2) if attack else round(float(rng.uniform(0, 0.1)), 2)
        row["dst_host_count"] = int(rng.integers(1, 256))
        row["dst_host_srv_count"] = int(rng.integers(1, 256))
        row["dst_host_same_srv_rate"] = round(float(rng.uniform(0, 1)), 2)
        row["dst_host_diff_srv_rate"] = round(float(rng.uniform(0, 0.3)), 2)
        row["dst_host_serror_rate"] = row["serror_rate"]
        row["dst_host_rerror_rate"] = row["rerror_rate"]
        difficulty = int(rng.integers(5, 22))
        out.append([str(row[name]) for name in FEATURES] + [label, str(difficulty)])
    return out


def _ensure_shared(rows_a, rows_b, col):
    """Make sure both splits see the same set of values in column ``col``."""
    va = {r[col] for r in rows_a}
    vb = {r[col] for r in rows_b}
    assert va == vb, (col, va ^ vb)


def main(n_train=120, n_test=80, seed=20211):
    rng = np.random.default_rng(seed)
    for attempt in range(1000):
        train = _rows(rng, TRAIN_PROFILES, n_train)
        test = _rows(rng, TRAIN_PROFILES + TEST_EXTRA, n_test)
        p = FEATURES.index("protocol_type")
        f = FEATURES.index("flag")
        s = FEATURES.index("service")
        ok = (
            {r[p] for r in train} == {r[p] for r in test}
            and {r[f] for r in train} == {r[f] for r in test}
            and {"aol", "http_8001"} <= {r[s] for r in test}
        )
        if ok:
            break
    else:
        raise RuntimeError("could not draw a fixture with shared protocol/flag sets")
    _ensure_shared(train, test, p)
    _ensure_shared(train, test, f)
    for name, rows in (("mini_kdd_train.txt", train), ("mini_kdd_test.txt", test)):
        (OUT / name).write_text("".join(",".join(r) + "\n" for r in rows))
        print(f"wrote {OUT / name} ({len(rows)} rows)")


if __name__ == "__main__":
    main()
