"""Versioned JSON documents for fitted encoders.

Floats are written with Python's shortest round-trip representation, so
``load(dump(enc))`` reproduces every parameter bit for bit.
"""
from __future__ import annotations

import json

import numpy as np

from .baselines import FittedBaseline
from .proposed import PCAModel, ProposedEncoder, Standardizer, ThresholdMap

FORMAT = "catpca-encoder"
VERSION = 1


def _floats(a):
    return [float(v) for v in np.asarray(a, dtype=np.float64).ravel()]


def encoder_to_dict(enc) -> dict:
    doc = {"format": FORMAT, "version": VERSION, "scheme": enc.scheme}
    if isinstance(enc, ProposedEncoder):
        pca = enc.pca
        doc.update({
            "threshold": enc.threshold,
            "k": enc.k,
            "k_requested": enc.k_requested,
            "variables": [
                {"name": var, "states": {cat: list(state) for cat, state in table.items()}}
                for var, table in zip(enc.threshold_map.variables, enc.threshold_map.tables)
            ],
            "pca": {
                "means": _floats(pca.means),
                "components": [_floats(row) for row in pca.components],
                "explained_variance": _floats(pca.explained_variance),
                "total_variance": pca.total_variance,
            },
            "standardizer": {
                "mean": _floats(enc.standardizer.mean),
                "std": _floats(enc.standardizer.std),
            },
        })
    elif isinstance(enc, FittedBaseline):
        body = enc.to_dict()
        body.pop("scheme")
        doc.update(body)
    else:
        raise TypeError(f"not a fitted encoder: {type(enc).__name__}")
    return doc


def encoder_from_dict(doc: dict):
    if doc.get("format") != FORMAT:
        raise ValueError(f"not a {FORMAT} document")
    if doc.get("version") != VERSION:
        raise ValueError(f"unsupported {FORMAT} version {doc.get('version')!r}")
    if doc["scheme"] != "proposed":
        return FittedBaseline.from_dict(doc)
    width = 2 * len(doc["variables"])
    tmap = ThresholdMap(
        float(doc["threshold"]),
        tuple(v["name"] for v in doc["variables"]),
        tuple({c: tuple(int(x) for x in s) for c, s in v["states"].items()} for v in doc["variables"]),
    )
    p = doc["pca"]
    comps = np.asarray(p["components"], dtype=np.float64).reshape(-1, width)
    pca = PCAModel(
        np.asarray(p["means"], dtype=np.float64),
        comps,
        np.asarray(p["explained_variance"], dtype=np.float64),
        float(p["total_variance"]),
    )
    s = doc["standardizer"]
    scaler = Standardizer(np.asarray(s["mean"], dtype=np.float64), np.asarray(s["std"], dtype=np.float64))
    return ProposedEncoder(tmap, pca, scaler, int(doc["k"]), int(doc["k_requested"]))


def dumps(enc) -> str:
    return json.dumps(encoder_to_dict(enc), indent=2, ensure_ascii=False) + "\n"


def loads(text: str):
    return encoder_from_dict(json.loads(text))


def dump(enc, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(enc))


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
