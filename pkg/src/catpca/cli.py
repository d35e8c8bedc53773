"""Command-line entry point: ``catpca {inspect,encode,bench,grid,report}``."""
from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import replace
from pathlib import Path

import yaml

from . import __version__
from . import classifiers as clf
from . import grid, serialize
from .baselines import DEFAULT_PARAMS, SCHEMES, fit_baseline
from .data import ParseError, balance_report, parse_nslkdd, unseen_categories
from .proposed import fit as fit_proposed

EXIT_OK, EXIT_ERROR, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def inspect_report(train, test) -> str:
    lines = []
    for name, ds in (("train", train), ("test", test)):
        rep = balance_report(ds)
        lines.append(f"[{name}] {Path(ds.source).name if ds.source else ''}".rstrip())
        lines.append(f"  rows: {rep.n_rows}")
        lines.append(f"  normal (C1): {100 * rep.frac_c1:.2f}%  attack (C2): {100 * rep.frac_c2:.2f}%")
        card = ", ".join(f"{k}={v}" for k, v in rep.cardinality.items())
        lines.append(f"  cardinality: {card}")
    lines.append("[unseen in train]")
    for var in train.categorical_names:
        unseen = sorted(unseen_categories(train, test, var))
        shown = ", ".join(unseen) if unseen else "-"
        lines.append(f"  {var}: {len(unseen)} ({shown})")
    return "\n".join(lines) + "\n"


def _parse_params(items, scheme):
    params = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--param expects key=value, got {item!r}")
        params[key.strip()] = yaml.safe_load(value)
    unknown = set(params) - set(DEFAULT_PARAMS.get(scheme, {}))
    if unknown:
        raise UsageError(f"{scheme}: unknown parameter(s) {sorted(unknown)}")
    return params


def _fit_encoder(args, train):
    if args.scheme == "proposed":
        if args.threshold is None or args.k is None:
            raise UsageError("proposed encoder needs --threshold (percent) and --k")
        if not 0 <= args.threshold <= 50:
            raise UsageError("--threshold is a percentage in [0, 50]")
        return fit_proposed(train, args.threshold / 100.0, args.k)
    if args.scheme not in SCHEMES:
        raise UsageError(f"unknown scheme {args.scheme!r}")
    return fit_baseline(train, args.scheme, **_parse_params(args.param, args.scheme))


def cmd_inspect(args) -> int:
    train = parse_nslkdd(args.train, "train")
    test = parse_nslkdd(args.test, "test")
    sys.stdout.write(inspect_report(train, test))
    return EXIT_OK


def cmd_encode(args) -> int:
    train = parse_nslkdd(args.train, "train")
    enc = _fit_encoder(args, train)
    if args.input is None or Path(args.input).resolve() == Path(args.train).resolve():
        ds, training = train, True
    else:
        ds, training = parse_nslkdd(args.input, "test"), False
    X = enc.transform(ds, training=training)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="", encoding="utf-8") as fh:
        fh.write(grid.header_line(args.seed))
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(enc.column_names)
        for row in X:
            w.writerow([f"{v:.17g}" for v in row])
    serialize.dump(enc, out.with_suffix(".encoder.json"))
    print(f"wrote {out} ({X.shape[0]} rows x {X.shape[1]} columns)")
    return EXIT_OK


def cmd_bench(args) -> int:
    train = parse_nslkdd(args.train, "train")
    test = parse_nslkdd(args.test, "test")
    if args.scheme == "proposed":
        if args.threshold is None or args.k is None:
            raise UsageError("proposed encoder needs --threshold (percent) and --k")
        spec = grid.GridSpec(thresholds=(args.threshold,), pc_counts=(args.k,), encoders=(),
                             classifiers=_classifier_specs(args.classifier), seed=args.seed,
                             allow_any_threshold=True)
    else:
        enc = grid.EncoderSpec(args.scheme, _parse_params(args.param, args.scheme))
        spec = grid.GridSpec(thresholds=(), pc_counts=(), encoders=(enc,),
                             classifiers=_classifier_specs(args.classifier), seed=args.seed)
    result = grid.run_grid(spec, train, test)
    text = grid.records_csv(result.records, args.seed)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return EXIT_OK


def _classifier_specs(kinds):
    kinds = kinds or list(clf.KINDS)
    try:
        return tuple(grid.ClassifierSpec(k) for k in kinds)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_grid(args) -> int:
    try:
        spec = grid.load_config(args.config)
        if args.sort:
            spec = grid.with_sort(spec, args.sort)
        if args.n_jobs:
            spec = replace(spec, n_jobs=args.n_jobs)
    except (ValueError, OSError) as exc:
        print(f"config error ({args.config}): {exc}", file=sys.stderr)
        return EXIT_ERROR
    out_dir = Path(args.out) if args.out else Path(args.config).parent / "grid_out"
    result = grid.run_grid(spec)
    grid.write_outputs(result, spec, out_dir)
    sys.stdout.write(grid.summary_text(result, spec))
    print(f"outputs in {out_dir}")
    return EXIT_OK


def cmd_report(args) -> int:
    records = grid.read_records_csv(args.records)
    board = grid.leaderboard(records, args.sort)
    text = grid.leaderboard_csv(board, args.sort)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="catpca",
        description="Conditional-probability + PCA category encoding benchmark for NSL-KDD data.",
    )
    p.add_argument("--version", action="version", version=f"catpca {__version__}")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("inspect", help="row counts, class balance, cardinalities, unseen categories")
    s.add_argument("--train", required=True)
    s.add_argument("--test", required=True)
    s.set_defaults(func=cmd_inspect)

    threshold_help = ("threshold in percent (e.g. 1.87); converted to the fraction 0.0187 "
                      "internally")
    schemes = ("proposed",) + SCHEMES

    s = sub.add_parser("encode", help="fit an encoder on the train split and encode a file")
    s.add_argument("--train", required=True)
    s.add_argument("--input", help="file to encode (default: the train file itself)")
    s.add_argument("--scheme", required=True, choices=schemes)
    s.add_argument("--threshold", type=float, help=threshold_help)
    s.add_argument("--k", type=int, help="number of principal components (proposed encoder)")
    s.add_argument("--param", action="append", metavar="KEY=VALUE",
                   help="baseline parameter, e.g. base=3 or n_components=8")
    s.add_argument("--out", required=True, help="output CSV; the fitted encoder JSON goes next to it")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_encode)

    s = sub.add_parser("bench", help="evaluate one encoder configuration against classifiers")
    s.add_argument("--train", required=True)
    s.add_argument("--test", required=True)
    s.add_argument("--scheme", required=True, choices=schemes)
    s.add_argument("--threshold", type=float, help=threshold_help)
    s.add_argument("--k", type=int)
    s.add_argument("--param", action="append", metavar="KEY=VALUE")
    s.add_argument("--classifier", action="append", choices=clf.KINDS,
                   help="repeatable; default: all")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", help="also write the records CSV here")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("grid", help="run a benchmark sweep described by a YAML config")
    s.add_argument("config")
    s.add_argument("--out", help="output directory (default: grid_out next to the config)")
    s.add_argument("--sort", choices=grid.SORT_METRICS,
                   help="leaderboard metric (default: config value, else harmonic_accuracy)")
    s.add_argument("--n-jobs", type=int, help="worker processes (cells are independent)")
    s.set_defaults(func=cmd_grid)

    s = sub.add_parser("report", help="leaderboard from an existing records.csv")
    s.add_argument("records")
    s.add_argument("--sort", choices=grid.SORT_METRICS, default="harmonic_accuracy")
    s.add_argument("--out")
    s.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
