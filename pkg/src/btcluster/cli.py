"""Command-line entry point: ``btcluster {extract,cluster,evaluate,pipeline}``.

Exit status is 0 on success, 1 for bad input or files, 2 when an internal
consistency check fails.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

from .clustering import INIT_METHODS, KMeansConfig
from .dataset import LABELINGS, ingest
from .errors import InputError, InvariantError
from .evaluation import format_table, report_to_csv
from .features import METHODS
from .pipeline import (
    PipelineConfig,
    cluster_table,
    evaluate_labeled,
    extract_features,
    run_pipeline,
    zscore,
)
from .store import atomic_write_text, read_assignments, read_features, write_assignments, write_features

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


def cmd_extract(args):
    manifest = ingest(args.input, args.labeling)
    table = extract_features(manifest, args.method, workers=args.workers)
    if args.normalize:
        table = zscore(table)
    write_features(table, args.out)
    print(f"wrote {len(table)} {args.method} vectors to {args.out}")


def cmd_cluster(args):
    table = read_features(args.features)
    config = KMeansConfig(k=args.k, seed=args.seed, init=args.init, max_iterations=args.max_iter)
    model = cluster_table(table, config)
    write_assignments(
        args.out,
        [r.image_id for r in table.rows],
        [r.label for r in table.rows],
        model.assignments,
    )
    status = "converged" if model.converged else "stopped at max-iter"
    print(f"k={config.k}: {status} after {model.iterations_run} iterations, SSE {model.sse:.6g}")


def cmd_evaluate(args):
    rows = read_assignments(args.assignments)
    if not rows:
        raise InputError(f"{args.assignments}: no assignments")
    ids, labels, clusters = zip(*rows)
    report = evaluate_labeled(ids, labels, clusters)
    atomic_write_text(args.out, report_to_csv(report))
    sys.stdout.write(format_table(report))


def cmd_pipeline(args):
    config = PipelineConfig.from_file(args.config)
    if args.out_dir:
        config = dataclasses.replace(config, out_dir=args.out_dir)
    _, model, report = run_pipeline(config)
    sys.stdout.write(format_table(report, title=f"method={config.method} k={config.k} seed={config.seed}"))
    print(f"outputs in {Path(config.out_dir)}")


def build_parser():
    p = argparse.ArgumentParser(
        prog="btcluster",
        description="Cluster color images by color-moment or BTC features and score the clusters.",
    )
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("extract", help="compute a feature table for an image directory")
    e.add_argument("--input", required=True)
    e.add_argument("--labeling", choices=LABELINGS, default="subdirs")
    e.add_argument("--method", choices=METHODS, default="btc")
    e.add_argument("--out", required=True)
    e.add_argument("--normalize", action="store_true", help="z-score each feature dimension")
    e.add_argument("--workers", type=int, default=1)
    e.set_defaults(func=cmd_extract)

    c = sub.add_parser("cluster", help="run k-means on a feature table")
    c.add_argument("--features", required=True)
    c.add_argument("--k", type=int, default=10)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--init", choices=INIT_METHODS, default="kmeanspp")
    c.add_argument("--max-iter", type=int, default=100)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_cluster)

    v = sub.add_parser("evaluate", help="score assignments against their labels")
    v.add_argument("--assignments", required=True)
    v.add_argument("--out", required=True)
    v.set_defaults(func=cmd_evaluate)

    r = sub.add_parser("pipeline", help="extract, cluster and evaluate from a config file")
    r.add_argument("--config", required=True)
    r.add_argument("--out-dir", default=None, help="override out_dir from the config")
    r.set_defaults(func=cmd_pipeline)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        args.func(args)
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
