"""Compare moments and BTC features on a labeled corpus over several seeds.

Extracts both descriptors once, runs k-means for each seed, and prints the
per-class recall/precision averaged over seeds for each method, followed by
the macro averages and the class with the best BTC precision.

    python scripts/seed_sweep.py /data/wang --labeling wang_numeric --seeds 10
"""

import argparse
import os
import time

import numpy as np

from btcluster.clustering import KMeansConfig, kmeans
from btcluster.dataset import LABELINGS, ingest
from btcluster.pipeline import evaluate_labeled, extract_features, zscore


def sweep(table, k, seeds, init):
    ids = [r.image_id for r in table.rows]
    labels = [r.label for r in table.rows]
    recall, precision, macro = {}, {}, []
    for seed in range(seeds):
        model = kmeans(table.rows, KMeansConfig(k=k, seed=seed, init=init))
        report = evaluate_labeled(ids, labels, model.assignments)
        for c, s in report.per_class.items():
            recall.setdefault(c, []).append(s.recall)
            precision.setdefault(c, []).append(s.precision)
        macro.append((report.macro_recall, report.macro_precision))
    return (
        {c: float(np.mean(v)) for c, v in recall.items()},
        {c: float(np.mean(v)) for c, v in precision.items()},
        np.mean(macro, axis=0),
    )


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("root")
    p.add_argument("--labeling", choices=LABELINGS[:2], default="wang_numeric")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--init", default="kmeanspp")
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    args = p.parse_args()

    manifest = ingest(args.root, args.labeling)
    print(f"{len(manifest)} images, k={args.k}, {args.seeds} seeds, init={args.init}")
    summary = {}
    for method in ("moments", "btc"):
        t = time.perf_counter()
        table = extract_features(manifest, method, workers=args.workers)
        if args.normalize:
            table = zscore(table)
        rec, prec, (mr, mp) = sweep(table, args.k, args.seeds, args.init)
        summary[method] = (prec, mp)
        width = max(len(c) for c in rec)
        print(f"\n{method} ({time.perf_counter() - t:.1f}s)")
        print(f"{'Classes':<{width}}  {'Recall':>8}  {'Precision':>9}")
        for c in rec:
            print(f"{c:<{width}}  {rec[c]:8.2f}  {prec[c]:9.2f}")
        print(f"{'Average':<{width}}  {mr:8.2f}  {mp:9.2f}")

    btc_prec, btc_macro = summary["btc"]
    print(f"\nbest BTC precision: {max(btc_prec, key=btc_prec.get)}")
    print(f"macro precision: btc {btc_macro:.2f} vs moments {summary['moments'][1]:.2f}")


if __name__ == "__main__":
    main()
