#!/usr/bin/env python3
"""Clustering and merge throughput on synthetic variant-rich datasets.

    python3 scripts/bench_cluster.py [--refs 10000] [--years 50] [--threshold 0.75]
"""

import argparse
import os
import random
import resource
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "tests"))

from refspect.dataset import dataset_info  # noqa: E402
from refspect.disambiguation import SimilarityConfig, cluster, merge  # noqa: E402
from test_acceptance import scale_fixture  # noqa: E402
from conftest import dataset_from_counts  # noqa: E402


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--refs", type=int, default=10_000)
    parser.add_argument("--years", type=int, default=50)
    parser.add_argument("--threshold", type=float, default=0.75)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    per_year = max(1, args.refs // args.years)
    counts = scale_fixture(rng, n_years=args.years, per_year=per_year)
    ds = dataset_from_counts(counts)
    print(f"dataset: {dataset_info(ds)}")

    start = time.perf_counter()
    partition = cluster(ds, SimilarityConfig(threshold=args.threshold))
    t_cluster = time.perf_counter() - start

    start = time.perf_counter()
    merged = merge(ds, partition)
    t_merge = time.perf_counter() - start

    clusters = len({main for main, _ in partition.membership.values()})
    rss_mb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024
    print(
        f"cluster: {t_cluster:.2f}s ({clusters} clusters), merge: {t_merge:.2f}s "
        f"({len(merged.references)} rows), peak RSS {rss_mb:.0f} MiB"
    )


if __name__ == "__main__":
    main()
