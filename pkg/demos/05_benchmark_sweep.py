#!/usr/bin/env python3
"""A small strong-scaling sweep with the measurement protocol of the harness.

Every repetition is correctness-checked before it may contribute a timing;
medians come with best/worst bounds from the repetitions. The CSV printed at
the end is the same schema `python -m taskfft.bench` writes.

Run: python demos/05_benchmark_sweep.py
"""

from taskfft import StrategyKind
from taskfft.bench import RunSpec, emit_csv, run_distributed, run_scaling
from taskfft.dist.pipeline import DistStrategy

spec = RunSpec(
    rows=256,
    cols=256,
    strategies=(StrategyKind.FUTURE_NAIVE, StrategyKind.FUTURE_SYNC, StrategyKind.PARALLEL_LOOP),
    workers=(1, 2),
    reps=5,
    seed=1,
)
records = run_scaling(spec)

print(f"{'strategy':>16} {'workers':>7} {'median_s':>9} {'min_s':>9} {'max_s':>9}")
for rec in records:
    med, lo, hi = rec.stats("total")
    print(f"{rec.strategy:>16} {rec.workers:>7} {med:9.4f} {lo:9.4f} {hi:9.4f}")

dist_spec = RunSpec(
    rows=256,
    cols=256,
    workers=(2,),
    reps=3,
    seed=1,
    n_locs=(1, 2, 4),
    dist_strategy=DistStrategy.SYNC,
)
dist_records = run_distributed(dist_spec)
print(f"\n{'n_locs':>6} {'total_s':>9} {'communicate_s':>14} {'rearrange_s':>12}")
for rec in dist_records:
    print(
        f"{rec.n_locs:>6} {rec.stats('total')[0]:9.4f} "
        f"{rec.stats('communicate')[0]:14.4f} {rec.stats('rearrange')[0]:12.4f}"
    )

print("\nCSV (same schema as python -m taskfft.bench):\n")
print(emit_csv(records + dist_records))
