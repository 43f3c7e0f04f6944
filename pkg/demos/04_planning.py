#!/usr/bin/env python3
"""Estimate vs measure planning and the plan cache.

Estimate ranks candidates with a cost model (flops + weighted memory traffic
+ task overheads) without running anything; measure times each candidate on
scratch data and keeps the fastest median. The chosen candidate changes only
the schedule, never the numbers.

Run: python demos/04_planning.py
"""

import numpy as np

from taskfft import ExecConfig, PlanCache, PlanningRigor, StrategyKind, fft2d_r2c, plan_2d
from taskfft.bench import lcg_matrix
from taskfft.planner import estimate_cost, plan_cache_key

extents = (256, 256)
workers = 2
candidates = [
    (StrategyKind.FUTURE_NAIVE, None),
    (StrategyKind.FUTURE_SYNC, None),
    (StrategyKind.FUTURE_REGISTRY, None),
    (StrategyKind.PARALLEL_LOOP, None),
]

print("estimate-mode cost model (flop-equivalents):")
for strategy, bundle in candidates:
    cost = estimate_cost(extents, strategy, bundle, workers)
    print(f"  {strategy.value:>16}: {cost:,.0f}")

est = plan_2d(extents, PlanningRigor.ESTIMATE, ExecConfig(workers), candidates)
print(f"estimate picked {est.strategy.value} in {est.planning_time * 1e6:.0f} us")

meas = plan_2d(
    extents, PlanningRigor.MEASURE, ExecConfig(workers), candidates, sample_log="plan_samples.log"
)
print(f"measure picked {meas.strategy.value} in {meas.planning_time:.3f} s "
      f"(samples appended to plan_samples.log)")

# Whatever was picked, the spectrum is the same bits.
x = lcg_matrix(*extents, seed=3)
a, _ = fft2d_r2c(x, est.strategy, est.exec_config(workers))
b, _ = fft2d_r2c(x, meas.strategy, meas.exec_config(workers))
print("outputs bitwise identical across rigors:", a.tobytes() == b.tobytes())

# Plans are reusable; the cache hands back the stored plan for equal keys.
cache = PlanCache()
first = plan_2d(extents, PlanningRigor.ESTIMATE, ExecConfig(workers), candidates, cache=cache)
again = plan_2d(extents, PlanningRigor.ESTIMATE, ExecConfig(workers), candidates, cache=cache)
key = plan_cache_key(extents, "r2c2d", workers, PlanningRigor.ESTIMATE)
print("cache hit returns the stored plan:", again is first is cache.lookup(key))
