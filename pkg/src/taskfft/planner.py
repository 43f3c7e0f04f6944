"""Two-rigor plan selection for the 2D pipeline, plus a plan cache.

Estimate rigor ranks candidates with a heuristic cost in flop-equivalents
(no pipeline is ever executed); Measure rigor times each candidate on scratch
data and keeps the one with the smallest median-of-3 wall time, ties broken by
candidate order. Either way, every candidate computes the same spectrum, so
the numerical output is independent of the rigor and of the chosen candidate.

Estimate cost model (documented defaults, the constants are knobs):

    cost = FLOPS + elementwise traffic
         + transpose traffic weighted by CACHE_PENALTY on the strided side
           (doubled when the strided side is the *write* side, i.e. the
           read-contiguous formulation: write-allocate fetches plus evictions)
         + TASK_OVERHEAD per launched task
         + REGISTRY_OVERHEAD per task for registry-indirected dispatch

with FLOPS counted as 5 * n * log2(n) per length-n transform.
"""

from __future__ import annotations

import math
import threading
import time
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import engine, kernel
from .engine import ExecConfig, StrategyKind
from .errors import ConfigError, InvalidSizeError


class PlanningRigor(Enum):
    ESTIMATE = "estimate"
    MEASURE = "measure"


FLOP_WEIGHT = 1.0
TRAFFIC_WEIGHT = 1.0
CACHE_PENALTY = 4.0
STRIDED_WRITE_FACTOR = 2.0
TASK_OVERHEAD = 2000.0
REGISTRY_OVERHEAD = 500.0
MEASURE_SAMPLES = 3


@dataclass(frozen=True)
class Plan2D:
    """Frozen outcome of planning: strategy, bundles and the embedded 1D plans.

    A bundle of None means "strategy default" (1 row per task for the
    futurized strategies, rows/workers for the parallel loop, resolved per
    phase inside the engine). Reusable for any data of equal extents.
    """

    extents: tuple[int, int]
    strategy: StrategyKind
    fft_bundle: int | None
    transpose_bundle: int | None
    plan_dim1: kernel.Plan1D
    plan_dim2: kernel.Plan1D
    planning_time: float

    def exec_config(self, workers: int) -> ExecConfig:
        return ExecConfig(workers, self.fft_bundle, self.transpose_bundle)


class PlanCache:
    """Keyed plan store: safe for concurrent lookup, exclusive for store."""

    def __init__(self):
        self._lock = threading.RLock()
        self._plans: dict[tuple, Plan2D] = {}

    def lookup(self, key: tuple) -> Plan2D | None:
        with self._lock:
            return self._plans.get(key)

    def store(self, key: tuple, plan: Plan2D) -> None:
        with self._lock:
            self._plans[key] = plan


def plan_cache_key(extents, kind: str, workers: int, rigor: PlanningRigor) -> tuple:
    return (tuple(extents), kind, workers, rigor)


def _effective_tasks(rows: int, bundle: int | None, strategy: StrategyKind, workers: int) -> int:
    if bundle is None:
        bundle = max(1, -(-rows // workers)) if strategy is StrategyKind.PARALLEL_LOOP else 1
    return -(-rows // bundle)


def estimate_cost(extents, strategy: StrategyKind, bundle: int | None, workers: int) -> float:
    """Heuristic cost of one pipeline run, in flop-equivalents."""
    n, m = extents
    mc = m // 2 + 1
    flops = 5.0 * m * math.log2(m) * n + 5.0 * n * math.log2(n) * mc
    fft_traffic = (n * m + n * mc) + 2.0 * mc * n
    strided = CACHE_PENALTY
    if strategy is StrategyKind.FUTURE_NAIVE:  # read-contiguous: strided writes
        strided *= STRIDED_WRITE_FACTOR
    transpose_traffic = 2.0 * (mc * n) * (1.0 + strided)
    tasks = (
        _effective_tasks(n, bundle, strategy, workers)
        + _effective_tasks(mc, bundle, strategy, workers) * 2
        + _effective_tasks(n, bundle, strategy, workers)
    )
    overhead = TASK_OVERHEAD * tasks
    if strategy is StrategyKind.FUTURE_REGISTRY:
        overhead += REGISTRY_OVERHEAD * tasks
    return FLOP_WEIGHT * flops + TRAFFIC_WEIGHT * (fft_traffic + transpose_traffic) + overhead


def plan_2d(
    extents,
    rigor: PlanningRigor,
    cfg: ExecConfig,
    candidates,
    *,
    sample_log: str | None = None,
    cache: PlanCache | None = None,
) -> Plan2D:
    """Pick a (strategy, bundle) candidate for the given extents.

    `candidates` is a sequence of (StrategyKind, bundle-or-None) pairs. With a
    cache, the key (extents, "r2c2d", workers, rigor) is consulted first and
    the fresh plan stored after. `sample_log`, for Measure, appends one line
    per candidate: strategy,bundle,sample times in seconds.
    """
    cfg.validate()
    extents = (int(extents[0]), int(extents[1]))
    n, m = extents
    if not (kernel.is_power_of_two(n) and kernel.is_power_of_two(m)) or min(n, m) < 2:
        raise InvalidSizeError(f"extents must be powers of two >= 2, got {n}x{m}")
    candidates = list(candidates)
    if not candidates:
        raise ConfigError("planning needs a non-empty candidate set")

    key = plan_cache_key(extents, "r2c2d", cfg.workers, rigor)
    if cache is not None:
        cached = cache.lookup(key)
        if cached is not None:
            return cached

    start = time.perf_counter()
    if rigor is PlanningRigor.ESTIMATE:
        best = min(
            candidates,
            key=lambda cand: estimate_cost(extents, cand[0], cand[1], cfg.workers),
        )
    else:
        best = _measure(extents, cfg, candidates, sample_log)
    strategy, bundle = best

    plan = Plan2D(
        extents=extents,
        strategy=strategy,
        fft_bundle=bundle,
        transpose_bundle=bundle,
        plan_dim1=kernel.plan_1d(m, kernel.R2C, 1),
        plan_dim2=kernel.plan_1d(n, kernel.C2C_FORWARD, 1),
        planning_time=time.perf_counter() - start,
    )
    if cache is not None:
        cache.store(key, plan)
    return plan


def _measure(extents, cfg: ExecConfig, candidates, sample_log: str | None):
    scratch = np.zeros(extents, dtype=np.float64)
    lines = []
    best = None
    best_time = math.inf
    for strategy, bundle in candidates:
        run_cfg = ExecConfig(cfg.workers, bundle, bundle)
        samples = []
        for _ in range(MEASURE_SAMPLES):
            t0 = time.perf_counter()
            engine.fft2d_r2c(scratch, strategy, run_cfg)
            samples.append(time.perf_counter() - t0)
        med = sorted(samples)[len(samples) // 2]
        lines.append(
            f"{strategy.value},{'' if bundle is None else bundle},"
            + ",".join(repr(s) for s in samples)
        )
        if med < best_time:  # strict: ties keep the earlier candidate
            best_time = med
            best = (strategy, bundle)
    if sample_log is not None:
        with open(sample_log, "a", encoding="utf-8") as fh:
            for line in lines:
                fh.write(line + "\n")
    return best
