"""Shared-memory 2D r2c FFT pipeline under five interchangeable scheduling strategies.

The pipeline is always the same four phases over an N x M row-major signal:

  1. fft_dim1     r2c transform of every row            -> N x (M/2+1)
  2. transpose_1  re-orient so dim-2 rows are contiguous -> (M/2+1) x N
  3. fft_dim2     c2c transform of every (new) row       -> (M/2+1) x N
  4. transpose_2  restore the original orientation       -> N x (M/2+1)

What differs between strategies is only *where barriers sit* and which
transpose formulation runs:

  FUTURE_NAIVE    each dim-1 FFT task directly triggers the read-contiguous
                  transpose of its rows; one global barrier before dim-2;
                  dim-2 tasks chain their transpose-back the same way.
  FUTURE_OPT      barrier after all dim-1 FFTs, then write-contiguous
                  transpose tasks; each dim-2 FFT task chains off the
                  transpose tasks covering its rows (still futurized).
  FUTURE_SYNC     barrier after every phase; write-contiguous transposes.
  FUTURE_REGISTRY the FUTURE_SYNC graph, but every task launch resolves its
                  entry point through a string-keyed registry.
  PARALLEL_LOOP   each phase is one bundled parallel loop with an implicit
                  end-of-loop barrier; bundles default to rows/workers.

All five produce bitwise-identical spectra for any worker count: tasks never
split a row's arithmetic and transposes only move values.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernel, matrix
from .errors import ConfigError, InvalidSizeError, RegistryError
from .runtime import WorkerPool, intervals


class StrategyKind(Enum):
    FUTURE_NAIVE = "future_naive"
    FUTURE_OPT = "future_opt"
    FUTURE_SYNC = "future_sync"
    FUTURE_REGISTRY = "future_registry"
    PARALLEL_LOOP = "parallel_loop"


PHASE_NAMES = ("fft_dim1", "transpose_1", "fft_dim2", "transpose_2", "communicate", "rearrange")


@dataclass(frozen=True)
class ExecConfig:
    """Worker count and rows-per-task bundles (None = strategy default)."""

    workers: int = 1
    fft_bundle: int | None = None
    transpose_bundle: int | None = None

    def validate(self) -> None:
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        for name in ("fft_bundle", "transpose_bundle"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ConfigError(f"{name} must be >= 1, got {v}")


@dataclass
class PhaseTimings:
    """Wall-clock seconds per pipeline phase, read at barrier boundaries.

    In futurized strategies, work overlapping two phases is attributed to the
    phase whose barrier (join) closes it. communicate/rearrange stay zero for
    shared-memory runs.
    """

    fft_dim1: float = 0.0
    transpose_1: float = 0.0
    fft_dim2: float = 0.0
    transpose_2: float = 0.0
    communicate: float = 0.0
    rearrange: float = 0.0
    total: float = 0.0

    def phase(self, name: str) -> float:
        return getattr(self, name)

    def as_array(self) -> np.ndarray:
        return np.array([self.phase(p) for p in PHASE_NAMES] + [self.total])

    @classmethod
    def from_array(cls, values) -> "PhaseTimings":
        values = [float(v) for v in values]
        return cls(*values)


@dataclass(frozen=True)
class TraceEvent:
    phase: str
    start: float
    end: float


class TaskRegistry:
    """String-keyed task entry points; the only dispatch path in registry mode."""

    def __init__(self):
        self._entries: dict[str, object] = {}
        self._lock = threading.Lock()
        self.lookup_count = 0

    def register(self, name: str, fn) -> None:
        with self._lock:
            self._entries[name] = fn

    def resolve(self, name: str):
        with self._lock:
            if name not in self._entries:
                raise RegistryError(name)
            self.lookup_count += 1
            return self._entries[name]


_exec_lock = threading.Lock()
_exec_count = 0


def execution_count() -> int:
    """How many 2D pipelines this process has executed (planner instrumentation)."""
    return _exec_count


def _count_execution() -> None:
    global _exec_count
    with _exec_lock:
        _exec_count += 1


class _Pipeline:
    """One run's buffers, plans and task bodies, shared by all strategies."""

    def __init__(self, signal: np.ndarray, cfg: ExecConfig, trace, registry):
        self.n, self.m = signal.shape
        self.mc = self.m // 2 + 1
        self.signal = signal
        self.f1 = np.empty((self.n, self.mc), dtype=np.complex128)
        self.t1 = np.empty((self.mc, self.n), dtype=np.complex128)
        self.f2 = np.empty((self.mc, self.n), dtype=np.complex128)
        self.out = np.empty((self.n, self.mc), dtype=np.complex128)
        self.cfg = cfg
        self.trace = trace
        self.registry = registry

    # -- task bodies (each covers a half-open row interval) ------------------

    def fft_dim1(self, i0: int, i1: int) -> None:
        plan = kernel.plan_1d(self.m, kernel.R2C, i1 - i0)
        flat = kernel.execute_r2c(plan, self.signal[i0:i1].reshape(-1))
        self.f1[i0:i1] = flat.reshape(i1 - i0, self.mc)

    def transpose_1_read(self, i0: int, i1: int) -> None:
        matrix.transpose_read_contiguous(self.f1, self.t1, (i0, i1))

    def transpose_1_write(self, j0: int, j1: int) -> None:
        matrix.transpose_write_contiguous(self.f1, self.t1, (j0, j1))

    def fft_dim2(self, j0: int, j1: int) -> None:
        plan = kernel.plan_1d(self.n, kernel.C2C_FORWARD, j1 - j0)
        flat = kernel.execute_c2c(plan, self.t1[j0:j1].reshape(-1))
        self.f2[j0:j1] = flat.reshape(j1 - j0, self.n)

    def transpose_2_read(self, j0: int, j1: int) -> None:
        matrix.transpose_read_contiguous(self.f2, self.out, (j0, j1))

    def transpose_2_write(self, i0: int, i1: int) -> None:
        matrix.transpose_write_contiguous(self.f2, self.out, (i0, i1))

    # -- scheduling helpers --------------------------------------------------

    def launch(self, pool: WorkerPool, phase: str, body, iv, after=()):
        if self.registry is not None:
            body = self.registry.resolve(phase)
        if self.trace is None:
            return pool.submit(body, iv[0], iv[1], after=after, label=phase)
        return pool.submit(self._traced, phase, body, iv[0], iv[1], after=after, label=phase)

    def _traced(self, phase: str, body, i0: int, i1: int) -> None:
        start = time.perf_counter()
        body(i0, i1)
        self.trace.append(TraceEvent(phase, start, time.perf_counter()))

    @property
    def fft_bundle(self) -> int:
        return 1 if self.cfg.fft_bundle is None else self.cfg.fft_bundle

    @property
    def transpose_bundle(self) -> int:
        return 1 if self.cfg.transpose_bundle is None else self.cfg.transpose_bundle

    def loop_bundle(self, rows: int, explicit: int | None) -> int:
        if explicit is not None:
            return explicit
        return max(1, -(-rows // self.cfg.workers))


def _overlapping(tagged_handles, i0: int, i1: int):
    return [h for (a, b), h in tagged_handles if a < i1 and i0 < b]


def _run_future_naive(p: _Pipeline, pool: WorkerPool, mark) -> None:
    fft1 = [
        (iv, p.launch(pool, "fft_dim1", p.fft_dim1, iv))
        for iv in intervals(p.n, p.fft_bundle)
    ]
    # Each transpose task waits only for the FFT tasks producing its rows.
    t1 = [
        p.launch(pool, "transpose_1", p.transpose_1_read, iv, after=_overlapping(fft1, *iv))
        for iv in intervals(p.n, p.transpose_bundle)
    ]
    pool.join(h for _, h in fft1)
    mark("fft_dim1")
    pool.join(t1)  # the single global barrier before dim-2
    mark("transpose_1")
    fft2 = [
        (iv, p.launch(pool, "fft_dim2", p.fft_dim2, iv))
        for iv in intervals(p.mc, p.fft_bundle)
    ]
    t2 = [
        p.launch(pool, "transpose_2", p.transpose_2_read, iv, after=_overlapping(fft2, *iv))
        for iv in intervals(p.mc, p.transpose_bundle)
    ]
    pool.join(h for _, h in fft2)
    mark("fft_dim2")
    pool.join(t2)
    mark("transpose_2")


def _run_future_opt(p: _Pipeline, pool: WorkerPool, mark) -> None:
    fft1 = [p.launch(pool, "fft_dim1", p.fft_dim1, iv) for iv in intervals(p.n, p.fft_bundle)]
    pool.join(fft1)  # barrier shifted before the transpose tasks
    mark("fft_dim1")
    t1 = [
        (iv, p.launch(pool, "transpose_1", p.transpose_1_write, iv))
        for iv in intervals(p.mc, p.transpose_bundle)
    ]
    # dim-2 rows become ready as soon as the transposes covering them finish.
    fft2 = [
        p.launch(pool, "fft_dim2", p.fft_dim2, iv, after=_overlapping(t1, *iv))
        for iv in intervals(p.mc, p.fft_bundle)
    ]
    pool.join(h for _, h in t1)
    mark("transpose_1")
    pool.join(fft2)
    mark("fft_dim2")
    t2 = [
        p.launch(pool, "transpose_2", p.transpose_2_write, iv)
        for iv in intervals(p.n, p.transpose_bundle)
    ]
    pool.join(t2)
    mark("transpose_2")


def _run_future_sync(p: _Pipeline, pool: WorkerPool, mark) -> None:
    phases = (
        ("fft_dim1", p.fft_dim1, p.n, p.fft_bundle),
        ("transpose_1", p.transpose_1_write, p.mc, p.transpose_bundle),
        ("fft_dim2", p.fft_dim2, p.mc, p.fft_bundle),
        ("transpose_2", p.transpose_2_write, p.n, p.transpose_bundle),
    )
    for phase, body, rows, bundle in phases:
        handles = [p.launch(pool, phase, body, iv) for iv in intervals(rows, bundle)]
        pool.join(handles)
        mark(phase)


def _run_parallel_loop(p: _Pipeline, pool: WorkerPool, mark) -> None:
    phases = (
        ("fft_dim1", p.fft_dim1, p.n, p.loop_bundle(p.n, p.cfg.fft_bundle)),
        ("transpose_1", p.transpose_1_write, p.mc, p.loop_bundle(p.mc, p.cfg.transpose_bundle)),
        ("fft_dim2", p.fft_dim2, p.mc, p.loop_bundle(p.mc, p.cfg.fft_bundle)),
        ("transpose_2", p.transpose_2_write, p.n, p.loop_bundle(p.n, p.cfg.transpose_bundle)),
    )
    for phase, body, rows, bundle in phases:
        handles = [p.launch(pool, phase, body, iv) for iv in intervals(rows, bundle)]
        pool.join(handles)
        mark(phase)


_DRIVERS = {
    StrategyKind.FUTURE_NAIVE: _run_future_naive,
    StrategyKind.FUTURE_OPT: _run_future_opt,
    StrategyKind.FUTURE_SYNC: _run_future_sync,
    StrategyKind.FUTURE_REGISTRY: _run_future_sync,
    StrategyKind.PARALLEL_LOOP: _run_parallel_loop,
}


def fft2d_r2c(
    signal,
    strategy: StrategyKind = StrategyKind.FUTURE_SYNC,
    cfg: ExecConfig = ExecConfig(),
    *,
    registry: TaskRegistry | None = None,
    trace: list | None = None,
) -> tuple[np.ndarray, PhaseTimings]:
    """2D real-to-complex FFT of an N x M matrix (powers of two).

    Returns the N x (M/2+1) spectrum in the input orientation and the per-phase
    wall-clock timings. The spectrum is bitwise identical across strategies and
    worker counts.

    `registry` is only consulted by FUTURE_REGISTRY (one lookup per task
    launch); a fresh registry is created when none is passed. `trace`, when
    given a list, collects one TraceEvent per executed task.
    """
    cfg.validate()
    x = np.ascontiguousarray(np.asarray(signal, dtype=np.float64))
    if x.ndim != 2:
        raise InvalidSizeError(f"signal must be 2D, got ndim={x.ndim}")
    n, m = x.shape
    if not (kernel.is_power_of_two(n) and kernel.is_power_of_two(m)) or min(n, m) < 2:
        raise InvalidSizeError(f"extents must be powers of two >= 2, got {n}x{m}")
    if not np.isfinite(x).all():
        raise InvalidSizeError("signal contains non-finite values")
    _count_execution()

    if strategy is StrategyKind.FUTURE_REGISTRY:
        if registry is None:
            registry = TaskRegistry()
        pipeline = _Pipeline(x, cfg, trace, registry)
        registry.register("fft_dim1", pipeline.fft_dim1)
        registry.register("transpose_1", pipeline.transpose_1_write)
        registry.register("fft_dim2", pipeline.fft_dim2)
        registry.register("transpose_2", pipeline.transpose_2_write)
    else:
        pipeline = _Pipeline(x, cfg, trace, None)

    timings = PhaseTimings()
    start = time.perf_counter()
    last = start

    def mark(phase: str) -> None:
        nonlocal last
        now = time.perf_counter()
        setattr(timings, phase, now - last)
        last = now

    with WorkerPool(cfg.workers) as pool:
        _DRIVERS[strategy](pipeline, pool, mark)
    timings.total = time.perf_counter() - start
    return pipeline.out, timings
