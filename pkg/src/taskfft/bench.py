"""Benchmark harness: strong-scaling sweeps, distributed runs and CSV output.

Protocol per sweep point: one untimed warm-up run, then R timed repetitions
(default R = 50); the median, best and worst of the repetitions are reported
per phase. Every repetition's spectrum is re-checked - against the brute-force
oracle for extents up to 64, bitwise against a cached reference run above that
- and a failed check aborts the sweep with a numeric diff report.

Input matrices are synthesized by a fully pinned 64-bit linear congruential
generator so any two processes (or implementations) given the same seed and
extents produce bit-identical data.

Command line (also see README):

    python -m taskfft.bench --rows 1024 --cols 1024 --strategy parallel_loop \
        --workers 1,2,4 --reps 10 --out scaling.csv

    # one process per locality, rank 0 gets the CSV:
    python -m taskfft.bench --transport tcp --nlocs 2 --rank 0 \
        --peers 127.0.0.1:7001,127.0.0.1:7002 --strategy sync_dist ...

The FFT_BENCH_WORKERS environment variable is the fallback for --workers.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import engine, kernel, planner
from .dist.pipeline import DistStrategy, WorldConfig, fft2d_distributed
from .engine import ExecConfig, PhaseTimings, StrategyKind
from .errors import ConfigError
from .planner import PlanningRigor

PHASES = ("fft_dim1", "transpose_1", "fft_dim2", "transpose_2", "communicate", "rearrange")
CSV_COLUMNS = (
    "extents",
    "strategy",
    "rigor",
    "workers",
    "n_locs",
    "transport",
    "phase",
    "median_s",
    "min_s",
    "max_s",
    "repetitions",
    "planning_time_s",
)

LCG_MULTIPLIER = 6364136223846793005
LCG_INCREMENT = 1442695040888963407
ORACLE_EXTENT_LIMIT = 64
ORACLE_RTOL = 1e-10


def lcg_matrix(rows: int, cols: int, seed: int) -> np.ndarray:
    """Row-major rows x cols matrix of [0, 1) values from the pinned 64-bit LCG.

    Element (i, j) uses state i*cols + j + 1; the high 53 bits of each state
    map to the unit interval. Pure wrap-around integer arithmetic, so the
    output is bit-identical across platforms and processes.
    """
    count = rows * cols
    with np.errstate(over="ignore"):
        mult = np.full(count, LCG_MULTIPLIER, dtype=np.uint64)
        powers = np.multiply.accumulate(mult)  # a^1 .. a^count
        lower = np.empty(count, dtype=np.uint64)  # a^0 .. a^(count-1)
        lower[0] = 1
        lower[1:] = powers[:-1]
        geometric = np.cumsum(lower, dtype=np.uint64)  # sum_{k<i} a^k
        states = powers * np.uint64(seed) + np.uint64(LCG_INCREMENT) * geometric
    values = (states >> np.uint64(11)).astype(np.float64) / float(1 << 53)
    return values.reshape(rows, cols)


def summarize(values) -> tuple[float, float, float]:
    """(median, min, max); an even count medians the mean of the middle pair."""
    ordered = sorted(float(v) for v in values)
    if not ordered:
        raise ConfigError("summarize needs at least one value")
    n = len(ordered)
    if n % 2:
        median = ordered[n // 2]
    else:
        median = (ordered[n // 2 - 1] + ordered[n // 2]) / 2.0
    return median, ordered[0], ordered[-1]


@dataclass
class RunSpec:
    """One sweep request: extents, strategies, rigor, workers, world settings."""

    rows: int
    cols: int
    strategies: tuple[StrategyKind, ...] = (StrategyKind.PARALLEL_LOOP,)
    rigor: PlanningRigor = PlanningRigor.ESTIMATE
    workers: tuple[int, ...] = (1,)
    reps: int = 50
    seed: int = 1
    n_locs: tuple[int, ...] = (1,)
    dist_strategy: DistStrategy = DistStrategy.SYNC
    transport: str = "inproc"
    endpoints: tuple[str, ...] | None = None
    rank: int | None = None
    fft_bundle: int | None = None
    transpose_bundle: int | None = None
    warmup: int = 1

    def validate(self) -> None:
        if self.reps < 1:
            raise ConfigError(f"reps must be >= 1, got {self.reps}")
        if not self.workers or not self.strategies or not self.n_locs:
            raise ConfigError("workers, strategies and n_locs sweeps must be non-empty")
        if self.warmup < 0:
            raise ConfigError("warmup must be >= 0")


@dataclass
class RunRecord:
    """Raw repetitions for one sweep point; aggregates are recomputed on demand."""

    extents: tuple[int, int]
    strategy: str
    rigor: str
    workers: int
    n_locs: int
    transport: str
    repetitions: list[PhaseTimings] = field(default_factory=list)
    planning_time: float = 0.0
    warmup_runs: int = 1

    def phase_values(self, phase: str) -> list[float]:
        if phase == "total":
            return [t.total for t in self.repetitions]
        return [t.phase(phase) for t in self.repetitions]

    def stats(self, phase: str) -> tuple[float, float, float]:
        return summarize(self.phase_values(phase))


class _CorrectnessCheck:
    """Oracle comparison for small extents, bitwise reference above."""

    def __init__(self, signal: np.ndarray):
        self._signal = signal
        n, m = signal.shape
        self._mc = m // 2 + 1
        self._expected: np.ndarray | None = None
        self._bitwise = max(n, m) > ORACLE_EXTENT_LIMIT

    def _reference(self) -> np.ndarray:
        if self._expected is None:
            if self._bitwise:
                self._expected, _ = engine.fft2d_r2c(
                    self._signal, StrategyKind.FUTURE_SYNC, ExecConfig(1)
                )
            else:
                self._expected = kernel.dft_reference_2d(self._signal)[:, : self._mc]
        return self._expected

    def verify(self, spectrum: np.ndarray, context: str) -> None:
        expected = self._reference()
        if self._bitwise:
            if spectrum.tobytes() == expected.tobytes():
                return
            tolerance = 0.0
        else:
            tolerance = ORACLE_RTOL * float(np.max(np.abs(expected)))
            if float(np.max(np.abs(spectrum - expected))) <= tolerance:
                return
        diff = np.abs(spectrum - expected)
        worst = tuple(int(i) for i in np.unravel_index(int(np.argmax(diff)), diff.shape))
        raise RuntimeError(
            f"correctness check failed for {context}: max abs diff {diff[worst]:.3e} at "
            f"{worst}, got {complex(spectrum[worst])}, expected {complex(expected[worst])}, "
            f"tolerance {tolerance:.3e}"
        )


def run_scaling(spec: RunSpec) -> list[RunRecord]:
    """Shared-memory sweep: one RunRecord per (worker count, strategy)."""
    spec.validate()
    signal = lcg_matrix(spec.rows, spec.cols, spec.seed)
    check = _CorrectnessCheck(signal)
    records = []
    for strategy in spec.strategies:
        for workers in spec.workers:
            cfg = ExecConfig(workers, spec.fft_bundle, spec.transpose_bundle)
            plan = planner.plan_2d(
                (spec.rows, spec.cols), spec.rigor, cfg, [(strategy, spec.fft_bundle)]
            )
            record = RunRecord(
                extents=(spec.rows, spec.cols),
                strategy=strategy.value,
                rigor=spec.rigor.value,
                workers=workers,
                n_locs=1,
                transport="shared",
                planning_time=plan.planning_time,
                warmup_runs=spec.warmup,
            )
            context = f"{strategy.value} workers={workers}"
            for _ in range(spec.warmup):
                spectrum, _t = engine.fft2d_r2c(signal, strategy, cfg)
                check.verify(spectrum, context + " (warmup)")
            for _ in range(spec.reps):
                spectrum, timings = engine.fft2d_r2c(signal, strategy, cfg)
                check.verify(spectrum, context)
                record.repetitions.append(timings)
            records.append(record)
    return records


def _max_across_localities(per_locality: list[PhaseTimings]) -> PhaseTimings:
    stacked = np.vstack([t.as_array() for t in per_locality])
    return PhaseTimings.from_array(stacked.max(axis=0))


def run_distributed(spec: RunSpec) -> list[RunRecord]:
    """Distributed sweep: one RunRecord per locality-count point.

    Per-phase numbers take the across-locality maximum of each repetition
    before the median/min/max are computed. With the tcp transport only the
    root rank produces records; other ranks participate and return [].
    """
    spec.validate()
    is_root = spec.transport == "inproc" or spec.rank == 0
    signal = lcg_matrix(spec.rows, spec.cols, spec.seed) if is_root else None
    check = _CorrectnessCheck(signal) if is_root else None
    cfg = ExecConfig(1, spec.fft_bundle, spec.transpose_bundle)
    records = []
    for n_locs in spec.n_locs:
        world = WorldConfig(
            n_locs=n_locs,
            transport=spec.transport,
            endpoints=spec.endpoints,
            workers_per_locality=spec.workers[0],
        )
        record = RunRecord(
            extents=(spec.rows, spec.cols),
            strategy=spec.dist_strategy.value,
            rigor=spec.rigor.value,
            workers=spec.workers[0],
            n_locs=n_locs,
            transport=spec.transport,
            warmup_runs=spec.warmup,
        )
        context = f"{spec.dist_strategy.value} n_locs={n_locs}"
        for rep in range(spec.warmup + spec.reps):
            spectrum, per_locality = fft2d_distributed(
                signal,
                spec.dist_strategy,
                world,
                cfg,
                rank=spec.rank,
                extents=(spec.rows, spec.cols),
            )
            if not is_root:
                continue
            check.verify(spectrum, context)
            if rep >= spec.warmup:
                record.repetitions.append(_max_across_localities(per_locality))
        if is_root:
            records.append(record)
    return records


def emit_csv(records) -> str:
    """Fixed-schema CSV: header, then one row per (record, phase) plus total."""
    lines = [",".join(CSV_COLUMNS)]
    for rec in records:
        for phase in PHASES + ("total",):
            median, best, worst = rec.stats(phase)
            lines.append(
                ",".join(
                    (
                        f"{rec.extents[0]}x{rec.extents[1]}",
                        rec.strategy,
                        rec.rigor,
                        str(rec.workers),
                        str(rec.n_locs),
                        rec.transport,
                        phase,
                        repr(median),
                        repr(best),
                        repr(worst),
                        str(len(rec.repetitions)),
                        repr(rec.planning_time),
                    )
                )
            )
    return "\n".join(lines) + "\n"


_SHARED_STRATEGIES = {s.value: s for s in StrategyKind}
_DIST_STRATEGIES = {s.value: s for s in DistStrategy}


def _parse_workers(text: str | None) -> tuple[int, ...]:
    if text is None:
        text = os.environ.get("FFT_BENCH_WORKERS", "1")
    return tuple(int(v) for v in text.split(",") if v)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="python -m taskfft.bench",
        description="Strong-scaling and distributed FFT benchmark harness.",
    )
    p.add_argument("--rows", type=int, default=1024, help="matrix rows (power of two)")
    p.add_argument("--cols", type=int, default=1024, help="matrix columns (power of two)")
    p.add_argument(
        "--strategy",
        default="parallel_loop",
        help="comma list of strategies: "
        + ",".join(list(_SHARED_STRATEGIES) + list(_DIST_STRATEGIES)),
    )
    p.add_argument("--rigor", choices=["estimate", "measure"], default="estimate")
    p.add_argument(
        "--workers",
        default=None,
        help="comma list of worker counts (fallback: FFT_BENCH_WORKERS env var)",
    )
    p.add_argument("--reps", type=int, default=50, help="timed repetitions per sweep point")
    p.add_argument("--seed", type=int, default=1, help="seed for the synthetic input")
    p.add_argument("--nlocs", default="1", help="comma list of locality counts")
    p.add_argument("--transport", choices=["inproc", "tcp"], default="inproc")
    p.add_argument("--rank", type=int, default=None, help="this process's rank (tcp only)")
    p.add_argument("--peers", default=None, help="comma list of host:port, one per rank")
    p.add_argument("--out", default=None, help="CSV output path (default: stdout)")
    p.add_argument("--bundle-fft", type=int, default=None, help="rows per FFT task")
    p.add_argument("--bundle-transpose", type=int, default=None, help="rows per transpose task")
    p.add_argument(
        "--dump-spectrum",
        default=None,
        help="write the root's spectrum of the final run to this .npy path",
    )
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    strategy_names = [s for s in args.strategy.split(",") if s]
    workers = _parse_workers(args.workers)
    n_locs = tuple(int(v) for v in args.nlocs.split(",") if v)
    rigor = PlanningRigor(args.rigor)
    endpoints = tuple(args.peers.split(",")) if args.peers else None

    distributed = (
        args.transport == "tcp"
        or any(v > 1 for v in n_locs)
        or any(name in _DIST_STRATEGIES for name in strategy_names)
    )

    spec = RunSpec(
        rows=args.rows,
        cols=args.cols,
        rigor=rigor,
        workers=workers,
        reps=args.reps,
        seed=args.seed,
        n_locs=n_locs,
        transport=args.transport,
        endpoints=endpoints,
        rank=args.rank,
        fft_bundle=args.bundle_fft,
        transpose_bundle=args.bundle_transpose,
    )

    if distributed:
        bad = [n for n in strategy_names if n not in _DIST_STRATEGIES]
        if bad:
            raise ConfigError(f"distributed runs need a distributed strategy, got {bad}")
        if len(strategy_names) != 1:
            raise ConfigError("distributed runs take exactly one strategy")
        spec.dist_strategy = _DIST_STRATEGIES[strategy_names[0]]
        records = run_distributed(spec)
    else:
        unknown = [n for n in strategy_names if n not in _SHARED_STRATEGIES]
        if unknown:
            raise ConfigError(f"unknown strategies {unknown}")
        spec.strategies = tuple(_SHARED_STRATEGIES[n] for n in strategy_names)
        records = run_scaling(spec)

    if args.dump_spectrum is not None:
        # The dump run is collective: in tcp mode every rank must pass this
        # flag so all localities participate; only the root writes the file.
        is_root = not distributed or spec.transport == "inproc" or spec.rank == 0
        signal = lcg_matrix(spec.rows, spec.cols, spec.seed) if is_root else None
        if distributed:
            world = WorldConfig(n_locs[0], spec.transport, endpoints, workers[0])
            spectrum, _ = fft2d_distributed(
                signal,
                spec.dist_strategy,
                world,
                ExecConfig(1, spec.fft_bundle, spec.transpose_bundle),
                rank=spec.rank,
                extents=(spec.rows, spec.cols),
            )
        else:
            spectrum, _ = engine.fft2d_r2c(
                signal,
                spec.strategies[0],
                ExecConfig(workers[0], spec.fft_bundle, spec.transpose_bundle),
            )
        if spectrum is not None:
            np.save(args.dump_spectrum, spectrum)

    if not records:  # non-root tcp rank
        return 0
    meta = (
        f"# seed={spec.seed} warmup_runs={spec.warmup} "
        f"rows={spec.rows} cols={spec.cols} one_process_per_sweep_point=true\n"
    )
    text = meta + emit_csv(records)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
