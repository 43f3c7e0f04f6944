"""Engine tests: strategy agreement, barrier discipline traces, timings, registry."""

import numpy as np
import pytest

from taskfft import engine, kernel
from taskfft.engine import ExecConfig, StrategyKind, TaskRegistry, fft2d_r2c
from taskfft.errors import ConfigError, InvalidSizeError, RegistryError

ALL = list(StrategyKind)


def oracle_spectrum(x):
    return kernel.dft_reference_2d(x)[:, : x.shape[1] // 2 + 1]


def test_zeros_stay_zero():
    for strategy in ALL:
        out, _ = fft2d_r2c(np.zeros((4, 4)), strategy)
        assert out.shape == (4, 3)
        assert np.array_equal(out, np.zeros((4, 3), dtype=complex))


def test_constant_matrix_is_dc_only():
    out, _ = fft2d_r2c(np.ones((4, 4)), StrategyKind.PARALLEL_LOOP, ExecConfig(2))
    assert abs(out[0, 0] - 16) < 1e-12
    rest = out.copy()
    rest[0, 0] = 0
    assert np.max(np.abs(rest)) < 1e-12


def test_matches_oracle_16x16():
    rng = np.random.default_rng(0)
    x = rng.standard_normal((16, 16))
    want = oracle_spectrum(x)
    for strategy in ALL:
        got, _ = fft2d_r2c(x, strategy, ExecConfig(2))
        assert np.max(np.abs(got - want)) <= 1e-10 * np.max(np.abs(want))


def test_strategy_and_worker_agreement_bitwise():
    rng = np.random.default_rng(1)
    for extent in (4, 8, 32):
        x = rng.standard_normal((extent, extent))
        reference = None
        for strategy in ALL:
            for workers in (1, 2, 4):
                out, _ = fft2d_r2c(x, strategy, ExecConfig(workers))
                if reference is None:
                    reference = out
                assert out.tobytes() == reference.tobytes(), (strategy, workers)


def test_rectangular_extents():
    rng = np.random.default_rng(2)
    x = rng.standard_normal((8, 32))
    want = oracle_spectrum(x)
    got, _ = fft2d_r2c(x, StrategyKind.FUTURE_NAIVE, ExecConfig(2))
    assert got.shape == (8, 17)
    assert np.max(np.abs(got - want)) <= 1e-10 * np.max(np.abs(want))


def test_bundles_do_not_change_bits():
    rng = np.random.default_rng(3)
    x = rng.standard_normal((32, 32))
    base, _ = fft2d_r2c(x, StrategyKind.FUTURE_SYNC, ExecConfig(2))
    for fft_b, tr_b in ((4, 2), (32, 32), (5, 7)):
        out, _ = fft2d_r2c(x, StrategyKind.FUTURE_SYNC, ExecConfig(2, fft_b, tr_b))
        assert out.tobytes() == base.tobytes()


@pytest.mark.parametrize("shape", [(6, 8), (8, 6), (1, 8), (3, 3)])
def test_invalid_extents_rejected(shape):
    with pytest.raises(InvalidSizeError):
        fft2d_r2c(np.zeros(shape), StrategyKind.FUTURE_SYNC)


def test_non_finite_rejected():
    x = np.zeros((4, 4))
    x[1, 2] = np.nan
    with pytest.raises(InvalidSizeError):
        fft2d_r2c(x, StrategyKind.FUTURE_SYNC)


def test_bad_config_rejected():
    with pytest.raises(ConfigError):
        fft2d_r2c(np.zeros((4, 4)), StrategyKind.FUTURE_SYNC, ExecConfig(0))
    with pytest.raises(ConfigError):
        fft2d_r2c(np.zeros((4, 4)), StrategyKind.FUTURE_SYNC, ExecConfig(1, fft_bundle=0))


# -- event traces ---------------------------------------------------------------


def phase_events(trace, phase):
    return [e for e in trace if e.phase == phase]


def overlap_exists(trace):
    """True when some transpose_1 task started before the last fft_dim1 task ended."""
    fft_end = max(e.end for e in phase_events(trace, "fft_dim1"))
    t_start = min(e.start for e in phase_events(trace, "transpose_1"))
    return t_start < fft_end


def test_naive_overlaps_fft_with_transpose():
    rng = np.random.default_rng(4)
    x = rng.standard_normal((16, 16))
    trace = []
    fft2d_r2c(x, StrategyKind.FUTURE_NAIVE, ExecConfig(2), trace=trace)
    assert overlap_exists(trace)


def test_naive_single_worker_serializes_but_output_unchanged():
    rng = np.random.default_rng(5)
    x = rng.standard_normal((16, 16))
    a, _ = fft2d_r2c(x, StrategyKind.FUTURE_NAIVE, ExecConfig(1))
    b, _ = fft2d_r2c(x, StrategyKind.FUTURE_NAIVE, ExecConfig(4))
    assert a.tobytes() == b.tobytes()


def test_naive_no_fft2_before_transpose1_done():
    rng = np.random.default_rng(6)
    trace = []
    fft2d_r2c(rng.standard_normal((16, 16)), StrategyKind.FUTURE_NAIVE, ExecConfig(2), trace=trace)
    t1_end = max(e.end for e in phase_events(trace, "transpose_1"))
    fft2_start = min(e.start for e in phase_events(trace, "fft_dim2"))
    assert fft2_start >= t1_end


@pytest.mark.parametrize(
    "strategy",
    [StrategyKind.FUTURE_OPT, StrategyKind.FUTURE_SYNC, StrategyKind.PARALLEL_LOOP],
)
def test_barrier_before_transpose(strategy):
    rng = np.random.default_rng(7)
    trace = []
    fft2d_r2c(rng.standard_normal((16, 16)), strategy, ExecConfig(2), trace=trace)
    assert not overlap_exists(trace)


def test_sync_has_three_interior_barriers():
    rng = np.random.default_rng(8)
    trace = []
    fft2d_r2c(rng.standard_normal((16, 16)), StrategyKind.FUTURE_SYNC, ExecConfig(2), trace=trace)
    order = ("fft_dim1", "transpose_1", "fft_dim2", "transpose_2")
    for before, after in zip(order[:-1], order[1:]):
        last_end = max(e.end for e in phase_events(trace, before))
        first_start = min(e.start for e in phase_events(trace, after))
        assert first_start >= last_end, (before, after)


def test_trace_counts_match_task_counts():
    trace = []
    fft2d_r2c(np.zeros((16, 16)), StrategyKind.FUTURE_SYNC, ExecConfig(2), trace=trace)
    # bundle defaults to one row per task: 16 + 9 + 9 + 16 tasks
    assert len(phase_events(trace, "fft_dim1")) == 16
    assert len(phase_events(trace, "transpose_1")) == 9
    assert len(phase_events(trace, "fft_dim2")) == 9
    assert len(phase_events(trace, "transpose_2")) == 16


def test_parallel_loop_default_bundle_is_rows_over_workers():
    trace = []
    fft2d_r2c(np.zeros((16, 16)), StrategyKind.PARALLEL_LOOP, ExecConfig(4), trace=trace)
    # unset knob: bundle = ceil(rows / workers); 16 rows -> 4 tasks, 9 rows -> 3 tasks
    assert len(phase_events(trace, "fft_dim1")) == 4
    assert len(phase_events(trace, "transpose_1")) == 3
    assert len(phase_events(trace, "fft_dim2")) == 3
    assert len(phase_events(trace, "transpose_2")) == 4


def test_parallel_loop_explicit_bundle_respected():
    trace = []
    fft2d_r2c(
        np.zeros((16, 16)), StrategyKind.PARALLEL_LOOP, ExecConfig(4, fft_bundle=16), trace=trace
    )
    assert len(phase_events(trace, "fft_dim1")) == 1


# -- timings ---------------------------------------------------------------------


def test_phase_timings_sane():
    rng = np.random.default_rng(9)
    for strategy in ALL:
        _, t = fft2d_r2c(rng.standard_normal((32, 32)), strategy, ExecConfig(2))
        parts = [t.fft_dim1, t.transpose_1, t.fft_dim2, t.transpose_2, t.communicate, t.rearrange]
        assert all(p >= 0 for p in parts)
        assert sum(parts) <= t.total * 1.05
        assert t.communicate == 0.0 and t.rearrange == 0.0


def test_phase_timings_array_round_trip():
    t = engine.PhaseTimings(1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 21.5)
    back = engine.PhaseTimings.from_array(t.as_array())
    assert back == t


# -- registry ---------------------------------------------------------------------


def test_registry_lookup_count_equals_task_count():
    registry = TaskRegistry()
    out, _ = fft2d_r2c(np.zeros((16, 16)), StrategyKind.FUTURE_REGISTRY, ExecConfig(2), registry=registry)
    assert registry.lookup_count == 16 + 9 + 9 + 16


def test_registry_output_matches_sync():
    rng = np.random.default_rng(10)
    x = rng.standard_normal((32, 32))
    a, _ = fft2d_r2c(x, StrategyKind.FUTURE_REGISTRY, ExecConfig(2))
    b, _ = fft2d_r2c(x, StrategyKind.FUTURE_SYNC, ExecConfig(2))
    assert a.tobytes() == b.tobytes()


def test_registry_unknown_name():
    registry = TaskRegistry()
    registry.register("known", lambda: None)
    assert registry.resolve("known") is not None
    with pytest.raises(RegistryError):
        registry.resolve("never_registered")


def test_execution_counter_increments():
    before = engine.execution_count()
    fft2d_r2c(np.zeros((4, 4)), StrategyKind.PARALLEL_LOOP)
    assert engine.execution_count() == before + 1
