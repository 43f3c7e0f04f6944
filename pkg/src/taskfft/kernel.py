"""One-dimensional radix-2 FFT engine with batched plans and a brute-force oracle.

The forward transform is unnormalized: bin k is sum_n x_n * exp(-2*pi*i*n*k/N).
The inverse is unnormalized as well, so inverse(forward(x)) == N * x.

Transforms are executed from a :class:`Plan1D`, which freezes the length, the
kind (r2c / c2c-forward / c2c-inverse), the batch count and the per-stage
twiddle tables. Plans are immutable and safe to share across threads; execution
writes only into freshly allocated output buffers. A batch of b transforms is
evaluated stage-wise over a (b, n) block with numpy, and every output element's
arithmetic is independent of how rows are grouped into batches, so results are
bitwise identical no matter how callers bundle rows into tasks.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidSizeError, PlanMisuseError, ShapeError

R2C = "r2c"
C2C_FORWARD = "c2c-forward"
C2C_INVERSE = "c2c-inverse"
KINDS = (R2C, C2C_FORWARD, C2C_INVERSE)


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class TwiddleTable:
    """Per-butterfly-stage unit-magnitude phase factors for one transform length.

    Stage s (s = 0 .. log2(n)-1) holds the 2**s factors used by butterflies of
    span 2**(s+1). Every factor has magnitude 1 up to rounding.
    """

    length: int
    stages: tuple[np.ndarray, ...]

    @property
    def stage_count(self) -> int:
        return len(self.stages)


@dataclass(frozen=True)
class Plan1D:
    """Reusable transform descriptor: (length, kind, batch) plus frozen tables.

    Plans with equal (length, kind) are interchangeable; the batch count only
    fixes how much contiguous data one execution consumes.
    """

    length: int
    kind: str
    batch: int
    twiddles: TwiddleTable
    permutation: np.ndarray

    @property
    def bins(self) -> int:
        """Output bins per transform: n/2+1 for r2c, n otherwise."""
        return self.length // 2 + 1 if self.kind == R2C else self.length


def _bit_reverse_indices(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n, dtype=np.uint64)
    rev = np.zeros(n, dtype=np.uint64)
    for _ in range(bits):
        rev = (rev << np.uint64(1)) | (idx & np.uint64(1))
        idx >>= np.uint64(1)
    return rev.astype(np.intp)


@lru_cache(maxsize=64)
def _stage_tables(length: int, sign: float) -> tuple[np.ndarray, ...]:
    # Angles accumulate from the exact -2*pi/length base so equal plans are
    # bitwise identical no matter when they are built.
    base = sign * 2.0 * np.pi / length
    tables = []
    m = 2
    while m <= length:
        h = m // 2
        theta = base * (np.arange(h) * (length // m))
        table = np.cos(theta) + 1j * np.sin(theta)
        table.setflags(write=False)
        tables.append(table)
        m *= 2
    return tuple(tables)


_plan_cache: dict[tuple[int, str, int], Plan1D] = {}
_plan_lock = threading.Lock()


def plan_1d(length: int, kind: str, batch: int = 1) -> Plan1D:
    """Build (or fetch from the process-wide cache) a 1D transform plan.

    Parameters
    ----------
    length : power-of-two transform length, >= 2
    kind : one of "r2c", "c2c-forward", "c2c-inverse"
    batch : number of back-to-back transforms one execution performs
    """
    if not isinstance(length, (int, np.integer)) or length < 2 or not is_power_of_two(int(length)):
        raise InvalidSizeError(f"transform length must be a power of two >= 2, got {length}")
    if kind not in KINDS:
        raise PlanMisuseError(f"unknown transform kind {kind!r}, expected one of {KINDS}")
    if batch < 1:
        raise InvalidSizeError(f"batch must be >= 1, got {batch}")
    length = int(length)
    batch = int(batch)
    key = (length, kind, batch)
    with _plan_lock:
        plan = _plan_cache.get(key)
        if plan is None:
            sign = 1.0 if kind == C2C_INVERSE else -1.0
            perm = _bit_reverse_indices(length)
            perm.setflags(write=False)
            plan = Plan1D(length, kind, batch, TwiddleTable(length, _stage_tables(length, sign)), perm)
            _plan_cache[key] = plan
    return plan


def _run_stages(plan: Plan1D, block: np.ndarray) -> np.ndarray:
    """Radix-2 stages over a (batch, n) complex block; returns a new array."""
    n = plan.length
    y = np.ascontiguousarray(block[:, plan.permutation])
    for w in plan.twiddles.stages:
        h = w.shape[0]
        m = 2 * h
        v = y.reshape(y.shape[0], n // m, m)
        u = v[:, :, :h].copy()  # butterfly tops are read after being overwritten
        t = v[:, :, h:] * w
        v[:, :, :h] = u + t
        v[:, :, h:] = u - t
    return y


def _as_block(plan: Plan1D, data, dtype) -> np.ndarray:
    arr = np.asarray(data, dtype=dtype)
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    if arr.size != plan.length * plan.batch:
        raise ShapeError(
            f"data length {arr.size} != plan length {plan.length} x batch {plan.batch}"
        )
    return arr.reshape(plan.batch, plan.length)


def execute_c2c(plan: Plan1D, data) -> np.ndarray:
    """Run the plan's complex transform (direction taken from the plan kind).

    `data` is a flat sequence of plan.length * plan.batch complex samples;
    returns the flat transformed sequence of the same length.
    """
    if plan.kind == R2C:
        raise PlanMisuseError("execute_c2c called with an r2c plan")
    block = _as_block(plan, data, np.complex128)
    return _run_stages(plan, block).reshape(-1)


def execute_r2c(plan: Plan1D, data) -> np.ndarray:
    """Real-to-complex transform: the first n/2+1 bins of the full transform.

    Returns plan.batch spectra of n/2+1 bins each, concatenated flat.
    """
    if plan.kind != R2C:
        raise PlanMisuseError(f"execute_r2c called with a {plan.kind} plan")
    block = _as_block(plan, data, np.float64).astype(np.complex128)
    full = _run_stages(plan, block)
    return np.ascontiguousarray(full[:, : plan.bins]).reshape(-1)


def execute_c2c_inverse(plan: Plan1D, bins) -> np.ndarray:
    """Unnormalized inverse: execute_c2c_inverse(execute_c2c(x)) == n * x."""
    if plan.kind != C2C_INVERSE:
        raise PlanMisuseError(f"execute_c2c_inverse called with a {plan.kind} plan")
    block = _as_block(plan, bins, np.complex128)
    return _run_stages(plan, block).reshape(-1)


@lru_cache(maxsize=16)
def _phase_matrix(n: int) -> np.ndarray:
    k = np.arange(n)
    m = np.exp(-2j * np.pi * np.outer(k, k) / n)
    m.setflags(write=False)
    return m


def dft_reference(data) -> np.ndarray:
    """Direct O(n^2) evaluation of the transform; the oracle for all kernel tests.

    Accepts any length n >= 1 (not restricted to powers of two) and real or
    complex input; always returns the full n-bin spectrum.
    """
    x = np.asarray(data, dtype=np.complex128).reshape(-1)
    n = x.size
    if n == 0:
        raise InvalidSizeError("dft_reference needs at least one sample")
    if n <= 2048:
        return _phase_matrix(n) @ x
    out = np.empty(n, dtype=np.complex128)
    grid = np.arange(n)
    for k in range(n):
        out[k] = np.sum(x * np.exp(-2j * np.pi * (k * grid % n) / n))
    return out


def dft_reference_2d(signal) -> np.ndarray:
    """Brute-force 2D transform: dft_reference along rows, then along columns.

    Returns the full rows x cols complex spectrum; callers slice the first
    cols/2+1 columns to compare against the r2c pipeline.
    """
    x = np.asarray(signal, dtype=np.complex128)
    if x.ndim != 2:
        raise ShapeError(f"expected a 2D matrix, got ndim={x.ndim}")
    n, m = x.shape
    # The phase matrix is symmetric, so a row transform is a right-multiply.
    rows_done = x @ _phase_matrix(m)
    return _phase_matrix(n) @ rows_done
