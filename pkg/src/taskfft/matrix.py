"""Row-major matrix helpers: the two transpose-task formulations and slab split/concat.

Matrices are plain 2D numpy arrays. The module performs no synchronization;
callers hand each task a disjoint row interval and place barriers themselves.
"""

from __future__ import annotations

import numpy as np

from .errors import BoundsError, PartitionError, ShapeError


def _check_pair(src: np.ndarray, dst: np.ndarray) -> None:
    if src.ndim != 2 or dst.ndim != 2:
        raise ShapeError("transpose needs 2D matrices")
    if dst.shape != src.shape[::-1]:
        raise ShapeError(f"dst extents {dst.shape} are not the transpose of src {src.shape}")


def _check_interval(task_rows, limit: int) -> tuple[int, int]:
    start, stop = task_rows
    if not (0 <= start <= stop <= limit):
        raise BoundsError(f"row interval [{start}, {stop}) outside [0, {limit})")
    return int(start), int(stop)


def transpose_read_contiguous(src: np.ndarray, dst: np.ndarray, task_rows) -> None:
    """Stream rows [start, stop) of src into the matching columns of dst.

    Reads are contiguous, writes are strided; a task can run as soon as its
    own source rows exist, independent of other rows' progress.
    """
    _check_pair(src, dst)
    start, stop = _check_interval(task_rows, src.shape[0])
    for r in range(start, stop):
        dst[:, r] = src[r, :]


def transpose_write_contiguous(src: np.ndarray, dst: np.ndarray, task_rows) -> None:
    """Fill rows [start, stop) of dst from the matching columns of src.

    Writes are contiguous, reads are strided; every source row must already be
    complete, which the caller enforces with a barrier before these tasks.
    """
    _check_pair(src, dst)
    start, stop = _check_interval(task_rows, dst.shape[0])
    for r in range(start, stop):
        dst[r, :] = src[:, r]


def split_into_slabs(m: np.ndarray, n_locs: int) -> list[np.ndarray]:
    """Split into n_locs equal row-contiguous blocks (views, not copies)."""
    if m.ndim != 2:
        raise ShapeError("split_into_slabs needs a 2D matrix")
    rows = m.shape[0]
    if n_locs < 1 or rows % n_locs != 0:
        raise PartitionError(f"{rows} rows cannot be split into {n_locs} equal slabs")
    step = rows // n_locs
    return [m[i * step : (i + 1) * step] for i in range(n_locs)]


def split_into_column_blocks(m: np.ndarray, n_blocks: int) -> list[np.ndarray]:
    """Split into n_blocks equal column blocks, each a fresh contiguous copy.

    The copies are handed to the transport as owned send buffers.
    """
    if m.ndim != 2:
        raise ShapeError("split_into_column_blocks needs a 2D matrix")
    cols = m.shape[1]
    if n_blocks < 1 or cols % n_blocks != 0:
        raise PartitionError(f"{cols} columns cannot be split into {n_blocks} equal blocks")
    step = cols // n_blocks
    return [np.ascontiguousarray(m[:, j * step : (j + 1) * step]) for j in range(n_blocks)]


def concatenate_slabs(parts) -> np.ndarray:
    """Row-wise concatenation of blocks ordered by locality rank."""
    parts = list(parts)
    if not parts:
        raise ShapeError("concatenate_slabs needs at least one block")
    cols = {p.shape[1] for p in parts}
    if len(cols) != 1:
        raise ShapeError(f"blocks disagree on column count: {sorted(cols)}")
    return np.concatenate(parts, axis=0)
