"""A small work-stealing worker pool with dependency-triggered task release.

The contract kept deliberately minimal: a submitted task may name other task
handles it depends on, and a barrier is nothing more than joining all handles
of a phase. Each worker owns a deque; it pops its own work LIFO (so chained
continuations run immediately on the worker that produced their input) and
steals FIFO from peers when idle.
"""

from __future__ import annotations

import threading
from collections import deque


class TaskHandle:
    """Completion handle for one submitted task."""

    __slots__ = ("label", "_cond", "_done", "_result", "_error", "_dependents")

    def __init__(self, cond: threading.Condition, label=None):
        self.label = label
        self._cond = cond
        self._done = False
        self._result = None
        self._error = None
        self._dependents = []

    def done(self) -> bool:
        return self._done

    def wait(self, timeout: float | None = None) -> None:
        with self._cond:
            if not self._cond.wait_for(lambda: self._done, timeout):
                raise TimeoutError(f"task {self.label!r} did not finish in {timeout}s")

    def result(self, timeout: float | None = None):
        """Block until the task finished; re-raise its error if it failed."""
        self.wait(timeout)
        if self._error is not None:
            raise self._error
        return self._result


class _Task:
    __slots__ = ("fn", "args", "handle", "remaining")

    def __init__(self, fn, args, handle, remaining):
        self.fn = fn
        self.args = args
        self.handle = handle
        self.remaining = remaining


class WorkerPool:
    """Fixed pool of OS threads executing dependency-ordered tasks."""

    def __init__(self, workers: int, name: str = "taskfft"):
        if workers < 1:
            raise ValueError(f"workers must be >= 1, got {workers}")
        self.workers = workers
        self._cond = threading.Condition()
        self._queues: list[deque] = [deque() for _ in range(workers)]
        self._rr = 0
        self._stop = False
        self._local = threading.local()
        self._threads = [
            threading.Thread(target=self._worker, args=(i,), name=f"{name}-{i}", daemon=True)
            for i in range(workers)
        ]
        for t in self._threads:
            t.start()

    def __enter__(self) -> "WorkerPool":
        return self

    def __exit__(self, *exc) -> None:
        self.shutdown()

    def submit(self, fn, *args, after=(), label=None) -> TaskHandle:
        """Schedule fn(*args); it runs once every handle in `after` completed."""
        handle = TaskHandle(self._cond, label)
        with self._cond:
            if self._stop:
                raise RuntimeError("pool is shut down")
            blockers = [dep for dep in after if not dep._done]
            task = _Task(fn, args, handle, len(blockers))
            for dep in blockers:
                dep._dependents.append(task)
            if task.remaining == 0:
                self._enqueue_locked(task)
        return handle

    def join(self, handles) -> None:
        """Wait for every handle; the first failure aborts with its error."""
        for h in handles:
            h.result()

    def shutdown(self) -> None:
        with self._cond:
            self._stop = True
            self._cond.notify_all()
        for t in self._threads:
            t.join()

    # -- internals ---------------------------------------------------------

    def _enqueue_locked(self, task: _Task) -> None:
        idx = getattr(self._local, "idx", None)
        if idx is None:  # external submit: spread round-robin
            idx = self._rr % self.workers
            self._rr += 1
        self._queues[idx].append(task)
        self._cond.notify_all()

    def _take_locked(self, idx: int) -> _Task | None:
        own = self._queues[idx]
        if own:
            return own.pop()  # newest first: continuations run immediately
        for off in range(1, self.workers):
            victim = self._queues[(idx + off) % self.workers]
            if victim:
                return victim.popleft()  # steal oldest
        return None

    def _worker(self, idx: int) -> None:
        self._local.idx = idx
        while True:
            with self._cond:
                task = self._take_locked(idx)
                while task is None:
                    if self._stop:
                        return
                    self._cond.wait()
                    task = self._take_locked(idx)
            error = result = None
            try:
                result = task.fn(*task.args)
            except BaseException as exc:  # propagated through the handle
                error = exc
            self._finish(task.handle, result, error)

    def _finish(self, handle: TaskHandle, result, error) -> None:
        with self._cond:
            handle._result = result
            handle._error = error
            handle._done = True
            for dep_task in handle._dependents:
                dep_task.remaining -= 1
                if dep_task.remaining == 0:
                    self._enqueue_locked(dep_task)
            handle._dependents.clear()
            self._cond.notify_all()


def run_bundled(pool: WorkerPool, total: int, bundle: int, body) -> None:
    """Parallel loop over [0, total) in `bundle`-sized chunks; implicit end barrier."""
    handles = [pool.submit(body, i0, i1) for i0, i1 in intervals(total, bundle)]
    pool.join(handles)


def intervals(total: int, bundle: int) -> list[tuple[int, int]]:
    """Chop [0, total) into ceil(total/bundle) half-open chunks."""
    if bundle < 1:
        raise ValueError(f"bundle must be >= 1, got {bundle}")
    return [(i, min(i + bundle, total)) for i in range(0, total, bundle)]
