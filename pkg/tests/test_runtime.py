"""Worker pool tests: dependencies, joins, error propagation, stealing."""

import threading
import time

import pytest

from taskfft.runtime import WorkerPool, intervals, run_bundled


def test_submit_and_result():
    with WorkerPool(2) as pool:
        h = pool.submit(lambda a, b: a + b, 2, 3)
        assert h.result(timeout=5) == 5
        assert h.done()


def test_dependencies_enforce_order():
    events = []
    lock = threading.Lock()

    def record(tag):
        with lock:
            events.append(tag)

    with WorkerPool(4) as pool:
        first = [pool.submit(record, f"a{i}") for i in range(8)]
        second = pool.submit(record, "b", after=first)
        second.result(timeout=5)
    assert events.index("b") == 8  # b ran after every a-task


def test_chained_dependency_cascade():
    order = []
    with WorkerPool(2) as pool:
        a = pool.submit(order.append, 1)
        b = pool.submit(order.append, 2, after=[a])
        c = pool.submit(order.append, 3, after=[b])
        c.result(timeout=5)
    assert order == [1, 2, 3]


def test_join_propagates_first_error():
    def boom():
        raise ValueError("broken task")

    with WorkerPool(2) as pool:
        handles = [pool.submit(lambda: 1), pool.submit(boom), pool.submit(lambda: 2)]
        with pytest.raises(ValueError, match="broken task"):
            pool.join(handles)


def test_dependency_on_completed_handle():
    with WorkerPool(1) as pool:
        a = pool.submit(lambda: 41)
        a.result(timeout=5)
        b = pool.submit(lambda: 42, after=[a])
        assert b.result(timeout=5) == 42


def test_many_tasks_spread_over_workers():
    seen = set()
    lock = threading.Lock()

    def task():
        time.sleep(0.002)
        with lock:
            seen.add(threading.current_thread().name)

    with WorkerPool(4) as pool:
        pool.join([pool.submit(task) for _ in range(64)])
    assert len(seen) > 1  # more than one worker actually ran tasks


def test_submit_after_shutdown_rejected():
    pool = WorkerPool(1)
    pool.shutdown()
    with pytest.raises(RuntimeError):
        pool.submit(lambda: None)


def test_intervals():
    assert intervals(10, 4) == [(0, 4), (4, 8), (8, 10)]
    assert intervals(4, 4) == [(0, 4)]
    assert intervals(0, 3) == []
    with pytest.raises(ValueError):
        intervals(5, 0)


def test_run_bundled_covers_range():
    hit = []
    lock = threading.Lock()

    def body(i0, i1):
        with lock:
            hit.extend(range(i0, i1))

    with WorkerPool(3) as pool:
        run_bundled(pool, 17, 5, body)
    assert sorted(hit) == list(range(17))
