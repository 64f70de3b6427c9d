"""Thread-pool helpers for batch sweeps.

The EPLAB_THREADS environment variable caps the worker count; results are
always assembled in submission order, so output is deterministic regardless
of completion order.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count(n_tasks: int | None = None) -> int:
    cap = os.environ.get("EPLAB_THREADS")
    try:
        cap = int(cap) if cap else (os.cpu_count() or 1)
    except ValueError:
        cap = 1
    cap = max(1, cap)
    return min(cap, n_tasks) if n_tasks else cap


def run_tasks(tasks):
    """Run zero-argument callables, possibly concurrently; ordered results."""
    workers = worker_count(len(tasks))
    if workers <= 1 or len(tasks) <= 1:
        return [t() for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(t) for t in tasks]
        return [f.result() for f in futures]


def parallel_map(fn, items):
    """Map fn over items on the thread pool; results in input order."""
    items = list(items)
    workers = worker_count(len(items))
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
