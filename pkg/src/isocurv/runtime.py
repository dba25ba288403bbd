"""Runtime knobs: worker-thread cap for grid sweeps.

Grid evaluations are embarrassingly parallel; the ISOCURV_THREADS
environment variable caps how many worker threads a sweep may use
(default 1, i.e. serial, which is usually fastest for pure-Python work).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count() -> int:
    raw = os.environ.get("ISOCURV_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def grid_map(fn, items):
    """Ordered map over grid items, threaded when ISOCURV_THREADS > 1."""
    workers = worker_count()
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
