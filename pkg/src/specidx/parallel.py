"""Thread-pool map capped by the ``SPECIDX_THREADS`` environment variable.

LAPACK releases the GIL, so threads are enough for the per-energy sweeps.
Results always come back in input order, so output is deterministic.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def max_workers(requested: int | None = None) -> int:
    env = os.environ.get("SPECIDX_THREADS")
    cap = os.cpu_count() or 1
    if env:
        try:
            cap = max(1, int(env))
        except ValueError:
            raise ValueError(f"SPECIDX_THREADS must be a positive integer, got {env!r}") from None
    if requested is not None:
        cap = min(cap, max(1, requested))
    return cap


def pmap(fn, items, workers: int | None = None) -> list:
    items = list(items)
    n = max_workers(workers)
    if n == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
