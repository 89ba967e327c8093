from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def resolve_workers(workers: int | None) -> int:
    """Explicit value, else ``POLYLAB_WORKERS``, else 1."""
    if workers is None:
        workers = int(os.environ.get("POLYLAB_WORKERS", "1") or 1)
    return max(1, int(workers))


def parallel_map(fn, items, workers: int | None = 1) -> list:
    """Ordered map; results never depend on the worker count."""
    items = list(items)
    workers = resolve_workers(workers)
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunk))
