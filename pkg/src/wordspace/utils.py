"""Small shared helpers."""

import os
from concurrent.futures import ThreadPoolExecutor


def resolve_threads(threads):
    """Normalize a thread-count option (None means all cores)."""
    if threads is None:
        return os.cpu_count() or 1
    return max(1, int(threads))


def parallel_map(fn, items, threads):
    """Order-preserving map, sequential when ``threads`` is 1.

    Work items must be independent and pure; with more than one thread
    they run on a thread pool (numpy releases the GIL in the kernels
    that dominate the per-item cost).
    """
    items = list(items)
    threads = resolve_threads(threads)
    if threads == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
