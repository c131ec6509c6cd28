import os
from concurrent.futures import ThreadPoolExecutor


def max_workers():
    """Worker cap from FLOQUET_THREADS (default: CPU count, at most 8)."""
    raw = os.environ.get("FLOQUET_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return min(8, os.cpu_count() or 1)


def parallel_map(func, items):
    """``[func(i) for i in items]`` on a thread pool; output order is input order."""
    items = list(items)
    workers = min(max_workers(), len(items))
    if workers <= 1:
        return [func(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
