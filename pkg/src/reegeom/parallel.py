import os
from multiprocessing.pool import ThreadPool
from typing import Callable, Iterable, List, Optional

THREADS_ENV = 'REE_GEOM_THREADS'


def pool_size(threads: Optional[int] = None) -> int:
    """Number of worker threads, capped by REE_GEOM_THREADS when it is set."""
    cap = os.environ.get(THREADS_ENV)
    cap = int(cap) if cap else None
    if threads is None:
        threads = cap if cap is not None else 1
    elif cap is not None:
        threads = min(threads, cap)
    return max(1, threads)


def parallel_map(func: Callable, items: Iterable,
                 threads: Optional[int] = None) -> List:
    """Map `func` over `items`, results are returned in input order."""
    items = list(items)
    size = pool_size(threads)
    if size == 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPool(min(size, len(items))) as a_pool:
        return a_pool.map(func, items)
