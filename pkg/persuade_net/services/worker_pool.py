# persuade_net/services/worker_pool.py

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from persuade_net.config import get_settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class WorkerPool:
    """
    A bounded thread pool for embarrassingly parallel numeric work.

    Results always come back in input order, so callers can merge them
    deterministically regardless of which worker finished first. With a single
    thread (or a single item) the work runs inline on the caller's thread.
    """

    def __init__(self, threads: Optional[int] = None):
        self.threads = max(1, threads if threads is not None else get_settings().THREADS)

    def map_ordered(self, fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
        if self.threads == 1 or len(items) <= 1:
            return [fn(item) for item in items]
        workers = min(self.threads, len(items))
        logger.debug(f"Dispatching {len(items)} work items to {workers} threads.")
        with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="persuade-net") as pool:
            return list(pool.map(fn, items))


def chunked(items: Sequence[T], size: int) -> List[Sequence[T]]:
    """Splits `items` into consecutive slices of at most `size` elements."""
    if size < 1:
        raise ValueError(f"Chunk size must be positive, got {size}.")
    return [items[i:i + size] for i in range(0, len(items), size)]
