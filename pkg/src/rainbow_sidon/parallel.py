"""Process-pool map with deterministic, order-preserving results.

Pools are created lazily per worker count and reused for the life of the
process; spinning one up per call would dominate small workloads.
"""

from __future__ import annotations

import atexit
import multiprocessing as mp
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

_POOLS: dict[int, ProcessPoolExecutor] = {}

#: Below this many tasks the work runs inline even when workers > 1.
MIN_TASKS = 2


def _pool(workers: int) -> ProcessPoolExecutor:
    pool = _POOLS.get(workers)
    if pool is None:
        ctx = mp.get_context("fork")
        pool = ProcessPoolExecutor(max_workers=workers, mp_context=ctx)
        _POOLS[workers] = pool
    return pool


@atexit.register
def shutdown() -> None:
    for pool in _POOLS.values():
        pool.shutdown(wait=False, cancel_futures=True)
    _POOLS.clear()


def pmap(func: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    """``list(map(func, items))``, fanned out over ``workers`` processes."""
    items = list(items)
    if workers <= 1 or len(items) < MIN_TASKS:
        return [func(x) for x in items]
    chunk = max(1, len(items) // (4 * workers))
    return list(_pool(workers).map(func, items, chunksize=chunk))
