"""Thread pool helpers with worker-count independent results.

Work is always cut into the same chunks regardless of the pool size and
results are gathered in chunk order, so reductions see identical inputs.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "FAVARD_LAB_THREADS"


def resolve_workers(workers: int | None = None) -> int:
    if workers is None:
        workers = int(os.environ.get(THREADS_ENV, "1") or 1)
    if workers < 1:
        raise ValueError("worker count must be >= 1")
    return workers


def ordered_map(fn: Callable[[T], R], items: Sequence[T], workers: int | None = None) -> list[R]:
    workers = resolve_workers(workers)
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
