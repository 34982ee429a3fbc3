"""Deterministic reductions and the thread-count knob.

Partial sums are always produced over a fixed chunking that does not depend
on the number of worker threads, and partials are combined in a fixed binary
tree.  Changing ``HOFA_THREADS`` therefore never changes a single bit of output.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")

_threads: int | None = None


def get_threads() -> int:
    if _threads is not None:
        return _threads
    env = os.environ.get("HOFA_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"HOFA_THREADS must be an integer, got {env!r}") from None
    return 1


def set_threads(n: int | None) -> None:
    """Override the thread count (``None`` falls back to ``HOFA_THREADS``)."""
    global _threads
    if n is not None and n < 1:
        raise ValueError("thread count must be >= 1")
    _threads = n


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Order-preserving map, threaded when more than one thread is configured."""
    items = list(items)
    n = get_threads()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def tree_sum(parts: Sequence) -> complex | float:
    """Pairwise sum of a sequence of scalars in a fixed tree order."""
    parts = list(parts)
    if not parts:
        return 0.0
    while len(parts) > 1:
        nxt = [parts[i] + parts[i + 1] for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            nxt.append(parts[-1])
        parts = nxt
    return parts[0]


def det_sum(a: np.ndarray) -> complex | float:
    # numpy reduces contiguous 1-D float/complex data pairwise in a fixed order
    return np.ascontiguousarray(a).reshape(-1).sum()


def det_mean(a: np.ndarray) -> complex | float:
    return det_sum(a) / a.size
