"""Order-preserving map over independent samples, optionally thread-pooled.

All per-sample pipeline stages are pure functions, so they may run in
parallel. The env var HOE_THREADS caps the worker count (default 1, i.e.
sequential); results are always collected in input order, so the choice
never affects outputs.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

from .errors import ConfigError

T = TypeVar("T")
U = TypeVar("U")


def thread_count() -> int:
    raw = os.environ.get("HOE_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"HOE_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"HOE_THREADS must be >= 1, got {n}")
    return n


def ordered_map(fn: Callable[[T], U], items: Iterable[T]) -> List[U]:
    items = list(items)
    n = thread_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))
