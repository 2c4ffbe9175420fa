"""Order-preserving parallel map and seed derivation shared by the experiment drivers."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "PRIMELOC_THREADS"


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    if raw.strip():
        n = int(raw)
        if n < 1:
            raise ValueError(f"{THREADS_ENV} must be >= 1")
        return n
    return os.cpu_count() or 1


def pmap(fn: Callable[[T], R], items: Iterable[T], threads: int | None = None) -> list[R]:
    """``[fn(x) for x in items]``, possibly on a thread pool; result order is the input order."""
    items = list(items)
    threads = thread_count() if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def child_rngs(seed: int, count: int) -> list[np.random.Generator]:
    """Independent generators for ``count`` work units, fixed by ``seed`` alone."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]
