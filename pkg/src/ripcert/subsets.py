"""Deterministic subset enumeration with optional thread workers.

Subsets are always produced in lexicographic order and reduced
chunk-by-chunk in that order, so search results (including argmax
witnesses) are bitwise identical for any worker count. The worker count
comes from the RIPCERT_WORKERS environment variable unless a caller
passes one explicitly; the default is 1.
"""

from __future__ import annotations

import itertools
import math
import os
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Iterator, TypeVar

import numpy as np

from .errors import EnumerationBudgetError, InvalidParameterError

WORKERS_ENV = "RIPCERT_WORKERS"
#: fixed chunk size; independent of worker count so results never depend on it
CHUNK = 4096

T = TypeVar("T")
R = TypeVar("R")


def worker_count(explicit: int | None = None) -> int:
    if explicit is None:
        raw = os.environ.get(WORKERS_ENV, "1")
        try:
            explicit = int(raw)
        except ValueError:
            raise InvalidParameterError(f"{WORKERS_ENV}={raw!r} is not an integer") from None
    if explicit < 1:
        raise InvalidParameterError(f"worker count must be >= 1, got {explicit}")
    return explicit


def require_budget(needed: int, budget: int, what: str) -> None:
    if needed > budget:
        raise EnumerationBudgetError(needed, budget, what)


def subset_count(n: int, k: int) -> int:
    return math.comb(n, k)


def disjoint_pair_count(n: int, k: int) -> int:
    """Number of unordered pairs of disjoint k-subsets of range(n)."""
    return math.comb(n, k) * math.comb(n - k, k) // 2


def mixed_pair_count(n: int, k: int) -> int:
    """Unordered pairs of disjoint nonempty subsets with sizes up to k."""
    total = 0
    for a in range(1, k + 1):
        for b in range(1, k + 1):
            total += math.comb(n, a) * math.comb(n - a, b)
    return total // 2


def iter_subset_chunks(n: int, k: int, chunk: int = CHUNK) -> Iterator[np.ndarray]:
    """Lexicographic k-subsets of range(n) in (B, k) index arrays."""
    it = itertools.combinations(range(n), k)
    while True:
        batch = list(itertools.islice(it, chunk))
        if not batch:
            return
        yield np.array(batch, dtype=np.intp)


def iter_disjoint_pair_chunks(
    n: int, k: int, chunk: int = CHUNK
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Unordered pairs of disjoint k-subsets, each pair listed once.

    The subset containing the overall smallest element is first, so the
    enumeration covers each unordered pair exactly once, in a fixed
    deterministic order.
    """
    buf_i: list[tuple[int, ...]] = []
    buf_j: list[tuple[int, ...]] = []
    for first in itertools.combinations(range(n), k):
        lo = first[0]
        in_first = set(first)
        allowed = [x for x in range(lo + 1, n) if x not in in_first]
        for second in itertools.combinations(allowed, k):
            buf_i.append(first)
            buf_j.append(second)
            if len(buf_i) >= chunk:
                yield np.array(buf_i, dtype=np.intp), np.array(buf_j, dtype=np.intp)
                buf_i, buf_j = [], []
    if buf_i:
        yield np.array(buf_i, dtype=np.intp), np.array(buf_j, dtype=np.intp)


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: int) -> Iterator[R]:
    """Map preserving input order, optionally on a thread pool.

    With workers > 1 at most ``4 * workers`` tasks are in flight, and
    results are yielded strictly in submission order, so any downstream
    reduction sees the same sequence as a serial run.
    """
    if workers <= 1:
        for item in items:
            yield fn(item)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        pending: deque = deque()
        for item in items:
            pending.append(pool.submit(fn, item))
            if len(pending) >= 4 * workers:
                yield pending.popleft().result()
        while pending:
            yield pending.popleft().result()
