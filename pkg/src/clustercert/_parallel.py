"""Deterministic fan-out over contiguous index ranges.

Work is split into contiguous chunks and the per-chunk results are reduced
in range order, so the outcome never depends on how many workers ran. The
CERTIFY_WORKERS environment variable caps concurrency (default 1).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

T = TypeVar("T")


def worker_count() -> int:
    raw = os.environ.get("CERTIFY_WORKERS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def chunk_ranges(n: int, parts: int) -> list[tuple[int, int]]:
    """Split [0, n) into at most `parts` contiguous near-equal ranges."""
    if n <= 0:
        return []
    parts = max(1, min(parts, n))
    base, extra = divmod(n, parts)
    out = []
    start = 0
    for i in range(parts):
        size = base + (1 if i < extra else 0)
        out.append((start, start + size))
        start += size
    return out


def run_chunked(fn: Callable[[int, int], T], n: int, workers: int | None = None) -> list[T]:
    """Apply fn(lo, hi) to each chunk of [0, n); results in range order."""
    w = worker_count() if workers is None else max(1, workers)
    ranges = chunk_ranges(n, w)
    if len(ranges) <= 1:
        return [fn(lo, hi) for lo, hi in ranges]
    with ThreadPoolExecutor(max_workers=len(ranges)) as ex:
        return list(ex.map(lambda pair: fn(pair[0], pair[1]), ranges))
