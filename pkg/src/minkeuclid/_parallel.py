"""Deterministic worker-pool helper.

Work is split into seed-indexed chunks; chunk results are reduced in
submission order, so a fixed (seed, worker count) pair gives identical
output regardless of scheduling.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor


def map_chunks(fn, chunks, workers: int = 1) -> list:
    """Apply ``fn`` to each chunk, preserving chunk order in the result."""
    if workers <= 1 or len(chunks) <= 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, chunks))
