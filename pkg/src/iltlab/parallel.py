"""Replicate-parallel execution.

Work is split into contiguous replicate ranges; each range is evaluated by a
pure function of ``(args, start, stop)`` and the results are concatenated in
range order.  Because every replicate draws from its own stream the output
does not depend on the number of workers.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

ENV_WORKERS = "ILTLAB_WORKERS"


def resolve_workers(requested: int | None = None) -> int:
    env = os.environ.get(ENV_WORKERS)
    if env:
        return max(1, int(env))
    return max(1, int(requested or 1))


def split_range(total: int, chunks: int) -> list[tuple[int, int]]:
    chunks = max(1, min(chunks, total)) if total else 1
    edges = np.linspace(0, total, chunks + 1).round().astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def map_replicates(fn, args, total: int, workers: int = 1, chunk_size: int = 20000) -> np.ndarray:
    """Evaluate ``fn(args, start, stop)`` over ``[0, total)`` and concatenate."""
    n_chunks = max(workers, -(-total // chunk_size)) if total else 1
    ranges = split_range(total, n_chunks)
    if workers <= 1 or len(ranges) <= 1:
        parts = [fn(args, a, b) for a, b in ranges]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(fn, args, a, b) for a, b in ranges]
            parts = [f.result() for f in futures]
    if not parts:
        return np.zeros(0)
    return np.concatenate(parts)
