"""Replica campaigns split into chunks and run on a process pool.

Each replica draws from its own (master_seed, replica_index, engine_tag)
stream, so merged results do not depend on chunking or worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .lpp import lpp_batch
from .osp import osp_batch

__all__ = ["ReplicaBlock", "run_replicas", "ENGINES"]

ENGINES = ("osp", "lpp")


@dataclass
class ReplicaBlock:
    """Per-replica outputs in replica-index order; ``vectors`` holds U or V rows."""

    engine: str
    n: int
    master_seed: int
    replicas: np.ndarray
    T: np.ndarray
    vectors: np.ndarray | None
    wall_time: np.ndarray


def _run_chunk(engine: str, n: int, start: int, stop: int, master_seed: int, keep_vectors: bool):
    batch = osp_batch if engine == "osp" else lpp_batch
    return start, batch(n, range(start, stop), master_seed, keep_vectors, with_time=True)


def _chunks(total: int, workers: int, chunk: int | None):
    if chunk is None:
        chunk = max(1, min(5000, -(-total // (4 * workers))))
    return [(s, min(s + chunk, total)) for s in range(0, total, chunk)]


def run_replicas(engine: str, n: int, replicas: int, master_seed: int, workers: int = 1,
                 keep_vectors: bool = False, chunk: int | None = None) -> ReplicaBlock:
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}")
    if n < 2:
        raise ValueError("N must be at least 2")
    if replicas < 1:
        raise ValueError("replicas must be positive")
    workers = max(1, min(int(workers), replicas))
    pieces = _chunks(replicas, workers, chunk)
    if workers == 1:
        results = [_run_chunk(engine, n, a, b, master_seed, keep_vectors) for a, b in pieces]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_chunk, engine, n, a, b, master_seed, keep_vectors) for a, b in pieces]
            results = [f.result() for f in futures]
    results.sort(key=lambda item: item[0])
    T = np.concatenate([r[1][0] for r in results])
    vectors = np.concatenate([r[1][1] for r in results]) if keep_vectors else None
    wall = np.concatenate([r[1][2] for r in results])
    return ReplicaBlock(engine, n, master_seed, np.arange(replicas), T, vectors, wall)
