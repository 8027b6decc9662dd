# kernels/pool.py
# Разбиение [0, total) на куски и параллельный запуск nogil-ядер в потоках.
from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, List, Sequence, Tuple

log = logging.getLogger(__name__)

__all__ = ["partition", "run_partitioned"]

CHUNKS_PER_WORKER = 4


def partition(total: int, workers: int, chunks_per_worker: int = CHUNKS_PER_WORKER) -> List[Tuple[int, int]]:
    """Непересекающиеся [start, stop) в порядке одометра; результат не зависит от числа потоков при слиянии сложением."""
    if total <= 0:
        return []
    parts = max(1, min(total, workers * chunks_per_worker))
    step, extra = divmod(total, parts)
    out = []
    start = 0
    for k in range(parts):
        stop = start + step + (1 if k < extra else 0)
        out.append((start, stop))
        start = stop
    return out


def run_partitioned(
    kernel: Callable[..., Any],
    args: Sequence[Any],
    total: int,
    workers: int,
    label: str = "scan",
) -> List[Any]:
    """kernel(*args, start, stop) по всем кускам; результаты в порядке кусков."""
    ranges = partition(total, workers)
    log.debug("%s: %d элементов, %d кусков, %d потоков", label, total, len(ranges), workers)
    t0 = time.perf_counter()
    if workers <= 1 or len(ranges) <= 1:
        results = [kernel(*args, start, stop) for start, stop in ranges]
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            futures = [ex.submit(kernel, *args, start, stop) for start, stop in ranges]
            results = [f.result() for f in futures]
    elapsed = time.perf_counter() - t0
    if elapsed > 0:
        log.debug("%s: %.2f с, %.0f элементов/с", label, elapsed, total / elapsed)
    return results
