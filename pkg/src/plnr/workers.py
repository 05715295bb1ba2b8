import logging
import os
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Sequence

logger = logging.getLogger(__name__)

THREADS_ENV = "PLNR_THREADS"


def threadCount(requested: int | None = None) -> int:
    """Explicit request, then $PLNR_THREADS, then the CPU count."""
    if requested:
        return max(1, int(requested))
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            logger.warning(f"Ignoring {THREADS_ENV}='{env}': not an integer")
    return os.cpu_count() or 1


def runCells(fn: Callable, cells: Sequence, threads: int | None = None) -> list:
    """Apply fn to every cell; results come back in input order."""
    threads = threadCount(threads)
    if threads == 1 or len(cells) <= 1:
        return [fn(cell) for cell in cells]

    results: list = [None] * len(cells)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {pool.submit(fn, cell): i for i, cell in enumerate(cells)}
        for future in as_completed(futures):
            results[futures[future]] = future.result()
    return results


def firstFailure(kernel: Callable, args: tuple, start: int, stop: int,
                 threads: int | None = None) -> int:
    """Smallest index in [start, stop) rejected by kernel(*args, lo, hi), or -1.

    The range is cut into chunks processed in waves of one chunk per thread;
    a wave that finds failures ends the scan, so the answer is the same as a
    sequential scan.
    """
    threads = threadCount(threads)
    if threads == 1 or stop - start < 64:
        return int(kernel(*args, start, stop))

    chunk = max(16, (stop - start) // (threads * 4))
    lo = start
    with ThreadPoolExecutor(max_workers=threads) as pool:
        while lo < stop:
            bounds = [(a, min(a + chunk, stop)) for a in range(lo, min(lo + chunk * threads, stop), chunk)]
            results = list(pool.map(lambda b: int(kernel(*args, b[0], b[1])), bounds))
            failures = [r for r in results if r >= 0]
            if failures:
                return min(failures)
            lo = bounds[-1][1]
    return -1
