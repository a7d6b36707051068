"""Order-preserving fan-out of independent jobs over worker threads."""

from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Sequence, TypeVar

from loguru import logger

T = TypeVar("T")
R = TypeVar("R")


def run_ordered(
    fn: Callable[[T], R],
    items: Sequence[T],
    max_workers: int = 1,
    label: str = "job",
) -> list[R]:
    """
    Apply fn to every item, possibly concurrently.

    Results come back in the order of items regardless of completion order.
    If jobs fail, the exception of the lowest-index failing job is re-raised
    after all jobs finish.

    Args:
        fn: Pure function of one item
        items: Inputs
        max_workers: Thread count (values below 1 mean 1)
        label: Name used in progress logs

    Returns:
        List of results aligned with items
    """
    total = len(items)
    if total == 0:
        return []

    try:
        normalized_workers = int(max_workers)
    except (TypeError, ValueError):
        logger.warning(f"Invalid max_workers={max_workers}, fallback to 1")
        normalized_workers = 1
    worker_count = min(max(1, normalized_workers), total)

    if worker_count == 1:
        return [fn(item) for item in items]

    logger.debug(f"Running {total} {label}(s) on {worker_count} worker(s)")
    results: dict[int, R] = {}
    errors: dict[int, Exception] = {}
    with ThreadPoolExecutor(max_workers=worker_count) as executor:
        future_to_index = {executor.submit(fn, item): index for index, item in enumerate(items)}

        completed = 0
        for future in as_completed(future_to_index):
            index = future_to_index[future]
            completed += 1
            try:
                results[index] = future.result()
            except Exception as e:
                logger.error(f"{label} {index + 1}/{total} failed: {e}")
                errors[index] = e
            if completed % 100 == 0:
                logger.debug(f"[{completed}/{total}] {label}s done")

    if errors:
        raise errors[min(errors)]
    return [results[index] for index in range(total)]
