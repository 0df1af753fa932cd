# reprosamples/service/executor.py
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

from loguru import logger

T = TypeVar("T")
R = TypeVar("R")


class TaskRunner:
    """Service for running independent tasks serially or on a thread pool"""

    @staticmethod
    def map(fn: Callable[[T], R], items: Iterable[T], threads: int = 1, label: str = "tasks") -> List[R]:
        """
        Apply ``fn`` to every item

        Results come back in item order whatever the scheduling, so folds over
        them are deterministic.

        Args:
            fn: task body; must not share mutable state between calls
            items: task inputs
            threads: worker count, 1 runs inline
            label: name used in log messages
        """
        items = list(items)
        if threads <= 1 or len(items) <= 1:
            return [fn(item) for item in items]

        logger.debug(f"Running {len(items)} {label} on {threads} threads")
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
