"""
Ordered parallel map for independent table cells.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from config import get_settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(func: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> List[R]:
    """
    Apply func to each item, possibly on a thread pool, keeping input order.

    Args:
        func: Pure function of one item
        items: Work items
        threads: Worker count (default: FPADE_THREADS)

    Returns:
        Results in the order of items
    """
    items = list(items)
    threads = threads or get_settings().THREADS
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    logger.debug(f"Mapping {len(items)} cells on {threads} threads")
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))
