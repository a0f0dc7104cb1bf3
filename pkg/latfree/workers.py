import logging
from multiprocessing import Pool
from typing import Callable, Iterable, List, Optional, TypeVar

from . import config

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(func: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> List[R]:
    """Map func over items, in a process pool when more than one worker is configured.

    Results always come back in input order. func must be a module-level function.
    """
    items = list(items)
    n = config.WORKERS if workers is None else workers
    if n <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    n = min(n, len(items))
    logger.debug(f"WORKERS: mapping {getattr(func, '__name__', func)} over {len(items)} items with {n} processes")
    with Pool(processes=n) as pool:
        return pool.map(func, items)
