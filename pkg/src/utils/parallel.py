"""
Worker pool helper
Maps picklable tasks inline or over a multiprocessing pool, keeping task order
"""
from multiprocessing import Pool, cpu_count
from typing import Callable, Iterable, List, Optional

from .config import Config
from .logger import get_logger

logger = get_logger(__name__)


def map_tasks(func: Callable, tasks: Iterable, workers: Optional[int] = None) -> List:
    """
    Apply func to every task

    Args:
        func: Module-level callable (must be picklable for workers > 1)
        tasks: Task arguments, one per call
        workers: Process count (default: Config.WORKERS, 0 means all CPUs)

    Returns:
        Results in task order regardless of completion order
    """
    tasks = list(tasks)
    if workers is None:
        workers = Config.WORKERS
    if workers == 0:
        workers = cpu_count()

    if workers <= 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]

    processes = min(workers, len(tasks))
    logger.debug(f"Dispatching {len(tasks)} tasks to {processes} workers")
    with Pool(processes=processes) as pool:
        return pool.map(func, tasks)
