import functools
import statistics
import time
from typing import Callable, Any, List, Tuple


def log_execution_time(logger_func: Callable = print):
    """
    Decorator to log the execution time of a function.
    """
    def decorator(func: Callable):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.perf_counter()
            result = func(*args, **kwargs)
            duration = time.perf_counter() - start_time
            logger_func(f"Execution of {func.__name__} took {duration:.4f}s")
            return result
        return wrapper
    return decorator


def timed_median(func: Callable, *args: Any, repeat: int = 3, **kwargs: Any) -> Tuple[float, Any]:
    """
    Run func `repeat` times and return (median seconds, last result).
    """
    times: List[float] = []
    result = None
    for _ in range(max(1, repeat)):
        start_time = time.perf_counter()
        result = func(*args, **kwargs)
        times.append(time.perf_counter() - start_time)
    return statistics.median(times), result
