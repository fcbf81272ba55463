import os
from concurrent.futures import ThreadPoolExecutor

from .errors import ParameterError

THREADS_ENV = "EPSLS_THREADS"


def resolve_threads(threads: int | None = None) -> int:
    """Explicit value, else ``$EPSLS_THREADS``, else 1."""
    if threads is None:
        env = os.environ.get(THREADS_ENV, "").strip()
        if not env:
            return 1
        try:
            threads = int(env)
        except ValueError:
            raise ParameterError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    if threads < 1:
        raise ParameterError(f"threads must be >= 1, got {threads}")
    return threads


def ordered_map(fn, items, threads: int = 1) -> list:
    """``list(map(fn, items))``, optionally on a thread pool; result order is fixed."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
