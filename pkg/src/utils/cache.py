# src/utils/cache.py

import logging
import threading
from functools import wraps
from typing import Any, Callable, Hashable, Optional

from cachetools import TTLCache

from .config import settings

logger = logging.getLogger(__name__)


class CacheManager:
    """
    Thread-safe cache for transform plans.

    Wraps a TTLCache behind a lock so that engine rows evaluated on worker
    threads can share frequency axes, twiddle vectors and lag index maps.
    """

    def __init__(self, maxsize: int = 32, ttl: int = 3600):
        """
        Initialize cache manager.

        Args:
            maxsize: Maximum number of plans kept
            ttl: Time-to-live in seconds
        """
        self._cache = TTLCache(maxsize=maxsize, ttl=ttl)
        self._lock = threading.Lock()
        self._stats = {"hits": 0, "misses": 0, "sets": 0, "invalidations": 0}

    def get(self, key: Hashable) -> Optional[Any]:
        """Retrieve a plan, or None on a miss."""
        with self._lock:
            value = self._cache.get(key)
            if value is not None:
                self._stats["hits"] += 1
                logger.debug(f"Plan cache HIT for key: {key}")
            else:
                self._stats["misses"] += 1
                logger.debug(f"Plan cache MISS for key: {key}")
            return value

    def set(self, key: Hashable, value: Any) -> None:
        """Store a plan."""
        with self._lock:
            self._cache[key] = value
            self._stats["sets"] += 1
            logger.debug(f"Plan cache SET for key: {key}")

    def invalidate(self, key: Hashable) -> None:
        """Remove a plan if present."""
        with self._lock:
            if key in self._cache:
                del self._cache[key]
                self._stats["invalidations"] += 1
                logger.debug(f"Plan cache INVALIDATED for key: {key}")

    def clear(self) -> None:
        """Clear all plans."""
        with self._lock:
            self._cache.clear()
        logger.info("Plan cache cleared")

    def get_stats(self) -> dict:
        """
        Get cache statistics.

        Returns:
            Dictionary containing hit/miss/set statistics and the hit rate
        """
        with self._lock:
            total_requests = self._stats["hits"] + self._stats["misses"]
            hit_rate = (self._stats["hits"] / total_requests * 100) if total_requests > 0 else 0

            return {
                **self._stats,
                "size": len(self._cache),
                "maxsize": self._cache.maxsize,
                "ttl": self._cache.ttl,
                "hit_rate_percent": round(hit_rate, 2),
                "total_requests": total_requests,
            }


def cached_plan(cache_manager: CacheManager, key_prefix: str = ""):
    """
    Decorator memoizing a pure function of hashable arguments.

    Cached arrays are marked read-only so a caller cannot corrupt a shared plan.

    Usage:
        @cached_plan(plan_cache, key_prefix="fft")
        def twiddles(count, spacing):
            ...
    """

    def decorator(func: Callable):
        @wraps(func)
        def wrapper(*args):
            cache_key = (key_prefix or func.__name__, args)

            cached_value = cache_manager.get(cache_key)
            if cached_value is not None:
                return cached_value

            result = func(*args)
            for item in result if isinstance(result, tuple) else (result,):
                if hasattr(item, "setflags"):
                    item.setflags(write=False)
            cache_manager.set(cache_key, result)

            return result

        return wrapper

    return decorator


# Shared by the spectral and engine services
plan_cache = CacheManager(maxsize=settings.cache_maxsize, ttl=settings.cache_ttl)
