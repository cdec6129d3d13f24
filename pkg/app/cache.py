# app/cache.py
from __future__ import annotations
import threading
import time
from typing import Any, Callable, Dict, Hashable, Optional, TypeVar

from app.config import settings
from app.metrics import metrics

T = TypeVar("T")


class MemoCache:
    """
    Thread-safe memo for solved spaces with least-recently-touched eviction.
    Keys must be hashable; values are immutable results.
    """
    def __init__(self, max_items: int = 512):
        self.max_items = max_items
        self._store: Dict[Hashable, Any] = {}
        self._touch: Dict[Hashable, float] = {}
        self._lock = threading.Lock()

    def get(self, key: Hashable) -> Optional[Any]:
        with self._lock:
            if key not in self._store:
                return None
            self._touch[key] = time.monotonic()
            return self._store[key]

    def set(self, key: Hashable, val: Any) -> None:
        with self._lock:
            if key not in self._store and len(self._store) >= self.max_items:
                victim = min(self._touch.items(), key=lambda kv: kv[1])[0]
                self._store.pop(victim, None)
                self._touch.pop(victim, None)
            self._store[key] = val
            self._touch[key] = time.monotonic()

    def get_or_compute(self, key: Hashable, compute: Callable[[], T], label: str = "space") -> T:
        cached = self.get(key)
        if cached is not None:
            metrics.inc(f"cache.hit.{label}")
            return cached
        metrics.inc(f"cache.miss.{label}")
        val = compute()
        self.set(key, val)
        return val

    def clear(self) -> None:
        with self._lock:
            self._store.clear()
            self._touch.clear()

    def __len__(self) -> int:
        with self._lock:
            return len(self._store)


# singleton memo for invariant and cocycle spaces
space_cache = MemoCache(max_items=settings.cache_items)
