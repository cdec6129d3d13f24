# app/obs.py
from __future__ import annotations
import json, sys, time
from contextlib import contextmanager
from typing import Any, Iterator
from app.config import settings
from app.metrics import metrics


def emit(event: str, **fields: Any) -> None:
    """One JSON object per line on stderr; stdout is reserved for reports."""
    if not settings.log_events:
        return
    print(json.dumps({"event": event, **fields}, default=str, sort_keys=True), file=sys.stderr)


@contextmanager
def timed(key: str, **fields: Any) -> Iterator[None]:
    start = time.perf_counter()
    try:
        yield
    finally:
        ms = (time.perf_counter() - start) * 1000
        metrics.inc(f"{key}.count")
        metrics.observe_ms(f"{key}.ms", ms)
        emit(key, ms=round(ms, 1), **fields)
