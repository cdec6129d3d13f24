# app/metrics.py
from __future__ import annotations
import time
import threading
from collections import defaultdict, deque
from typing import Deque, Dict

class _LatencyWindow:
    """Most recent `size` timings of one solver stage; enough for a p95 in the --stats snapshot."""
    def __init__(self, size: int = 200):
        self.lock = threading.Lock()
        self.samples: Deque[float] = deque(maxlen=size)
    def observe_ms(self, ms: float):
        with self.lock:
            self.samples.append(ms)
    def p95_ms(self) -> float:
        with self.lock:
            arr = sorted(self.samples)
        if not arr:
            return 0.0
        return arr[int(0.95 * (len(arr) - 1))]

class Metrics:
    """Process-wide counters and latency windows for solver work (nullspaces, residual batches, searches)."""
    def __init__(self):
        self.counters: Dict[str, int] = defaultdict(int)
        self.windows: Dict[str, _LatencyWindow] = defaultdict(_LatencyWindow)
        self.lock = threading.Lock()
        self.process_start_ns = time.time_ns()
    def inc(self, key: str, n: int = 1):
        with self.lock:
            self.counters[key] += n
    def observe_ms(self, key: str, ms: float):
        with self.lock:
            window = self.windows[key]
        window.observe_ms(ms)
    def snapshot(self) -> Dict:
        up_ms = (time.time_ns() - self.process_start_ns) / 1e6
        with self.lock:
            counters = dict(sorted(self.counters.items()))
            windows = sorted(self.windows.items())
        return {
            "uptime_ms": up_ms,
            "counters": counters,
            "latency_p95_ms": {k: w.p95_ms() for k, w in windows},
        }
    def reset(self):
        with self.lock:
            self.counters.clear()
            self.windows.clear()

metrics = Metrics()
