# app/vectorized.py
"""Batched integer evaluation helpers for exhaustive enumeration (numpy int64)."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Sequence, Tuple, TypeVar

import numpy as np

from app.algebra import StructureTensor
from app.config import settings
from app.errors import LimitExceeded
from app.scalars import Monomial

S = TypeVar("S")
T = TypeVar("T")

# largest entry bound per dimension for exhaustive matrix enumeration
ENUMERATION_LIMITS = {1: 2, 2: 2, 3: 1}


def check_bound(n: int, bound: int) -> int:
    if bound < 1:
        raise LimitExceeded(f"bound must be at least 1, got {bound}")
    limit = ENUMERATION_LIMITS.get(n)
    if limit is None:
        raise LimitExceeded(f"no exhaustive enumeration for dimension {n}")
    if bound > limit:
        raise LimitExceeded(f"bound {bound} exceeds the limit {limit} for dimension {n}")
    return (2 * bound + 1) ** (n * n)


def integer_stacks(t: StructureTensor) -> List[np.ndarray]:
    """
    Split a tensor by parameter monomial into integer (n,n,n) arrays. Identities that are
    linear in the structure constants vanish identically iff they vanish on every stack;
    each stack is scaled by a positive integer to clear denominators.
    """
    n = t.dim
    groups: Dict[Monomial, Dict[Tuple[int, int, int], object]] = {}
    for i, j, k, v in t.nonzero():
        for mono, coeff in v.terms.items():
            groups.setdefault(mono, {})[(i, j, k)] = coeff
    stacks = []
    for mono in sorted(groups):
        entries = groups[mono]
        scale = math.lcm(*(c.denominator for c in entries.values()))
        arr = np.zeros((n, n, n), dtype=np.int64)
        for (i, j, k), c in entries.items():
            arr[i, j, k] = int(c * scale)
        stacks.append(arr)
    return stacks


def batch_det(m: np.ndarray) -> np.ndarray:
    n = m.shape[-1]
    if n == 1:
        return m[:, 0, 0].copy()
    if n == 2:
        return m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0]
    out = np.zeros(m.shape[0], dtype=m.dtype)
    for c in range(n):
        minor = np.delete(np.delete(m, 0, axis=1), c, axis=2)
        sign = 1 if c % 2 == 0 else -1
        out += sign * m[:, 0, c] * batch_det(minor)
    return out


def batch_adjugate(m: np.ndarray) -> np.ndarray:
    b, n, _ = m.shape
    if n == 1:
        return np.ones((b, 1, 1), dtype=m.dtype)
    adj = np.empty_like(m)
    for r in range(n):
        for c in range(n):
            minor = np.delete(np.delete(m, c, axis=1), r, axis=2)
            adj[:, r, c] = (1 if (r + c) % 2 == 0 else -1) * batch_det(minor)
    return adj


def grid_chunk(n: int, bound: int, start: int, stop: int) -> np.ndarray:
    """Candidates start..stop-1 in lexicographic order of row-major entries, each in [-bound, bound]."""
    base = 2 * bound + 1
    idx = np.arange(start, stop, dtype=np.int64)
    cells = n * n
    digits = np.empty((stop - start, cells), dtype=np.int64)
    for pos in range(cells):
        digits[:, pos] = (idx // base ** (cells - 1 - pos)) % base - bound
    return digits.reshape(-1, n, n)


def chunked(total: int, size: int | None = None) -> List[Tuple[int, int]]:
    size = size or settings.chunk_size
    return [(s, min(s + size, total)) for s in range(0, total, size)]


def map_ordered(fn: Callable[[S], T], items: Sequence[S], workers: int | None = None) -> List[T]:
    """Apply `fn` to every item; results come back in input order whatever the worker count."""
    workers = workers or settings.workers
    if workers <= 1 or len(items) <= 1:
        return [fn(s) for s in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
