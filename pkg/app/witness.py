# app/witness.py
"""
Bounded search for a basis change P making (A, P·B) compatible on the nose.

Candidates are integer matrices with entries in [-bound, bound]: the identity first,
then the other permutation matrices, then the full grid in lexicographic order. Only
the second component is transported.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Dict, List, Tuple

import numpy as np

from app.algebra import Algebra, AlgebraPair, DefectReport, check_compatible, require_associative, transport
from app.config import settings
from app.errors import DimensionMismatch, SoundnessError, WorkbenchError
from app.matrices import Matrix, as_matrix
from app.metrics import metrics
from app.obs import emit, timed
from app.scalars import Monomial, mono_mul
from app.vectorized import batch_adjugate, batch_det, check_bound, chunked, grid_chunk, map_ordered

IntMatrix = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class Witness:
    first: Algebra
    second: Algebra
    p: Matrix
    pair: AlgebraPair  # (first, transport(second, p))
    defect: DefectReport


@dataclass(frozen=True)
class ExhaustionReport:
    first: str
    second: str
    bound: int
    candidates: int  # grid size (2*bound+1)^(n*n)
    invertible: int  # candidates actually tested

    def __str__(self) -> str:
        return (
            f"no witness for ({self.first}, {self.second}) among {self.invertible} invertible integer "
            f"matrices with entries in [-{self.bound}, {self.bound}]"
        )


def _monomial_arrays(t) -> Dict[Monomial, np.ndarray]:
    """Tensor split by parameter monomial, all parts scaled by one common positive integer."""
    n = t.dim
    parts: Dict[Monomial, Dict[Tuple[int, int, int], Fraction]] = {}
    for i, j, k, v in t.nonzero():
        for mono, coeff in v.terms.items():
            parts.setdefault(mono, {})[(i, j, k)] = coeff
    scale = math.lcm(1, *(c.denominator for p in parts.values() for c in p.values()))
    out = {}
    for mono, entries in parts.items():
        arr = np.zeros((n, n, n), dtype=np.int64)
        for (i, j, k), c in entries.items():
            arr[i, j, k] = int(c * scale)
        out[mono] = arr
    return out


def _batch_transport(c: np.ndarray, p: np.ndarray, adj: np.ndarray) -> np.ndarray:
    """det(P) times the transported tensor, for every P in the batch."""
    return np.einsum("bkm,bpi,bqj,pqm->bijk", adj, p, p, c)


def _batch_defect(c1: np.ndarray, c2: np.ndarray) -> np.ndarray:
    """Compatibility defect of a fixed tensor c1 against a batch c2, shape (B, n, n, n, n)."""
    right = np.einsum("bjkm,imr->bijkr", c2, c1) + np.einsum("jkm,bimr->bijkr", c1, c2)
    left = np.einsum("ijm,bmkr->bijkr", c1, c2) + np.einsum("bijm,mkr->bijkr", c2, c1)
    return right - left


def _compatible_batch(first: Dict[Monomial, np.ndarray], second: Dict[Monomial, np.ndarray], p: np.ndarray) -> np.ndarray:
    adj = batch_adjugate(p)
    moved = {mono: _batch_transport(c, p, adj) for mono, c in second.items()}
    # the defect is bilinear; it vanishes identically iff every monomial coefficient does
    grouped: Dict[Monomial, np.ndarray] = {}
    for m1, c1 in first.items():
        for m2, c2 in moved.items():
            key = mono_mul(m1, m2)
            d = _batch_defect(c1, c2)
            grouped[key] = grouped[key] + d if key in grouped else d
    ok = np.ones(p.shape[0], dtype=bool)
    for d in grouped.values():
        ok &= ~d.reshape(p.shape[0], -1).any(axis=1)
    return ok


def _priority(n: int) -> List[IntMatrix]:
    out = []
    for perm in permutations(range(n)):
        out.append(tuple(tuple(1 if perm[c] == r else 0 for c in range(n)) for r in range(n)))
    return out  # the identity permutation comes first


def _grid_index(mat: IntMatrix, bound: int) -> int:
    base = 2 * bound + 1
    idx = 0
    for x in (x for row in mat for x in row):
        idx = idx * base + (x + bound)
    return idx


def _witness(a: Algebra, b: Algebra, mat: IntMatrix) -> Witness:
    p = as_matrix(mat)
    moved = transport(b, p, name=f"{b.name}^P")
    pair = AlgebraPair(a, moved)
    defect = check_compatible(pair)
    if not defect.empty:
        raise SoundnessError(f"batched search accepted {mat} but the exact defect is nonzero")
    return Witness(a, b, p, pair, defect)


def search_witness(a: Algebra, b: Algebra, bound: int, workers: int | None = None) -> Witness | ExhaustionReport:
    if a.dim != b.dim:
        raise DimensionMismatch(f"{a.name} has dimension {a.dim}, {b.name} has {b.dim}")
    n = a.dim
    total = check_bound(n, bound)
    require_associative(a)
    require_associative(b)
    workers = workers or settings.workers
    first, second = _monomial_arrays(a.tensor), _monomial_arrays(b.tensor)

    with timed("search_witness", first=a.name, second=b.name, bound=bound):
        priority = _priority(n)
        batch = np.array(priority, dtype=np.int64).reshape(-1, n, n)
        hits = np.flatnonzero(_compatible_batch(first, second, batch))
        tested = len(priority)
        if hits.size:
            metrics.inc("witness.found")
            return _witness(a, b, priority[int(hits[0])])
        skip = {_grid_index(m, bound) for m in priority}

        def run(span: Tuple[int, int]) -> Tuple[int | None, int]:
            chunk = grid_chunk(n, bound, *span)
            keep = batch_det(chunk) != 0
            idx = np.arange(span[0], span[1])
            keep &= ~np.isin(idx, list(skip))
            ok = np.zeros(chunk.shape[0], dtype=bool)
            if keep.any():
                ok[keep] = _compatible_batch(first, second, chunk[keep])
            found = np.flatnonzero(ok)
            return (int(idx[found[0]]) if found.size else None), int(keep.sum())

        spans = chunked(total)
        # waves of `workers` chunks keep early exit without losing the global order
        for w in range(0, len(spans), workers):
            for found, count in map_ordered(run, spans[w:w + workers], workers):
                tested += count
                if found is not None:
                    metrics.inc("witness.found")
                    mat = grid_chunk(n, bound, found, found + 1)[0]
                    return _witness(a, b, tuple(tuple(int(x) for x in row) for row in mat))
    metrics.inc("witness.exhausted")
    emit("witness_exhausted", first=a.name, second=b.name, bound=bound, tested=tested)
    return ExhaustionReport(a.name, b.name, bound, total, tested)


def verify_witness(w: Witness) -> bool:
    """Recompute the transport and the full defect from scratch."""
    try:
        moved = transport(w.second, w.p)
    except WorkbenchError:
        return False
    if moved.tensor != w.pair.second.tensor or w.pair.first.tensor != w.first.tensor:
        return False
    return check_compatible(AlgebraPair(w.first, moved)).empty
