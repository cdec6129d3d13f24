# app/cohomology.py
"""
Second cohomology of a pair with coefficients in its own underlying space and trivial
actions. A 2-cochain is a pair (g, h) of bilinear maps, g for the first product and h
for the second; coordinate a*n^3 + i*n^2 + j*n + r (a = 0 for g, 1 for h) holds the
e_r-coefficient of the map on (e_i, e_j).

H^2 is taken as Z^2 / (B^2 ∩ Z^2), which is the usual quotient whenever the pair is
compatible.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from itertools import product
from typing import Dict, List, Tuple

from app.algebra import AlgebraPair
from app.cache import space_cache
from app.linalg import LinearSystem, OperatorSpace, Vector, canonical_basis, nullspace, span_intersection
from app.obs import timed
from app.scalars import ZERO, Poly


class CohomologyMode(str, Enum):
    MIXED = "mixed"
    STRICT = "strict"


def cochain_labels(n: int) -> Tuple[str, ...]:
    return tuple(
        f"{sym}{r + 1}_{i + 1}{j + 1}" for sym in ("g", "h") for i in range(n) for j in range(n) for r in range(n)
    )


def _col(n: int, a: int, i: int, j: int, r: int) -> int:
    return a * n ** 3 + i * n * n + j * n + r


def _add(row: Dict[int, Poly], col: int, v: Poly) -> None:
    row[col] = row.get(col, ZERO) + v


def cocycle_system(pair: AlgebraPair, mode: CohomologyMode = CohomologyMode.MIXED) -> LinearSystem:
    n = pair.dim
    c1, c2 = (t.c for t in pair.tensors)
    rows: List[Dict[int, Poly]] = []
    for i, j, k, r in product(range(n), repeat=4):
        # h(e_i ⋆1 e_j, e_k) + g(e_i ⋆2 e_j, e_k) - g(e_i, e_j ⋆2 e_k) - h(e_i, e_j ⋆1 e_k)
        row: Dict[int, Poly] = {}
        for m in range(n):
            if c1[i][j][m]:
                _add(row, _col(n, 1, m, k, r), c1[i][j][m])
            if c2[i][j][m]:
                _add(row, _col(n, 0, m, k, r), c2[i][j][m])
            if c2[j][k][m]:
                _add(row, _col(n, 0, i, m, r), -c2[j][k][m])
            if c1[j][k][m]:
                _add(row, _col(n, 1, i, m, r), -c1[j][k][m])
        rows.append(row)
    if mode is CohomologyMode.STRICT:
        for a, c in ((0, c1), (1, c2)):
            for i, j, k, r in product(range(n), repeat=4):
                row = {}
                for m in range(n):
                    if c[i][j][m]:
                        _add(row, _col(n, a, m, k, r), c[i][j][m])
                    if c[j][k][m]:
                        _add(row, _col(n, a, i, m, r), -c[j][k][m])
                rows.append(row)
    return LinearSystem.from_rows(rows, cochain_labels(n))


def _excluded(pair: AlgebraPair):
    return {p.name: [x.constant for x in p.excluded if x.is_constant] for p in pair.parameters}


def cocycle_space(pair: AlgebraPair, mode: CohomologyMode = CohomologyMode.MIXED, reverse_columns: bool = False) -> OperatorSpace:
    key = ("cocycle", pair.first.tensor, pair.second.tensor, mode.value, reverse_columns)

    def compute() -> OperatorSpace:
        system = cocycle_system(pair, mode)
        order = list(reversed(range(len(system.labels)))) if reverse_columns else None
        space = nullspace(system, column_order=order, excluded=_excluded(pair))
        return replace(space, kind=f"cocycle/{mode.value}")

    return space_cache.get_or_compute(key, compute, label="cocycle")


def coboundary_generators(pair: AlgebraPair) -> List[Vector]:
    """Images of the unit matrices E_rk under T ↦ (-T∘⋆1, -T∘⋆2)."""
    n = pair.dim
    size = 2 * n ** 3
    out: List[Vector] = []
    for k, r in product(range(n), repeat=2):
        vec = [ZERO] * size
        for a, t in enumerate(pair.tensors):
            for i, j in product(range(n), repeat=2):
                v = t.c[i][j][k]
                if v:
                    vec[_col(n, a, i, j, r)] = -v
        out.append(tuple(vec))
    return out


def coboundary_space(pair: AlgebraPair) -> OperatorSpace:
    n = pair.dim
    basis, leading = canonical_basis(coboundary_generators(pair), 2 * n ** 3)
    return OperatorSpace(labels=cochain_labels(n), basis=basis, leading=leading, kind="coboundary")


@dataclass(frozen=True)
class CohomologyResult:
    mode: CohomologyMode
    dim_Z2: int
    dim_B2: int
    dim_B2_in_Z2: int
    z2: OperatorSpace
    representatives: Tuple[Vector, ...]
    generator_labels: Tuple[str, ...]
    coboundaries_are_cocycles: bool
    order_independent: bool

    @property
    def dim_H2(self) -> int:
        return self.dim_Z2 - self.dim_B2_in_Z2


def second_cohomology(pair: AlgebraPair, mode: CohomologyMode = CohomologyMode.MIXED) -> CohomologyResult:
    with timed("second_cohomology", pair=pair.name, mode=mode.value):
        z2 = cocycle_space(pair, mode)
        b2 = coboundary_space(pair)
        inter, inter_leading = span_intersection(b2, z2)
        taken = set(inter_leading)
        reps = tuple(vec for vec, lead in zip(z2.basis, z2.leading) if lead not in taken)
        names = tuple(z2.labels[lead] for lead in z2.leading if lead not in taken)
        # elimination in reversed column order must give the same dimensions
        z2_rev = cocycle_space(pair, mode, reverse_columns=True)
        b2_rev, _ = canonical_basis(list(reversed(coboundary_generators(pair))), len(z2.labels))
    return CohomologyResult(
        mode=mode,
        dim_Z2=z2.dim,
        dim_B2=b2.dim,
        dim_B2_in_Z2=len(inter),
        z2=z2,
        representatives=reps,
        generator_labels=names,
        coboundaries_are_cocycles=len(inter) == b2.dim,
        order_independent=(
            z2_rev.dim == z2.dim and len(b2_rev) == b2.dim and all(z2.contains(v) for v in z2_rev.basis)
        ),
    )
