# app/linear_invariants.py
"""
Linear invariants of an algebra pair: every defining identity is expanded on basis
pairs (e_i, e_j) for both products, which turns it into homogeneous linear rows in
the matrix entries of the unknown maps.
"""
from __future__ import annotations

from dataclasses import replace
from enum import Enum
from itertools import product
from typing import Dict, List, Sequence, Tuple

from app.algebra import AlgebraPair, Element, StructureTensor, basis_element, is_zero, multiply_tensor, sub
from app.cache import space_cache
from app.errors import SoundnessError, UnknownInvariant
from app.linalg import Echelon, LinearSystem, OperatorSpace, echelon, nullspace
from app.matrices import Matrix, apply
from app.obs import emit
from app.scalars import ZERO, Poly

Form = Dict[int, Poly]


class InvariantKind(str, Enum):
    DERIVATION = "derivation"
    CENTROID = "centroid"
    QUASI_CENTROID = "quasi-centroid"
    QUASI_DERIVATION = "quasi-derivation"
    GENERALIZED_DERIVATION = "generalized-derivation"

    @property
    def blocks(self) -> Tuple[str, ...]:
        return _BLOCKS[self]

    @classmethod
    def parse(cls, text: str) -> "InvariantKind":
        try:
            return cls(text.strip())
        except ValueError:
            raise UnknownInvariant(
                f"unknown invariant {text!r}; expected one of {', '.join(k.value for k in cls)}"
            ) from None


_BLOCKS = {
    InvariantKind.DERIVATION: ("d",),
    InvariantKind.CENTROID: ("beta",),
    InvariantKind.QUASI_CENTROID: ("delta",),
    InvariantKind.QUASI_DERIVATION: ("d", "dp"),
    InvariantKind.GENERALIZED_DERIVATION: ("d", "dp", "dpp"),
}


def unknown_labels(n: int, blocks: Sequence[str]) -> Tuple[str, ...]:
    # coordinate b*n*n + i*n + r is M_b[r][i], i.e. the e_r-coefficient of M_b(e_i)
    return tuple(f"{sym}{r + 1}_{i + 1}" for sym in blocks for i in range(n) for r in range(n))


class _Forms:
    """Linear forms in the unknown matrix entries, one per output coordinate."""

    def __init__(self, t: StructureTensor):
        self.t = t
        self.n = t.dim

    def col(self, b: int, i: int, r: int) -> int:
        return b * self.n * self.n + i * self.n + r

    def map_left(self, b: int, i: int, j: int) -> List[Form]:
        # X(e_i) ⋆ e_j
        n, c = self.n, self.t.c
        return [{self.col(b, i, p): c[p][j][r] for p in range(n) if c[p][j][r]} for r in range(n)]

    def map_right(self, b: int, i: int, j: int) -> List[Form]:
        # e_i ⋆ X(e_j)
        n, c = self.n, self.t.c
        return [{self.col(b, j, q): c[i][q][r] for q in range(n) if c[i][q][r]} for r in range(n)]

    def map_of_product(self, b: int, i: int, j: int) -> List[Form]:
        # X(e_i ⋆ e_j)
        n, c = self.n, self.t.c
        return [{self.col(b, k, r): c[i][j][k] for k in range(n) if c[i][j][k]} for r in range(n)]


def _combine(*signed: Tuple[int, List[Form]]) -> List[Form]:
    n = len(signed[0][1])
    out: List[Form] = [dict() for _ in range(n)]
    for sign, forms in signed:
        for r, form in enumerate(forms):
            for col, v in form.items():
                out[r][col] = out[r].get(col, ZERO) + (v if sign > 0 else -v)
    return [{c: v for c, v in f.items() if v} for f in out]


def _branches(kind: InvariantKind, f: _Forms, i: int, j: int) -> List[List[Form]]:
    if kind is InvariantKind.DERIVATION:
        return [_combine((1, f.map_of_product(0, i, j)), (-1, f.map_left(0, i, j)), (-1, f.map_right(0, i, j)))]
    if kind is InvariantKind.CENTROID:
        return [
            _combine((1, f.map_of_product(0, i, j)), (-1, f.map_left(0, i, j))),
            _combine((1, f.map_of_product(0, i, j)), (-1, f.map_right(0, i, j))),
        ]
    if kind is InvariantKind.QUASI_CENTROID:
        return [_combine((1, f.map_left(0, i, j)), (-1, f.map_right(0, i, j)))]
    if kind is InvariantKind.QUASI_DERIVATION:
        return [_combine((1, f.map_of_product(1, i, j)), (-1, f.map_left(0, i, j)), (-1, f.map_right(0, i, j)))]
    return [_combine((1, f.map_of_product(2, i, j)), (-1, f.map_left(0, i, j)), (-1, f.map_right(1, i, j)))]


def assemble_system(pair: AlgebraPair, kind: InvariantKind) -> LinearSystem:
    """Rows ordered by product, then basis pair (i, j), then identity branch, then component r."""
    n = pair.dim
    rows: List[Form] = []
    for t in pair.tensors:
        forms = _Forms(t)
        for i, j in product(range(n), repeat=2):
            for branch in _branches(kind, forms, i, j):
                rows.extend(branch)
    return LinearSystem.from_rows(rows, unknown_labels(n, kind.blocks))


def identity_defect(pair: AlgebraPair, kind: InvariantKind, maps: Sequence[Matrix]) -> List[Tuple[int, int, int, Element]]:
    """Nonzero values of the defining identity on basis pairs, evaluated through `multiply`."""
    n = pair.dim
    out = []
    for s, t in enumerate(pair.tensors):
        for i, j in product(range(n), repeat=2):
            ei, ej = basis_element(n, i), basis_element(n, j)
            uv = multiply_tensor(t, ei, ej)
            img = [apply(m, ei) for m in maps]
            imgj = [apply(m, ej) for m in maps]
            if kind is InvariantKind.DERIVATION:
                checks = [sub(sub(apply(maps[0], uv), multiply_tensor(t, img[0], ej)), multiply_tensor(t, ei, imgj[0]))]
            elif kind is InvariantKind.CENTROID:
                lhs = apply(maps[0], uv)
                checks = [sub(lhs, multiply_tensor(t, img[0], ej)), sub(lhs, multiply_tensor(t, ei, imgj[0]))]
            elif kind is InvariantKind.QUASI_CENTROID:
                checks = [sub(multiply_tensor(t, img[0], ej), multiply_tensor(t, ei, imgj[0]))]
            elif kind is InvariantKind.QUASI_DERIVATION:
                checks = [sub(sub(apply(maps[1], uv), multiply_tensor(t, img[0], ej)), multiply_tensor(t, ei, imgj[0]))]
            else:
                checks = [sub(sub(apply(maps[2], uv), multiply_tensor(t, img[0], ej)), multiply_tensor(t, ei, imgj[1]))]
            out.extend((s, i, j, v) for v in checks if not is_zero(v))
    return out


def _pair_key(pair: AlgebraPair) -> Tuple:
    return (pair.first.tensor, pair.second.tensor)


def _excluded(pair: AlgebraPair) -> Dict[str, List]:
    return {p.name: [x.constant for x in p.excluded if x.is_constant] for p in pair.parameters}


def invariant_space(pair: AlgebraPair, kind: InvariantKind, column_order: Sequence[int] | None = None) -> OperatorSpace:
    key = ("invariant", _pair_key(pair), kind.value, tuple(column_order) if column_order else None)
    return space_cache.get_or_compute(key, lambda: _solve(pair, kind, column_order), label=kind.value)


def _solve(pair: AlgebraPair, kind: InvariantKind, column_order: Sequence[int] | None) -> OperatorSpace:
    n = pair.dim
    system = assemble_system(pair, kind)
    space = nullspace(system, column_order=column_order, excluded=_excluded(pair))
    space = replace(space, kind=kind.value, n=n, blocks=kind.blocks)
    for vec in space.basis:
        bad = identity_defect(pair, kind, space.as_matrices(vec))
        if bad:
            raise SoundnessError(f"{kind.value} basis member of {pair.name} fails its identity at {bad[0][:3]}")
    if kind is InvariantKind.QUASI_DERIVATION:
        space = replace(space, meta=(("projection_dim", projection(space, 0).rank),))
    if space.exceptional or space.unresolved:
        emit("rank_drop", kind=kind.value, pair=pair.name, at=[str(e) for e in space.exceptional],
             unresolved=[str(p) for p in space.unresolved])
    return space


def projection(space: OperatorSpace, block: int) -> Echelon:
    """Echelon form of the span of one block (e.g. d alone for quasi-derivations)."""
    n = space.n or 0
    lo, hi = block * n * n, (block + 1) * n * n
    rows = [{c - lo: v for c, v in enumerate(vec[lo:hi], start=lo) if v} for vec in space.basis]
    return echelon(rows, hi - lo)


def matrix_vector(maps: Sequence[Matrix]) -> Tuple[Poly, ...]:
    """Inverse of OperatorSpace.as_matrices: flatten maps into space coordinates."""
    out: List[Poly] = []
    for m in maps:
        n = len(m)
        out.extend(m[r][i] for i in range(n) for r in range(n))
    return tuple(out)


def general_matrices(space: OperatorSpace) -> Tuple[Matrix, ...]:
    return space.as_matrices(space.general_element())
