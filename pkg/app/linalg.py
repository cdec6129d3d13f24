# app/linalg.py
"""
Exact sparse elimination over Q[parameters].

Rows are dicts {column: Poly}. Elimination is fraction-free: constant pivots are
preferred and normalised to 1; when a column only has polynomial candidates the
lowest-degree one is used generically and remembered, so callers can report the
parameter values at which the rank drops.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from app.errors import DimensionMismatch, SpecializationObstruction
from app.metrics import metrics
from app.obs import timed
from app.scalars import ONE, ZERO, Poly, rational_roots

Row = Dict[int, Poly]
Vector = Tuple[Poly, ...]


@dataclass(frozen=True)
class LinearSystem:
    rows: Tuple[Vector, ...]
    labels: Tuple[str, ...]

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.labels)

    @classmethod
    def from_rows(cls, rows: Iterable[Mapping[int, Poly]], labels: Sequence[str]) -> "LinearSystem":
        ncols = len(labels)
        dense = []
        for row in rows:
            vec = [ZERO] * ncols
            for c, v in row.items():
                vec[c] = vec[c] + v
            dense.append(tuple(vec))
        return cls(tuple(dense), tuple(labels))

    def evaluate(self, vector: Sequence[Poly]) -> List[Poly]:
        if len(vector) != len(self.labels):
            raise DimensionMismatch(f"vector of length {len(vector)} for {len(self.labels)} unknowns")
        out = []
        for row in self.rows:
            acc = ZERO
            for a, x in zip(row, vector):
                if a and x:
                    acc = acc + a * x
            out.append(acc)
        return out


@dataclass(frozen=True)
class ExceptionalValue:
    name: str
    value: Fraction

    def __str__(self) -> str:
        v = self.value
        return f"{self.name} = {v.numerator}" if v.denominator == 1 else f"{self.name} = {v.numerator}/{v.denominator}"


@dataclass(frozen=True)
class Echelon:
    rows: Tuple[Row, ...]
    pivots: Tuple[int, ...]
    ncols: int
    symbolic_pivots: Tuple[Poly, ...] = ()

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def pivot_value(self, t: int) -> Poly:
        return self.rows[t][self.pivots[t]]

    def reduce(self, vector: Mapping[int, Poly]) -> Row:
        """Remainder of `vector` after clearing every pivot column (fraction-free)."""
        out: Row = {c: v for c, v in vector.items() if v}
        for t, c in enumerate(self.pivots):
            if c in out:
                out = _eliminate(out, self.rows[t], c)
        return out

    def contains(self, vector: Sequence[Poly] | Mapping[int, Poly]) -> bool:
        if not isinstance(vector, Mapping):
            vector = {c: v for c, v in enumerate(vector) if v}
        return not self.reduce(vector)


def _eliminate(row: Row, prow: Row, c: int) -> Row:
    q = row.get(c)
    if q is None:
        return row
    p = prow[c]
    if p == 1:
        out = dict(row)
        for col, v in prow.items():
            out[col] = out.get(col, ZERO) - q * v
    else:
        out = {col: p * v for col, v in row.items()}
        for col, v in prow.items():
            out[col] = out.get(col, ZERO) - q * v
    return {col: v for col, v in out.items() if v}


def _pick(work: List[Row], c: int) -> int | None:
    best, best_key = None, None
    for k, row in enumerate(work):
        v = row.get(c)
        if v is None:
            continue
        key = (0, 0, 0, "") if v.is_constant else (1, v.total_degree, len(v), str(v))
        if best_key is None or key < best_key:
            best, best_key = k, key
            if key[0] == 0:
                break
    return best


def echelon(rows: Iterable[Mapping[int, Poly]], ncols: int) -> Echelon:
    work: List[Row] = [r for r in ({c: v for c, v in row.items() if v} for row in rows) if r]
    pivots: List[int] = []
    prows: List[Row] = []
    symbolic: List[Poly] = []
    for c in range(ncols):
        k = _pick(work, c)
        if k is None:
            continue
        prow = work.pop(k)
        p = prow[c]
        if p.is_constant:
            inv = 1 / p.constant
            prow = {col: v.scale(inv) for col, v in prow.items()}
        else:
            symbolic.append(p)
        work = [r for r in (_eliminate(r, prow, c) for r in work) if r]
        prows = [_eliminate(r, prow, c) for r in prows]
        pivots.append(c)
        prows.append(prow)
    return Echelon(tuple(prows), tuple(pivots), ncols, tuple(symbolic))


def _dense_rows(rows: Iterable[Sequence[Poly]]) -> List[Row]:
    return [{c: v for c, v in enumerate(row) if v} for row in rows]


def _kernel(ech: Echelon) -> List[Vector]:
    ncols = ech.ncols
    pivset = set(ech.pivots)
    values = [ech.pivot_value(t) for t in range(ech.rank)]
    symbolic = [t for t, v in enumerate(values) if not v.is_constant]
    lcm = ONE
    for t in symbolic:
        lcm = lcm * values[t]
    basis: List[Vector] = []
    for f in range(ncols):
        if f in pivset:
            continue
        vec = [ZERO] * ncols
        vec[f] = lcm
        for t, c in enumerate(ech.pivots):
            a = ech.rows[t].get(f)
            if a is None:
                continue
            if t in symbolic:
                others = ONE
                for s in symbolic:
                    if s != t:
                        others = others * values[s]
                vec[c] = -(a * others)
            else:
                vec[c] = -(a * lcm).scale(1 / values[t].constant)
        basis.append(tuple(vec))
    return basis


def canonical_basis(vectors: Iterable[Sequence[Poly]], ncols: int) -> Tuple[Tuple[Vector, ...], Tuple[int, ...]]:
    """
    Reduced echelon rows spanning the same space, with their leading columns.
    Each row is scaled so its pivot is 1, or a polynomial whose leading
    (graded-lex) coefficient is 1 when the pivot is symbolic.
    """
    ech = echelon(_dense_rows(vectors), ncols)
    rows = []
    for row, lead in zip(ech.rows, ech.pivots):
        inv = 1 / Fraction(row[lead].ordered_terms()[0][1])
        vec = [ZERO] * ncols
        for c, v in row.items():
            vec[c] = v.scale(inv)
        rows.append(tuple(vec))
    return tuple(rows), ech.pivots


@dataclass(frozen=True)
class OperatorSpace:
    """
    A solution space in canonical form. `basis` rows are reduced echelon, `leading` holds
    the first nonzero coordinate of each row. When `n` is set, coordinates reshape into
    n×n matrices, one per block symbol, with coordinate b*n*n + i*n + r holding M_b[r][i].
    """

    labels: Tuple[str, ...]
    basis: Tuple[Vector, ...]
    leading: Tuple[int, ...]
    kind: str = "nullspace"
    n: int | None = None
    blocks: Tuple[str, ...] = ()
    symbolic_pivots: Tuple[Poly, ...] = ()
    exceptional: Tuple[ExceptionalValue, ...] = ()
    unresolved: Tuple[Poly, ...] = ()
    meta: Tuple[Tuple[str, int], ...] = field(default=())

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def ambient(self) -> int:
        return len(self.labels)

    def echelon(self) -> Echelon:
        return echelon(_dense_rows(self.basis), self.ambient)

    def contains(self, vector: Sequence[Poly]) -> bool:
        return self.echelon().contains(vector)

    def general_element(self) -> Vector:
        out = [ZERO] * self.ambient
        for row, lead in zip(self.basis, self.leading):
            t = Poly.var(self.labels[lead])
            for c, v in enumerate(row):
                if v:
                    out[c] = out[c] + t * v
        return tuple(out)

    def parameter_names(self) -> Tuple[str, ...]:
        return tuple(self.labels[lead] for lead in self.leading)

    def as_matrices(self, vector: Sequence[Poly]) -> Tuple[Tuple[Tuple[Poly, ...], ...], ...]:
        if self.n is None:
            raise ValueError(f"{self.kind} space has no matrix shape")
        n = self.n
        out = []
        for b in range(len(self.blocks) or 1):
            base = b * n * n
            out.append(tuple(tuple(vector[base + i * n + r] for i in range(n)) for r in range(n)))
        return tuple(out)

    def meta_value(self, key: str, default: int | None = None) -> int | None:
        return dict(self.meta).get(key, default)


def nullspace(
    system: LinearSystem,
    column_order: Sequence[int] | None = None,
    strict: bool = False,
    excluded: Mapping[str, Iterable[Fraction]] | None = None,
) -> OperatorSpace:
    """
    Canonical kernel basis of `system`. `column_order` eliminates columns in another
    order (results are mapped back, so the canonical basis is unchanged). With
    `strict`, a polynomial pivot raises SpecializationObstruction.
    """
    nrows, ncols = system.shape
    order = list(column_order) if column_order is not None else list(range(ncols))
    if sorted(order) != list(range(ncols)):
        raise ValueError("column_order must be a permutation of the columns")
    with timed("nullspace", rows=nrows, cols=ncols):
        rows = [{new: row[old] for new, old in enumerate(order) if row[old]} for row in system.rows]
        ech = echelon(rows, ncols)
        if strict and ech.symbolic_pivots:
            raise SpecializationObstruction(ech.symbolic_pivots)
        kernel = _kernel(ech)
        unpermuted = []
        for vec in kernel:
            back = [ZERO] * ncols
            for new, old in enumerate(order):
                back[old] = vec[new]
            unpermuted.append(tuple(back))
        basis, leading = canonical_basis(unpermuted, ncols)
    metrics.inc("nullspace.rank", ech.rank)
    exceptional: List[ExceptionalValue] = []
    unresolved: List[Poly] = []
    for p in ech.symbolic_pivots:
        roots, rest = rational_roots(p, excluded)
        for name, value in roots:
            ev = ExceptionalValue(name, value)
            if ev not in exceptional:
                exceptional.append(ev)
        unresolved.extend(f for f in rest if f not in unresolved)
    return OperatorSpace(
        labels=system.labels,
        basis=basis,
        leading=leading,
        symbolic_pivots=ech.symbolic_pivots,
        exceptional=tuple(sorted(exceptional, key=lambda e: (e.name, e.value))),
        unresolved=tuple(unresolved),
    )


def span_intersection(a: OperatorSpace, b: OperatorSpace) -> Tuple[Tuple[Vector, ...], Tuple[int, ...]]:
    """Canonical basis of span(a) ∩ span(b); both spaces share one coordinate system."""
    if a.ambient != b.ambient:
        raise DimensionMismatch(f"spaces of ambient dimension {a.ambient} and {b.ambient}")
    p, q = a.dim, b.dim
    if not p or not q:
        return (), ()
    ncols = p + q
    rows = []
    for x in range(a.ambient):
        row: Row = {}
        for s in range(p):
            if a.basis[s][x]:
                row[s] = a.basis[s][x]
        for s in range(q):
            if b.basis[s][x]:
                row[p + s] = -b.basis[s][x]
        if row:
            rows.append(row)
    kernel = _kernel(echelon(rows, ncols))
    vectors = []
    for coeffs in kernel:
        vec = [ZERO] * a.ambient
        for s in range(p):
            if coeffs[s]:
                for x in range(a.ambient):
                    if a.basis[s][x]:
                        vec[x] = vec[x] + coeffs[s] * a.basis[s][x]
        vectors.append(tuple(vec))
    return canonical_basis(vectors, a.ambient)
