# app/matrices.py
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Mapping, Sequence, Tuple

import sympy

from app.errors import DimensionMismatch, InvalidArgument, SingularTransform
from app.scalars import ONE, ZERO, Poly, ScalarLike, as_scalar, substitute, to_sympy

Matrix = Tuple[Tuple[Poly, ...], ...]


def as_matrix(rows: Sequence[Sequence[ScalarLike]]) -> Matrix:
    out = tuple(tuple(as_scalar(x) for x in row) for row in rows)
    n = len(out)
    if any(len(row) != n for row in out):
        raise DimensionMismatch(f"matrix must be square, got rows of lengths {[len(r) for r in out]}")
    return out


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if r == c else ZERO for c in range(n)) for r in range(n))


def zeros(n: int) -> Matrix:
    return tuple((ZERO,) * n for _ in range(n))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    out: List[Tuple[Poly, ...]] = []
    for r in range(n):
        row = []
        for c in range(n):
            acc = ZERO
            for k in range(n):
                if a[r][k] and b[k][c]:
                    acc = acc + a[r][k] * b[k][c]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def apply(m: Matrix, v: Sequence[Poly]) -> Tuple[Poly, ...]:
    n = len(m)
    out = []
    for r in range(n):
        acc = ZERO
        for k in range(n):
            if m[r][k] and v[k]:
                acc = acc + m[r][k] * v[k]
        out.append(acc)
    return tuple(out)


def _minor(m: Matrix, row: int, col: int) -> Matrix:
    return tuple(tuple(x for c, x in enumerate(r) if c != col) for k, r in enumerate(m) if k != row)


def determinant(m: Matrix) -> Poly:
    n = len(m)
    if n == 0:
        return ONE
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    acc = ZERO
    for c in range(n):
        if m[0][c]:
            term = m[0][c] * determinant(_minor(m, 0, c))
            acc = acc + term if c % 2 == 0 else acc - term
    return acc


def adjugate(m: Matrix) -> Matrix:
    n = len(m)
    if n == 1:
        return ((ONE,),)
    return tuple(
        tuple(determinant(_minor(m, c, r)) * (1 if (r + c) % 2 == 0 else -1) for c in range(n))
        for r in range(n)
    )


def inverse(m: Matrix) -> Matrix:
    """Inverse of a matrix whose determinant is a nonzero rational."""
    det = determinant(m)
    if not det.is_constant:
        raise SingularTransform(f"determinant {det} is not a constant; cannot invert exactly")
    if det.is_zero:
        raise SingularTransform("matrix is singular")
    inv = 1 / det.constant
    return tuple(tuple(x.scale(inv) for x in row) for row in adjugate(m))


def is_rational(m: Matrix) -> bool:
    return all(x.is_constant for row in m for x in row)


def to_fractions(m: Matrix) -> Tuple[Tuple[Fraction, ...], ...]:
    return tuple(tuple(x.constant for x in row) for row in m)


def matrix_text(m: Matrix) -> List[List[str]]:
    return [[str(x) for x in row] for row in m]


@dataclass(frozen=True)
class ParametricMatrix:
    """
    A family of n×n matrices: `entries / denominator`, valid where every side condition
    is nonzero. Entries and denominator are polynomials in named family parameters.
    """

    entries: Matrix
    denominator: Poly = ONE
    side_conditions: Tuple[Poly, ...] = field(default=())

    @classmethod
    def from_text(
        cls,
        rows: Sequence[Sequence[ScalarLike]],
        denominator: ScalarLike = "1",
        side_conditions: Sequence[ScalarLike] = (),
    ) -> "ParametricMatrix":
        den = as_scalar(denominator)
        if den.is_zero:
            raise InvalidArgument("denominator must be nonzero")
        return cls(as_matrix(rows), den, tuple(as_scalar(s) for s in side_conditions))

    @property
    def n(self) -> int:
        return len(self.entries)

    def parameters(self) -> Tuple[str, ...]:
        names = {n for row in self.entries for x in row for n in x.names()}
        names.update(self.denominator.names())
        for s in self.side_conditions:
            names.update(s.names())
        return tuple(sorted(names))

    def forced_zero_positions(self) -> List[Tuple[int, int]]:
        return [(r, c) for r in range(self.n) for c in range(self.n) if self.entries[r][c].is_zero]

    def specialize(self, bindings: Mapping[str, ScalarLike]) -> "ParametricMatrix":
        return ParametricMatrix(
            tuple(tuple(substitute(x, bindings) for x in row) for row in self.entries),
            substitute(self.denominator, bindings),
            tuple(substitute(s, bindings) for s in self.side_conditions),
        )

    def value(self) -> Matrix:
        """Concrete matrix of a fully specialised family (constant denominator)."""
        if not self.denominator.is_constant:
            raise ValueError("denominator still depends on parameters")
        inv = 1 / self.denominator.constant
        return tuple(tuple(x.scale(inv) for x in row) for row in self.entries)

    def is_homogeneous_linear(self) -> bool:
        return self.denominator == 1 and all(
            all(sum(e for _, e in m) == 1 for m in x.terms) for row in self.entries for x in row
        )

    def generators(self) -> Dict[str, Matrix]:
        """Coefficient matrix of each parameter, for families linear in their parameters."""
        out: Dict[str, List[List[Poly]]] = {}
        for r, c in product(range(self.n), repeat=2):
            for mono, coeff in self.entries[r][c].terms.items():
                (name, _), = mono
                grid = out.setdefault(name, [[ZERO] * self.n for _ in range(self.n)])
                grid[r][c] = grid[r][c] + Poly.const(coeff)
        return {k: tuple(tuple(row) for row in v) for k, v in sorted(out.items())}

    def match(self, target: Matrix) -> Dict[str, Fraction] | None:
        """Rational parameter values reproducing `target`, or None when the family misses it."""
        params = self.parameters()
        if not params:
            return {} if self.value() == target else None
        syms = [sympy.Symbol(p) for p in params]
        eqs = []
        for r, c in product(range(self.n), repeat=2):
            e = to_sympy(self.entries[r][c] - self.denominator * target[r][c])
            if e != 0:
                eqs.append(e)
        solutions = sympy.solve(eqs, syms, dict=True) if eqs else [{}]
        for sol in solutions:
            if not all(v.is_rational for v in sol.values() if not v.free_symbols):
                continue
            free = [s for s in syms if s not in sol]
            for trial in product((1, 2, -1, 3), repeat=len(free)):
                fill = dict(zip(free, trial))
                values: Dict[str, Fraction] = {}
                for s in syms:
                    v = sympy.nsimplify(sol.get(s, s).subs(fill))
                    if not v.is_rational:
                        break
                    values[str(s)] = Fraction(int(v.p), int(v.q))
                else:
                    point = self.specialize(values)
                    if point.denominator.is_zero or any(x.is_zero for x in point.side_conditions):
                        continue
                    if point.value() == target:
                        return values
        return None
