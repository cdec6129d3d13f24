# app/algebra.py
"""
Finite-dimensional algebras given by structure constants, and pairs of them on one
basis. Indices are 0-based internally; reports print basis vectors as e1..en.

The associator and compatibility defects use one sign convention throughout:
right-bracketed minus left-bracketed, i.e. x(yz) - (xy)z.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from app.errors import DimensionMismatch, NonAssociativeError
from app.matrices import Matrix, inverse
from app.scalars import ONE, ZERO, Poly, ScalarLike, as_scalar

Element = Tuple[Poly, ...]


def basis_element(n: int, i: int) -> Element:
    return tuple(ONE if k == i else ZERO for k in range(n))


def zero_element(n: int) -> Element:
    return (ZERO,) * n


def add(u: Element, v: Element) -> Element:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Element, v: Element) -> Element:
    return tuple(a - b for a, b in zip(u, v))


def scale(c: Poly, u: Element) -> Element:
    return tuple(c * a for a in u)


def is_zero(u: Element) -> bool:
    return all(a.is_zero for a in u)


@dataclass(frozen=True)
class StructureTensor:
    """c[i][j][k]: coefficient of e_k in e_i ⋆ e_j."""

    c: Tuple[Tuple[Tuple[Poly, ...], ...], ...]

    @classmethod
    def zeros(cls, n: int) -> "StructureTensor":
        return cls(tuple(tuple((ZERO,) * n for _ in range(n)) for _ in range(n)))

    @classmethod
    def from_products(cls, n: int, entries: Iterable[Tuple[int, int, int, ScalarLike]]) -> "StructureTensor":
        """Build from (i, j, k, coefficient) with 0-based indices; unlisted entries are zero."""
        grid = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
        for i, j, k, coeff in entries:
            grid[i][j][k] = grid[i][j][k] + as_scalar(coeff)
        return cls(tuple(tuple(tuple(row) for row in plane) for plane in grid))

    @property
    def dim(self) -> int:
        return len(self.c)

    def nonzero(self) -> List[Tuple[int, int, int, Poly]]:
        n = self.dim
        return [(i, j, k, self.c[i][j][k]) for i, j, k in product(range(n), repeat=3) if self.c[i][j][k]]

    def indeterminates(self) -> Tuple[str, ...]:
        return tuple(sorted({name for *_, v in self.nonzero() for name in v.names()}))

    def is_rational(self) -> bool:
        return all(v.is_constant for *_, v in self.nonzero())


@dataclass(frozen=True)
class Parameter:
    name: str
    excluded: Tuple[Poly, ...] = ()


@dataclass(frozen=True)
class Algebra:
    name: str
    tensor: StructureTensor
    parameters: Tuple[Parameter, ...] = ()
    # basis names from a document; None means e1..en
    basis: Optional[Tuple[str, ...]] = None

    @property
    def dim(self) -> int:
        return self.tensor.dim


@dataclass(frozen=True)
class AlgebraPair:
    first: Algebra
    second: Algebra

    def __post_init__(self):
        if self.first.dim != self.second.dim:
            raise DimensionMismatch(
                f"{self.first.name} has dimension {self.first.dim}, {self.second.name} has {self.second.dim}"
            )

    @property
    def dim(self) -> int:
        return self.first.dim

    @property
    def name(self) -> str:
        return f"({self.first.name}, {self.second.name})"

    @property
    def tensors(self) -> Tuple[StructureTensor, StructureTensor]:
        return self.first.tensor, self.second.tensor

    @property
    def parameters(self) -> Tuple[Parameter, ...]:
        seen: Dict[str, Parameter] = {}
        for p in self.first.parameters + self.second.parameters:
            seen.setdefault(p.name, p)
        return tuple(seen[k] for k in sorted(seen))

    def swapped(self) -> "AlgebraPair":
        return AlgebraPair(self.second, self.first)


class DefectKind(str, Enum):
    ASSOCIATIVITY = "associativity"
    COMPATIBILITY = "compatibility"


@dataclass(frozen=True)
class DefectEntry:
    i: int
    j: int
    k: int
    value: Element


@dataclass(frozen=True)
class DefectReport:
    kind: DefectKind
    dim: int
    entries: Tuple[DefectEntry, ...] = field(default=())

    @property
    def empty(self) -> bool:
        return not self.entries

    def at(self, i: int, j: int, k: int) -> Element:
        for e in self.entries:
            if (e.i, e.j, e.k) == (i, j, k):
                return e.value
        return zero_element(self.dim)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "empty": self.empty,
            "entries": [
                {"triple": [e.i + 1, e.j + 1, e.k + 1], "value": [str(x) for x in e.value]}
                for e in self.entries
            ],
        }


def multiply_tensor(t: StructureTensor, u: Sequence[Poly], v: Sequence[Poly]) -> Element:
    n = t.dim
    out = [ZERO] * n
    for i in range(n):
        if not u[i]:
            continue
        for j in range(n):
            if not v[j]:
                continue
            uv = u[i] * v[j]
            row = t.c[i][j]
            for k in range(n):
                if row[k]:
                    out[k] = out[k] + uv * row[k]
    return tuple(out)


def multiply(a: Algebra, u: Sequence[ScalarLike], v: Sequence[ScalarLike]) -> Element:
    if len(u) != a.dim or len(v) != a.dim:
        raise DimensionMismatch(f"{a.name} has dimension {a.dim}; got vectors of length {len(u)} and {len(v)}")
    return multiply_tensor(a.tensor, [as_scalar(x) for x in u], [as_scalar(x) for x in v])


def _products(t: StructureTensor) -> List[List[Element]]:
    return [[t.c[i][j] for j in range(t.dim)] for i in range(t.dim)]


def compatibility_defect(t1: StructureTensor, t2: StructureTensor) -> DefectReport:
    """
    Mixed associator of two products on one basis, per basis triple:
    [x ⋆1 (y ⋆2 z) + x ⋆2 (y ⋆1 z)] - [(x ⋆1 y) ⋆2 z + (x ⋆2 y) ⋆1 z].
    Taking t1 == t2 gives twice the associator.
    """
    if t1.dim != t2.dim:
        raise DimensionMismatch(f"tensors of dimension {t1.dim} and {t2.dim}")
    n = t1.dim
    p1, p2 = _products(t1), _products(t2)
    entries: List[DefectEntry] = []
    for i, j, k in product(range(n), repeat=3):
        e = basis_element(n, i)
        right = add(multiply_tensor(t1, e, p2[j][k]), multiply_tensor(t2, e, p1[j][k]))
        ek = basis_element(n, k)
        left = add(multiply_tensor(t2, p1[i][j], ek), multiply_tensor(t1, p2[i][j], ek))
        d = sub(right, left)
        if not is_zero(d):
            entries.append(DefectEntry(i, j, k, d))
    return DefectReport(DefectKind.COMPATIBILITY, n, tuple(entries))


def check_associative(a: Algebra) -> DefectReport:
    n = a.dim
    t = a.tensor
    p = _products(t)
    entries: List[DefectEntry] = []
    for i, j, k in product(range(n), repeat=3):
        right = multiply_tensor(t, basis_element(n, i), p[j][k])
        left = multiply_tensor(t, p[i][j], basis_element(n, k))
        d = sub(right, left)
        if not is_zero(d):
            entries.append(DefectEntry(i, j, k, d))
    return DefectReport(DefectKind.ASSOCIATIVITY, n, tuple(entries))


def require_associative(a: Algebra) -> None:
    report = check_associative(a)
    if not report.empty:
        raise NonAssociativeError(a.name, report)


def check_compatible(pair: AlgebraPair) -> DefectReport:
    require_associative(pair.first)
    require_associative(pair.second)
    return compatibility_defect(*pair.tensors)


def transport(a: Algebra, p: Matrix, name: str | None = None) -> Algebra:
    """
    The product u ⋆' v = P⁻¹((Pu) ⋆ (Pv)). Columns of P are the images of the basis;
    the result is isomorphic to `a`, with P as the isomorphism.
    """
    if len(p) != a.dim:
        raise DimensionMismatch(f"matrix of size {len(p)} for {a.name} of dimension {a.dim}")
    p_inv = inverse(p)
    n = a.dim
    cols = [tuple(p[r][i] for r in range(n)) for i in range(n)]
    entries = []
    for i, j in product(range(n), repeat=2):
        image = multiply_tensor(a.tensor, cols[i], cols[j])
        back = tuple(sum((p_inv[r][k] * image[k] for k in range(n) if p_inv[r][k]), ZERO) for r in range(n))
        entries.extend((i, j, k, back[k]) for k in range(n) if back[k])
    return Algebra(name or f"{a.name}^P", StructureTensor.from_products(n, entries), a.parameters)
