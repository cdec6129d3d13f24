# app/nonlinear.py
"""
Operator identities that are not linear in the operator: automorphisms, Rota-Baxter
(weight 0), Nijenhuis, averaging and Reynolds operators.

Families are verified symbolically (every residual must be the zero polynomial). The
integer grid oracle and refutation sampling evaluate the same identities in batches.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import List, Sequence, Tuple, Union

import numpy as np

from app.algebra import AlgebraPair, Element, basis_element, multiply_tensor
from app.config import settings
from app.errors import DimensionMismatch, InvalidArgument, UnknownInvariant
from app.linear_invariants import InvariantKind
from app.matrices import Matrix, ParametricMatrix, apply, as_matrix, determinant
from app.metrics import metrics
from app.obs import timed
from app.scalars import ONE, ZERO, Poly, is_identically_zero
from app.vectorized import (
    batch_det,
    check_bound,
    chunked,
    grid_chunk,
    integer_stacks,
    map_ordered,
)


class IdentityTag(str, Enum):
    AUTOMORPHISM = "automorphism"
    ROTA_BAXTER = "rota-baxter"
    NIJENHUIS = "nijenhuis"
    AVERAGING = "averaging"
    REYNOLDS = "reynolds"


class Variant(str, Enum):
    PAPER = "paper"
    STANDARD = "standard"


@dataclass(frozen=True)
class OperatorIdentity:
    tag: IdentityTag
    variant: Variant = Variant.PAPER

    @classmethod
    def parse(cls, tag: str, variant: str = "paper") -> "OperatorIdentity":
        try:
            t = IdentityTag(tag.strip())
        except ValueError:
            raise UnknownInvariant(
                f"unknown identity {tag!r}; expected one of {', '.join(x.value for x in IdentityTag)}"
            ) from None
        try:
            v = Variant(variant)
        except ValueError:
            raise UnknownInvariant(f"unknown variant {variant!r}") from None
        return cls(t, v)

    @property
    def has_variants(self) -> bool:
        return self.tag in (IdentityTag.NIJENHUIS, IdentityTag.REYNOLDS)

    @property
    def label(self) -> str:
        return f"{self.tag.value}/{self.variant.value}" if self.has_variants else self.tag.value


ALL_IDENTITIES: Tuple[OperatorIdentity, ...] = (
    OperatorIdentity(IdentityTag.AUTOMORPHISM),
    OperatorIdentity(IdentityTag.ROTA_BAXTER),
    OperatorIdentity(IdentityTag.NIJENHUIS),
    OperatorIdentity(IdentityTag.NIJENHUIS, Variant.STANDARD),
    OperatorIdentity(IdentityTag.AVERAGING),
    OperatorIdentity(IdentityTag.REYNOLDS),
    OperatorIdentity(IdentityTag.REYNOLDS, Variant.STANDARD),
)


@dataclass(frozen=True)
class ResidualEntry:
    product: int  # 0 for the first product, 1 for the second
    branch: int
    i: int
    j: int
    r: int
    value: Poly


@dataclass(frozen=True)
class ResidualSet:
    identity: OperatorIdentity
    entries: Tuple[ResidualEntry, ...]

    def nonzero(self) -> Tuple[ResidualEntry, ...]:
        return tuple(e for e in self.entries if not is_identically_zero(e.value))

    @property
    def all_zero(self) -> bool:
        return not self.nonzero()

    def value(self, product: int, i: int, j: int, r: int, branch: int = 0) -> Poly:
        for e in self.entries:
            if (e.product, e.branch, e.i, e.j, e.r) == (product, branch, i, j, r):
                return e.value
        raise KeyError((product, branch, i, j, r))


@dataclass(frozen=True)
class SideCondition:
    source: str  # "denominator", "given" or "determinant"
    value: Poly

    @property
    def satisfiable(self) -> bool:
        return not self.value.is_zero

    def __str__(self) -> str:
        return f"{self.value} != 0"


@dataclass(frozen=True)
class FamilyVerdict:
    identity: OperatorIdentity
    verified: bool
    failing: Tuple[ResidualEntry, ...]
    side_conditions: Tuple[SideCondition, ...]


# signed terms: (sign, degree in the operator, vector)
_Term = Tuple[int, int, Element]


def _clear(terms: Sequence[_Term], den: Poly) -> Element:
    top = max(d for _, d, _ in terms)
    n = len(terms[0][2])
    out = [ZERO] * n
    for sign, deg, vec in terms:
        f = den ** (top - deg) if den != 1 else ONE
        for r in range(n):
            if vec[r]:
                v = vec[r] * f
                out[r] = out[r] + v if sign > 0 else out[r] - v
    return tuple(out)


def _branches(identity: OperatorIdentity, m: Matrix, base: Element, left: Element, right: Element, prod: Element) -> List[List[_Term]]:
    def op(x: Element) -> Element:
        return apply(m, x)

    tag, paper = identity.tag, identity.variant is Variant.PAPER
    if tag is IdentityTag.AUTOMORPHISM:
        return [[(1, 1, op(base)), (-1, 2, prod)]]
    if tag is IdentityTag.ROTA_BAXTER:
        return [[(1, 2, prod), (-1, 2, op(left)), (-1, 2, op(right))]]
    if tag is IdentityTag.NIJENHUIS:
        if paper:
            return [[(1, 2, prod), (-1, 2, op(left)), (-1, 1, right), (1, 1, op(base))]]
        return [[(1, 2, prod), (-1, 2, op(left)), (-1, 2, op(right)), (1, 2, op(op(base)))]]
    if tag is IdentityTag.AVERAGING:
        return [[(1, 2, op(left)), (-1, 2, prod)], [(1, 2, prod), (-1, 2, op(right))]]
    lhs = (1, 2, op(left)) if paper else (1, 2, prod)
    return [[lhs, (-1, 2, op(left)), (-1, 2, op(right)), (1, 3, op(prod))]]


def residuals(pair: AlgebraPair, identity: OperatorIdentity, family: ParametricMatrix) -> ResidualSet:
    n = pair.dim
    if family.n != n:
        raise DimensionMismatch(f"{family.n}x{family.n} matrix for a pair of dimension {n}")
    m, den = family.entries, family.denominator
    entries: List[ResidualEntry] = []
    with timed("residuals", identity=identity.label):
        images = [apply(m, basis_element(n, i)) for i in range(n)]
        for s, t in enumerate(pair.tensors):
            for i, j in product(range(n), repeat=2):
                ei, ej = basis_element(n, i), basis_element(n, j)
                base = multiply_tensor(t, ei, ej)
                left = multiply_tensor(t, images[i], ej)
                right = multiply_tensor(t, ei, images[j])
                prod = multiply_tensor(t, images[i], images[j])
                for b, terms in enumerate(_branches(identity, m, base, left, right, prod)):
                    vec = _clear(terms, den)
                    entries.extend(ResidualEntry(s, b, i, j, r, vec[r]) for r in range(n))
    return ResidualSet(identity, tuple(entries))


def verify_family(pair: AlgebraPair, identity: OperatorIdentity, family: ParametricMatrix) -> FamilyVerdict:
    failing = residuals(pair, identity, family).nonzero()
    conditions: List[SideCondition] = []
    if not family.denominator.is_constant:
        conditions.append(SideCondition("denominator", family.denominator))
    conditions.extend(SideCondition("given", s) for s in family.side_conditions)
    if identity.tag is IdentityTag.AUTOMORPHISM:
        det = determinant(family.entries)
        if not det.is_constant or det.is_zero:
            conditions.append(SideCondition("determinant", det))
    verified = not failing and all(c.satisfiable for c in conditions)
    metrics.inc("families.verified" if verified else "families.failed")
    return FamilyVerdict(identity, verified, failing, tuple(conditions))


def spot_check(pair: AlgebraPair, identity: OperatorIdentity, family: ParametricMatrix, samples: int, seed: int) -> int:
    """Exact residual evaluation at random integer parameter values; returns the failure count."""
    rng = np.random.default_rng(seed)
    params = family.parameters()
    failures = 0
    done = 0
    attempts = 0
    while done < samples and attempts < samples * 20:
        attempts += 1
        values = {p: int(v) for p, v in zip(params, rng.integers(-3, 4, size=len(params)))}
        point = family.specialize(values)
        if point.denominator.is_zero or any(c.is_zero for c in point.side_conditions):
            continue
        if identity.tag is IdentityTag.AUTOMORPHISM and determinant(point.entries).is_zero:
            continue
        done += 1
        if not residuals(pair, identity, point).all_zero:
            failures += 1
    return failures


# -- batched integer evaluation -------------------------------------------------

GridIdentity = Union[OperatorIdentity, InvariantKind]


def _batch_terms(c: np.ndarray, m: np.ndarray, identity: GridIdentity) -> List[np.ndarray]:
    """Residual arrays of shape (B, n, n, n) indexed [b, i, j, r], one per branch."""
    prod = np.einsum("bpi,bqj,pqr->bijr", m, m, c)
    left = np.einsum("bpi,pjr->bijr", m, c)
    right = np.einsum("bqj,iqr->bijr", m, c)
    op_base = np.einsum("brk,ijk->bijr", m, c)

    def op(x: np.ndarray) -> np.ndarray:
        return np.einsum("brk,bijk->bijr", m, x)

    if isinstance(identity, InvariantKind):
        if identity is InvariantKind.DERIVATION:
            return [op_base - left - right]
        if identity is InvariantKind.CENTROID:
            return [op_base - left, op_base - right]
        if identity is InvariantKind.QUASI_CENTROID:
            return [left - right]
        raise UnknownInvariant(f"the grid oracle covers single-map identities, not {identity.value}")
    tag, paper = identity.tag, identity.variant is Variant.PAPER
    if tag is IdentityTag.AUTOMORPHISM:
        return [op_base - prod]
    if tag is IdentityTag.ROTA_BAXTER:
        return [prod - op(left + right)]
    if tag is IdentityTag.NIJENHUIS:
        if paper:
            return [prod - op(left) - right + op_base]
        return [prod - op(left + right - op_base)]
    if tag is IdentityTag.AVERAGING:
        return [op(left) - prod, prod - op(right)]
    lhs = op(left) if paper else prod
    return [lhs - op(left + right - prod)]


def solves_batch(pair: AlgebraPair, identity: GridIdentity, m: np.ndarray, stacks=None) -> np.ndarray:
    """Boolean mask over a (B, n, n) integer batch: which matrices satisfy the identity on both products."""
    if stacks is None:
        stacks = [integer_stacks(t) for t in pair.tensors]
    ok = np.ones(m.shape[0], dtype=bool)
    for per_product in stacks:
        for c in per_product:
            for res in _batch_terms(c, m, identity):
                ok &= ~res.reshape(m.shape[0], -1).any(axis=1)
    if isinstance(identity, OperatorIdentity) and identity.tag is IdentityTag.AUTOMORPHISM:
        ok &= batch_det(m) != 0
    return ok


def grid_solve(pair: AlgebraPair, identity: GridIdentity, bound: int, workers: int | None = None) -> List[Tuple[Tuple[int, ...], ...]]:
    """Every integer matrix with entries in [-bound, bound] satisfying `identity`, in enumeration order."""
    n = pair.dim
    total = check_bound(n, bound)
    stacks = [integer_stacks(t) for t in pair.tensors]
    label = identity.label if isinstance(identity, OperatorIdentity) else identity.value

    def run(span: Tuple[int, int]) -> np.ndarray:
        batch = grid_chunk(n, bound, *span)
        return batch[solves_batch(pair, identity, batch, stacks)]

    with timed("grid_solve", identity=label, bound=bound, candidates=total):
        hits = map_ordered(run, chunked(total), workers)
    metrics.inc("grid.candidates", total)
    return [tuple(tuple(int(x) for x in row) for row in mat) for part in hits for mat in part]


def grid_matrix(mat: Sequence[Sequence[int]]) -> Matrix:
    return as_matrix([[Fraction(x) for x in row] for row in mat])


@dataclass(frozen=True)
class RefutationReport:
    identity: OperatorIdentity
    trials: int
    failed: int
    unexpected: Tuple[Tuple[Tuple[int, ...], ...], ...]
    skipped: str | None = None

    @property
    def fraction_failed(self) -> float:
        return self.failed / self.trials if self.trials else 0.0


def refute_sample(
    pair: AlgebraPair,
    identity: OperatorIdentity,
    family: ParametricMatrix,
    trials: int | None = None,
    seed: int | None = None,
) -> RefutationReport:
    """
    Sample integer matrices that break at least one of the family's forced zeros and
    count how many fail the identity. Matrices that still solve it are returned as
    unexpected solutions.
    """
    trials = settings.refute_trials if trials is None else trials
    seed = settings.seed if seed is None else seed
    if trials < 1:
        raise InvalidArgument(f"trials must be at least 1, got {trials}")
    n = pair.dim
    forced = family.forced_zero_positions()
    if not forced:
        return RefutationReport(identity, trials, 0, (), skipped="family has no forced-zero entries")
    rng = np.random.default_rng(seed)
    batch = rng.integers(-2, 3, size=(trials, n, n)).astype(np.int64)
    for t in range(trials):
        r, c = forced[int(rng.integers(len(forced)))]
        batch[t, r, c] = rng.choice([-2, -1, 1, 2])
    with timed("refute_sample", identity=identity.label, trials=trials):
        ok = solves_batch(pair, identity, batch)
    unexpected = tuple(tuple(tuple(int(x) for x in row) for row in batch[t]) for t in np.flatnonzero(ok))
    return RefutationReport(identity, trials, int((~ok).sum()), unexpected)
