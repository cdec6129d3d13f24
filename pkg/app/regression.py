# app/regression.py
"""
Recompute every embedded expected result and compare.

Statuses: `match`; `garbled-in-paper` for rows catalogued as corrupt, or rows that fail
exact re-verification while the independent check (integer grid, column-permuted
elimination, grid solutions re-verified exactly) agrees with the recomputation;
`unattributed-match` for the unattributed lists; `mismatch` only when the workbench
disagrees with itself. Exit code 3 iff some record is a mismatch.
"""
from __future__ import annotations

from collections import Counter
from typing import Any, Dict, List, Sequence, Tuple

from app.algebra import check_compatible
from app.catalog import (
    ExpectedResult,
    ExpectedStatus,
    enumerate_onnose_compatible,
    expected_results,
    reference_pairs,
)
from app.cohomology import CohomologyMode, second_cohomology
from app.errors import SoundnessError
from app.linalg import OperatorSpace, echelon
from app.linear_invariants import InvariantKind, general_matrices, invariant_space, matrix_vector, projection
from app.matrices import ParametricMatrix, matrix_text, zeros
from app.metrics import metrics
from app.nonlinear import (
    IdentityTag,
    OperatorIdentity,
    Variant,
    grid_matrix,
    grid_solve,
    refute_sample,
    verify_family,
)
from app.obs import emit, timed
from app.schemas import EnumerationModel, PairListRecord, RegressionRecord, RegressionReport
from app.vectorized import ENUMERATION_LIMITS, map_ordered
from app.witness import ExhaustionReport, search_witness, verify_witness

_LINEAR = {k.value for k in (InvariantKind.DERIVATION, InvariantKind.CENTROID, InvariantKind.QUASI_CENTROID)}


def _pair_text(row: ExpectedResult) -> str | None:
    return row.pair.key if row.pair else None


def _family_text(row: ExpectedResult) -> List[Dict[str, Any]]:
    out = []
    for f in row.families:
        item: Dict[str, Any] = {"rows": [list(r) for r in f.rows]}
        if f.denominator != "1":
            item["denominator"] = f.denominator
        out.append(item)
    return out


def family_in_space(space: OperatorSpace, families: Sequence[ParametricMatrix]) -> bool:
    """Whether every member of a (joint, linear) family lies in the space."""
    if not all(f.is_homogeneous_linear() for f in families):
        return False
    n = families[0].n
    gens = [f.generators() for f in families]
    names = sorted({name for g in gens for name in g})
    for name in names:
        vec = matrix_vector([g.get(name, zeros(n)) for g in gens])
        if not space.contains(vec):
            return False
    return True


def _grid_rank(sols: Sequence[Tuple[Tuple[int, ...], ...]], n: int) -> int:
    rows = []
    for m in sols:
        vec = matrix_vector([grid_matrix(m)])
        rows.append({c: v for c, v in enumerate(vec) if v})
    return echelon(rows, n * n).rank if rows else 0


def _linear_record(row: ExpectedResult) -> RegressionRecord:
    pair = row.pair.pair()
    kind = InvariantKind.parse(row.kind)
    n = pair.dim
    space = invariant_space(pair, kind)
    computed: Dict[str, Any] = {
        "dim": space.dim,
        "general_element": [matrix_text(m) for m in general_matrices(space)],
    }
    problems: List[str] = []
    reverse = list(reversed(range(space.ambient)))
    again = invariant_space(pair, kind, column_order=reverse)
    if again.dim != space.dim or not all(space.contains(v) for v in again.basis):
        problems.append("column-permuted elimination gives a different space")
    bound = ENUMERATION_LIMITS.get(n)
    if bound is not None:
        sols = grid_solve(pair, kind, bound)
        outside = [m for m in sols if not space.contains(matrix_vector([grid_matrix(m)]))]
        computed["oracle"] = {"bound": bound, "solutions": len(sols), "spans": _grid_rank(sols, n) == space.dim}
        if outside:
            problems.append(f"grid solution {outside[0]} is not in the computed space")
    in_space = family_in_space(space, row.matrices())
    computed["printed_family_in_space"] = in_space
    expected = {"dim": row.expected_dim, "families": _family_text(row)}
    base = dict(id=row.id, source=row.source, pair=_pair_text(row), kind=row.kind, expected=expected,
                computed=computed, note=row.note)
    if problems:
        return RegressionRecord(status="mismatch", **{**base, "note": "; ".join(problems)})
    if row.status is ExpectedStatus.GARBLED:
        return RegressionRecord(status="garbled-in-paper", **base)
    if in_space and space.dim == row.expected_dim:
        return RegressionRecord(status="match", **base)
    return RegressionRecord(status="garbled-in-paper", detected=True, **base)


def _could_match(family: ParametricMatrix, sol: Sequence[Sequence[int]]) -> bool:
    den = family.denominator
    for r, row in enumerate(family.entries):
        for c, x in enumerate(row):
            if x.is_zero and sol[r][c]:
                return False
            if x.is_constant and den.is_constant and x.constant / den.constant != sol[r][c]:
                return False
    return True


def _matched(families: Sequence[ParametricMatrix], sol) -> bool:
    target = grid_matrix(sol)
    return any(_could_match(f, sol) and f.match(target) is not None for f in families)


def _identities(tag: IdentityTag) -> List[OperatorIdentity]:
    base = OperatorIdentity(tag)
    return [base, OperatorIdentity(tag, Variant.STANDARD)] if base.has_variants else [base]


def _nonlinear_record(row: ExpectedResult) -> RegressionRecord:
    pair = row.pair.pair()
    n = pair.dim
    families = row.matrices()
    identities = _identities(IdentityTag(row.kind))
    verdicts = {i.label: [verify_family(pair, i, f) for f in families] for i in identities}
    primary = identities[0]
    verified = all(v.verified for v in verdicts[primary.label])
    computed: Dict[str, Any] = {
        "verified": {label: [v.verified for v in vs] for label, vs in verdicts.items()},
        "side_conditions": sorted({str(c) for vs in verdicts.values() for v in vs for c in v.side_conditions}),
    }
    failing = [e for v in verdicts[primary.label] for e in v.failing]
    if failing:
        computed["failing_residuals"] = len(failing)
        e = failing[0]
        computed["first_failure"] = {
            "product": e.product + 1, "pair": [e.i + 1, e.j + 1], "component": e.r + 1, "value": str(e.value),
        }
    problems: List[str] = []
    zero = ParametricMatrix(zeros(n))
    if primary.tag is not IdentityTag.AUTOMORPHISM and not verify_family(pair, primary, zero).verified:
        problems.append("the zero map fails the identity")
    unmatched: List[Tuple[Tuple[int, ...], ...]] = []
    bound = ENUMERATION_LIMITS.get(n)
    if bound is not None:
        sols = grid_solve(pair, primary, bound)
        for m in sols[:3]:
            if not verify_family(pair, primary, ParametricMatrix(grid_matrix(m))).verified:
                problems.append(f"grid solution {m} fails exact verification")
        unmatched = [m for m in sols if not _matched(families, m)] if verified else []
        computed["grid"] = {
            "bound": bound,
            "solutions": len(sols),
            "outside_family": len(unmatched),
            "sample": [matrix_text(grid_matrix(m)) for m in (unmatched or sols)[:5]],
        }
    for i, f in enumerate(families):
        ref = refute_sample(pair, primary, f)
        computed.setdefault("refutation", []).append(
            {"family": i + 1, "trials": ref.trials, "failed": ref.failed, "skipped": ref.skipped}
        )
    expected = {"families": _family_text(row)}
    base = dict(id=row.id, source=row.source, pair=_pair_text(row), kind=row.kind, expected=expected,
                computed=computed, note=row.note)
    if problems:
        return RegressionRecord(status="mismatch", **{**base, "note": "; ".join(problems)})
    if row.status is ExpectedStatus.GARBLED:
        return RegressionRecord(status="garbled-in-paper", **base)
    if verified and not unmatched:
        return RegressionRecord(status="match", **base)
    if verified:
        note = f"grid finds {len(unmatched)} solutions outside the listed families"
        return RegressionRecord(status="garbled-in-paper", detected=True, **{**base, "note": note})
    return RegressionRecord(status="garbled-in-paper", detected=True, **base)


def _cohomology_record(row: ExpectedResult) -> RegressionRecord:
    pair = row.pair.pair()
    computed: Dict[str, Any] = {}
    matching: List[str] = []
    problems: List[str] = []
    for mode in CohomologyMode:
        res = second_cohomology(pair, mode)
        computed[mode.value] = {
            "dim_Z2": res.dim_Z2, "dim_B2": res.dim_B2, "dim_B2_in_Z2": res.dim_B2_in_Z2, "dim_H2": res.dim_H2,
        }
        if not res.order_independent:
            problems.append(f"{mode.value}: column-permuted recomputation differs")
        if res.dim_H2 == row.expected_dim:
            matching.append(mode.value)
    computed["matching_modes"] = matching
    base = dict(id=row.id, source=row.source, pair=_pair_text(row), kind=row.kind,
                expected={"generators": row.expected_dim}, computed=computed, note=row.note)
    if problems:
        return RegressionRecord(status="mismatch", **{**base, "note": "; ".join(problems)})
    if matching:
        return RegressionRecord(status="match", **base)
    return RegressionRecord(status="garbled-in-paper", detected=True, **base)


def _unattributed_record(row: ExpectedResult) -> RegressionRecord:
    families = row.matrices()
    satisfied: List[str] = []
    computed: Dict[str, Any] = {}
    for ref in reference_pairs(3):
        pair = ref.pair()
        if row.kind in (InvariantKind.QUASI_DERIVATION.value, InvariantKind.GENERALIZED_DERIVATION.value):
            space = invariant_space(pair, InvariantKind.parse(row.kind))
            if family_in_space(space, families):
                satisfied.append(ref.key)
            if row.kind == InvariantKind.QUASI_DERIVATION.value:
                d_part = projection(space, 0)
                for idx, f in enumerate(families, 1):
                    gens = f.generators().values() if f.is_homogeneous_linear() else None
                    if gens is not None and all(d_part.contains(matrix_vector([g])) for g in gens):
                        computed.setdefault("as_d_component", []).append(f"{ref.key}#{idx}")
        else:
            for identity in _identities(IdentityTag(row.kind)):
                if all(verify_family(pair, identity, f).verified for f in families):
                    satisfied.append(f"{ref.key}/{identity.variant.value}" if identity.has_variants else ref.key)
    base = dict(id=row.id, source=row.source, pair=None, kind=row.kind,
                expected={"families": _family_text(row)}, computed=computed, satisfied=satisfied, note=row.note)
    if satisfied:
        return RegressionRecord(status="unattributed-match", **base)
    return RegressionRecord(status="garbled-in-paper", detected=True, **base)


def check_row(row: ExpectedResult) -> RegressionRecord:
    with timed("regression_record", id=row.id):
        try:
            if row.status is ExpectedStatus.UNATTRIBUTED:
                rec = _unattributed_record(row)
            elif row.kind == "cohomology":
                rec = _cohomology_record(row)
            elif row.kind in _LINEAR:
                rec = _linear_record(row)
            else:
                rec = _nonlinear_record(row)
        except SoundnessError as exc:
            rec = RegressionRecord(id=row.id, source=row.source, pair=_pair_text(row), kind=row.kind,
                                   status="mismatch", note=str(exc))
    metrics.inc(f"regression.{rec.status}")
    if rec.status == "mismatch":
        emit("regression_mismatch", id=rec.id, note=rec.note)
    return rec


def pair_list_record(ref, workers: int | None = None) -> PairListRecord:
    pair = ref.pair()
    defect = check_compatible(pair)
    bound = min(2, ENUMERATION_LIMITS[pair.dim])
    found = search_witness(pair.first, pair.second, bound, workers=workers)
    if isinstance(found, ExhaustionReport):
        return PairListRecord(pair=ref.key, source=ref.source, onnose_compatible=defect.empty,
                              defect_entries=len(defect.entries), witness_bound=bound, searched=found.invertible)
    return PairListRecord(
        pair=ref.key,
        source=ref.source,
        onnose_compatible=defect.empty,
        defect_entries=len(defect.entries),
        witness_bound=bound,
        witness=matrix_text(found.p),
        witness_verified=verify_witness(found),
    )


def enumeration_model(dim: int) -> EnumerationModel:
    listed = {r.key for r in reference_pairs(dim)}
    compatible = [f"{p.first.name},{p.second.name}" for p, d in enumerate_onnose_compatible(dim) if d.empty]
    off_diagonal = [k for k in compatible if len(set(k.split(","))) == 2]
    return EnumerationModel(
        dim=dim,
        compatible=compatible,
        listed_and_compatible=[k for k in compatible if k in listed],
        listed_not_compatible=[r.key for r in reference_pairs(dim) if r.key not in compatible],
        compatible_not_listed=[k for k in off_diagonal if k not in listed],
    )


def paper_regression(workers: int | None = None, pair_lists: bool = True) -> RegressionReport:
    rows = expected_results()
    with timed("paper_regression", rows=len(rows)):
        records = map_ordered(check_row, rows, workers)
        lists: List[PairListRecord] = []
        enumeration: List[EnumerationModel] = []
        if pair_lists:
            for dim in (2, 3):
                lists.extend(pair_list_record(ref, workers) for ref in reference_pairs(dim))
                enumeration.append(enumeration_model(dim))
    counts = Counter(r.status for r in records)
    summary = {s: counts.get(s, 0) for s in ("match", "garbled-in-paper", "unattributed-match", "mismatch")}
    summary["records"] = len(records)
    summary["pair_lists"] = len(lists)
    summary["witnesses"] = sum(1 for r in lists if r.witness is not None)
    return RegressionReport(
        records=records,
        pair_lists=lists,
        enumeration=enumeration,
        summary=summary,
        exit_code=3 if counts.get("mismatch") else 0,
    )
