# app/report.py
from __future__ import annotations

from typing import List, Sequence

from app.algebra import AlgebraPair, check_compatible
from app.cohomology import CohomologyMode, second_cohomology
from app.errors import UnknownInvariant
from app.linalg import OperatorSpace
from app.linear_invariants import InvariantKind, general_matrices, invariant_space
from app.matrices import ParametricMatrix, matrix_text, zeros
from app.nonlinear import IdentityTag, OperatorIdentity, Variant, grid_matrix, grid_solve, verify_family
from app.obs import timed
from app.schemas import CohomologyModel, DefectModel, IdentityModel, InvariantModel, PairReport
from app.vectorized import ENUMERATION_LIMITS

COHOMOLOGY = "cohomology"
ALL_NAMES = [k.value for k in InvariantKind] + [t.value for t in IdentityTag] + [COHOMOLOGY]


def parse_names(text: str | Sequence[str] | None) -> List[str]:
    if text is None:
        return list(ALL_NAMES)
    items = text.split(",") if isinstance(text, str) else list(text)
    out = []
    for item in (s.strip() for s in items):
        if not item:
            continue
        if item == "all":
            return list(ALL_NAMES)
        if item not in ALL_NAMES:
            raise UnknownInvariant(f"unknown invariant {item!r}; expected one of {', '.join(ALL_NAMES)}")
        if item not in out:
            out.append(item)
    return out


def invariant_model(space: OperatorSpace) -> InvariantModel:
    return InvariantModel(
        kind=space.kind,
        dim=space.dim,
        parameters=list(space.parameter_names()),
        general_element=[matrix_text(m) for m in general_matrices(space)],
        projection_dim=space.meta_value("projection_dim"),
        exceptional=[str(e) for e in space.exceptional],
        unresolved=[f"{p} = 0" for p in space.unresolved],
    )


def identity_model(pair: AlgebraPair, identity: OperatorIdentity, sample: int = 5) -> IdentityModel:
    n = pair.dim
    zero = verify_family(pair, identity, ParametricMatrix(zeros(n)))
    bound = ENUMERATION_LIMITS.get(n)
    if bound is None:
        return IdentityModel(identity=identity.label, zero_map_passes=zero.verified,
                             skipped=f"no exhaustive enumeration for dimension {n}")
    sols = grid_solve(pair, identity, bound)
    return IdentityModel(
        identity=identity.label,
        zero_map_passes=zero.verified,
        grid_bound=bound,
        grid_solutions=len(sols),
        sample=[matrix_text(grid_matrix(m)) for m in sols[:sample]],
    )


def cohomology_model(pair: AlgebraPair, mode: CohomologyMode) -> CohomologyModel:
    res = second_cohomology(pair, mode)
    return CohomologyModel(
        mode=mode.value,
        dim_Z2=res.dim_Z2,
        dim_B2=res.dim_B2,
        dim_B2_in_Z2=res.dim_B2_in_Z2,
        dim_H2=res.dim_H2,
        generators=list(res.generator_labels),
        coboundaries_are_cocycles=res.coboundaries_are_cocycles,
        order_independent=res.order_independent,
    )


def run_report(
    pair: AlgebraPair,
    names: str | Sequence[str] | None = None,
    variant: str = "paper",
    cohomology_mode: str | None = None,
) -> PairReport:
    """
    One JSON-ready report for a pair. `cohomology_mode` None computes both modes.
    Nothing in the result depends on timing or worker count.
    """
    wanted = parse_names(names)
    v = Variant(variant)
    modes = [CohomologyMode(cohomology_mode)] if cohomology_mode else list(CohomologyMode)
    warnings: List[str] = []
    with timed("run_report", pair=pair.name):
        report = PairReport(
            pair=pair.name,
            dim=pair.dim,
            parameters=[p.name for p in pair.parameters],
            compatibility=DefectModel(**check_compatible(pair).to_dict()),
        )
        for kind in InvariantKind:
            if kind.value not in wanted:
                continue
            space = invariant_space(pair, kind)
            for e in space.exceptional:
                warnings.append(f"{kind.value}: rank drops at {e}")
            for p in space.unresolved:
                warnings.append(f"{kind.value}: rank may drop where {p} = 0")
            report.invariants.append(invariant_model(space))
        for tag in IdentityTag:
            if tag.value not in wanted:
                continue
            identity = OperatorIdentity(tag, v if tag in (IdentityTag.NIJENHUIS, IdentityTag.REYNOLDS) else Variant.PAPER)
            report.identities.append(identity_model(pair, identity))
        if COHOMOLOGY in wanted:
            report.cohomology = [cohomology_model(pair, m) for m in modes]
        report.warnings = warnings
    return report
